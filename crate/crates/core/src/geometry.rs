//! Seeded Monte Carlo simulation of the random convex chain.
//!
//! A trial drops `n` uniform points into the triangle with vertices
//! `(0,0)`, `(1,0)`, `(0,1)` and counts the vertices of the convex hull of
//! the points together with the anchors `(1,0)` and `(0,1)`.
//!
//! Reproducibility is part of the interface: trial `t` draws from a
//! dedicated ChaCha8 stream keyed by SplitMix64 outputs at positions
//! `4t .. 4t+3` of the sequence seeded with the run seed. Results are
//! therefore a pure function of `(n, reps, seed)`, bit-identical for any
//! worker-thread count, and trials can be replayed individually.

use std::collections::BTreeMap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::exactdist::pmf_stats;
use crate::{Error, Result};

/// A planar point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Point {
    pub x: f64,
    pub y: f64,
}

/// Anchor vertices of the chain.
pub const V1: Point = Point { x: 1.0, y: 0.0 };
pub const V2: Point = Point { x: 0.0, y: 1.0 };

/// Monte Carlo run parameters.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SimulationConfig {
    /// Points per trial.
    pub n: usize,
    /// Number of independent trials.
    pub reps: u64,
    /// Run seed; trials derive substreams from it.
    pub seed: u64,
    /// Worker threads (results do not depend on this).
    pub threads: usize,
}

/// Histogram of observed `f0` values over all trials.
#[derive(Debug, Clone, PartialEq)]
pub struct EmpiricalDistribution {
    counts: BTreeMap<u64, u64>,
    reps: u64,
}

impl EmpiricalDistribution {
    pub fn counts(&self) -> &BTreeMap<u64, u64> {
        &self.counts
    }

    pub fn reps(&self) -> u64 {
        self.reps
    }

    pub fn mean(&self) -> f64 {
        let s: f64 = self.counts.iter().map(|(&v, &c)| v as f64 * c as f64).sum();
        s / self.reps as f64
    }

    pub fn variance(&self) -> f64 {
        let m = self.mean();
        let s: f64 = self
            .counts
            .iter()
            .map(|(&v, &c)| (v as f64 - m) * (v as f64 - m) * c as f64)
            .sum();
        s / self.reps as f64
    }

    pub fn max_f0(&self) -> Option<u64> {
        self.counts.keys().next_back().copied()
    }

    /// Empirical pmf indexed like the exact rows: entry `k` estimates
    /// `P(f0 = k + 2)`.
    pub fn pmf_row(&self, len: usize) -> Vec<f64> {
        let mut row = vec![0.0; len];
        for (&v, &c) in &self.counts {
            let k = (v - 2) as usize;
            if k < len {
                row[k] = c as f64 / self.reps as f64;
            }
        }
        row
    }
}

const GOLDEN: u64 = 0x9E37_79B9_7F4A_7C15;

fn splitmix64(state: &mut u64) -> u64 {
    *state = state.wrapping_add(GOLDEN);
    let mut z = *state;
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// 32-byte ChaCha key for one trial: SplitMix64 outputs `4t .. 4t+3`, so
/// trial windows are disjoint.
fn trial_key(seed: u64, trial: u64) -> [u8; 32] {
    let mut state = seed.wrapping_add(trial.wrapping_mul(4).wrapping_mul(GOLDEN));
    let mut key = [0u8; 32];
    for chunk in key.chunks_exact_mut(8) {
        chunk.copy_from_slice(&splitmix64(&mut state).to_le_bytes());
    }
    key
}

/// RNG for one trial of a seeded run.
pub fn trial_rng(seed: u64, trial: u64) -> ChaCha8Rng {
    ChaCha8Rng::from_seed(trial_key(seed, trial))
}

/// One uniform point in the triangle, by folding the unit square along the
/// diagonal: exactly uniform, no transcendentals.
pub fn sample_triangle(rng: &mut impl Rng) -> Point {
    let u: f64 = rng.random();
    let v: f64 = rng.random();
    if u + v <= 1.0 {
        Point { x: u, y: v }
    } else {
        Point { x: 1.0 - u, y: 1.0 - v }
    }
}

#[inline]
fn cross(o: Point, a: Point, b: Point) -> f64 {
    (a.x - o.x) * (b.y - o.y) - (a.y - o.y) * (b.x - o.x)
}

/// Number of hull vertices of `{(1,0), (0,1)} ∪ points` (the two anchors
/// included), by sort + monotone chain. Collinear points are not counted as
/// vertices; the turn predicate is strict.
pub fn chain_vertex_count(points: &[Point]) -> usize {
    let mut pts = Vec::with_capacity(points.len() + 2);
    pts.push(V1);
    pts.push(V2);
    pts.extend_from_slice(points);
    hull_vertex_count(&mut pts)
}

fn hull_vertex_count(pts: &mut Vec<Point>) -> usize {
    pts.sort_unstable_by(|a, b| a.x.total_cmp(&b.x).then(a.y.total_cmp(&b.y)));
    pts.dedup_by(|a, b| a.x == b.x && a.y == b.y);
    let n = pts.len();
    if n <= 2 {
        return n;
    }
    let mut lower: Vec<Point> = Vec::new();
    for &p in pts.iter() {
        while lower.len() >= 2
            && cross(lower[lower.len() - 2], lower[lower.len() - 1], p) <= 0.0
        {
            lower.pop();
        }
        lower.push(p);
    }
    let mut upper: Vec<Point> = Vec::new();
    for &p in pts.iter().rev() {
        while upper.len() >= 2
            && cross(upper[upper.len() - 2], upper[upper.len() - 1], p) <= 0.0
        {
            upper.pop();
        }
        upper.push(p);
    }
    // chain endpoints are shared between the two hulls
    lower.len() + upper.len() - 2
}

fn run_trial(n: usize, seed: u64, trial: u64, buf: &mut Vec<Point>) -> u64 {
    let mut rng = trial_rng(seed, trial);
    buf.clear();
    for _ in 0..n {
        buf.push(sample_triangle(&mut rng));
    }
    chain_vertex_count(buf) as u64
}

/// Run `cfg.reps` independent trials. The histogram is a pure function of
/// `(n, reps, seed)`; worker threads only partition the trial range.
pub fn monte_carlo(cfg: &SimulationConfig) -> EmpiricalDistribution {
    let threads = cfg.threads.max(1).min(cfg.reps.max(1) as usize);
    let merged = if threads == 1 {
        let mut counts = BTreeMap::new();
        let mut buf = Vec::with_capacity(cfg.n + 2);
        for t in 0..cfg.reps {
            *counts.entry(run_trial(cfg.n, cfg.seed, t, &mut buf)).or_insert(0u64) += 1;
        }
        counts
    } else {
        let mut locals: Vec<BTreeMap<u64, u64>> = Vec::with_capacity(threads);
        std::thread::scope(|scope| {
            let handles: Vec<_> = (0..threads)
                .map(|w| {
                    scope.spawn(move || {
                        let mut counts = BTreeMap::new();
                        let mut buf = Vec::with_capacity(cfg.n + 2);
                        let mut t = w as u64;
                        while t < cfg.reps {
                            *counts
                                .entry(run_trial(cfg.n, cfg.seed, t, &mut buf))
                                .or_insert(0u64) += 1;
                            t += threads as u64;
                        }
                        counts
                    })
                })
                .collect();
            for h in handles {
                locals.push(h.join().expect("simulation worker panicked"));
            }
        });
        let mut counts = BTreeMap::new();
        for local in locals {
            for (v, c) in local {
                *counts.entry(v).or_insert(0u64) += c;
            }
        }
        counts
    };
    EmpiricalDistribution { counts: merged, reps: cfg.reps }
}

/// Empirical-vs-exact comparison summary.
#[derive(Debug, Clone, Copy)]
pub struct ComparisonStats {
    /// Total variation distance `1/2 sum |phat - p|`.
    pub tv: f64,
    /// Pearson statistic over bins with expected count >= 5.
    pub chi_square: f64,
    /// `(empirical mean - exact mean) / (exact sd / sqrt(reps))`.
    pub mean_z: f64,
}

/// Compare an empirical histogram against an exact row
/// (`exact_row[k] = P(f0 = k + 2)`).
pub fn compare_to_exact(
    emp: &EmpiricalDistribution,
    exact_row: &[f64],
) -> Result<ComparisonStats> {
    if let Some(max) = emp.max_f0() {
        let k = (max - 2) as usize;
        if k >= exact_row.len() {
            return Err(Error::Coverage(format!(
                "observed f0 = {max} beyond the exact row (len {})",
                exact_row.len()
            )));
        }
    }
    let reps = emp.reps() as f64;
    let emp_row = emp.pmf_row(exact_row.len());
    let tv = 0.5
        * emp_row
            .iter()
            .zip(exact_row)
            .map(|(a, b)| (a - b).abs())
            .sum::<f64>();
    let mut chi = 0.0;
    for (k, &p) in exact_row.iter().enumerate() {
        let expect = reps * p;
        if expect >= 5.0 {
            let obs = emp_row[k] * reps;
            chi += (obs - expect) * (obs - expect) / expect;
        }
    }
    let stats = pmf_stats(exact_row);
    let mean_z = (emp.mean() - stats.mean) / (stats.sd / reps.sqrt());
    Ok(ComparisonStats { tv, chi_square: chi, mean_z })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn samples_stay_in_triangle_with_centroid_mean() {
        let mut rng = trial_rng(42, 0);
        let m = 100_000;
        let (mut sx, mut sy) = (0.0, 0.0);
        for _ in 0..m {
            let p = sample_triangle(&mut rng);
            assert!(p.x >= 0.0 && p.y >= 0.0 && p.x + p.y <= 1.0);
            sx += p.x;
            sy += p.y;
        }
        // sd of a coordinate is sqrt(1/18); allow 3 standard errors
        let tol = 3.0 * (1.0 / 18.0f64).sqrt() / (m as f64).sqrt();
        assert!((sx / m as f64 - 1.0 / 3.0).abs() <= tol);
        assert!((sy / m as f64 - 1.0 / 3.0).abs() <= tol);
    }

    #[test]
    fn substreams_are_deterministic() {
        let a: Vec<_> = (0..10).map(|_| sample_triangle(&mut trial_rng(7, 3))).collect();
        let b: Vec<_> = (0..10).map(|_| sample_triangle(&mut trial_rng(7, 3))).collect();
        assert_eq!(a, b);
        let c: Vec<_> = (0..10).map(|_| sample_triangle(&mut trial_rng(7, 4))).collect();
        assert_ne!(a, c);
    }

    #[test]
    fn hull_counts_small_cases() {
        assert_eq!(chain_vertex_count(&[]), 2);
        assert_eq!(chain_vertex_count(&[Point { x: 0.1, y: 0.1 }]), 3);
        // the second point lies inside the hull of the anchors and the first
        let two = [Point { x: 0.2, y: 0.2 }, Point { x: 0.25, y: 0.25 }];
        assert_eq!(chain_vertex_count(&two), 3);
        // collinear with the anchor segment: not a vertex
        assert_eq!(chain_vertex_count(&[Point { x: 0.5, y: 0.5 }]), 2);
        // two genuine chain vertices
        let two = [Point { x: 0.1, y: 0.3 }, Point { x: 0.3, y: 0.1 }];
        assert_eq!(chain_vertex_count(&two), 4);
    }

    #[test]
    fn degenerate_trial_sizes() {
        let cfg = SimulationConfig { n: 0, reps: 100, seed: 5, threads: 2 };
        let emp = monte_carlo(&cfg);
        assert_eq!(emp.counts().len(), 1);
        assert_eq!(emp.counts()[&2], 100);

        let cfg = SimulationConfig { n: 1, reps: 100, seed: 5, threads: 2 };
        let emp = monte_carlo(&cfg);
        assert_eq!(emp.counts()[&3], 100);
    }

    #[test]
    fn thread_count_does_not_change_results() {
        let base = monte_carlo(&SimulationConfig { n: 50, reps: 200, seed: 11, threads: 1 });
        for threads in [2, 3, 7] {
            let other = monte_carlo(&SimulationConfig { n: 50, reps: 200, seed: 11, threads });
            assert_eq!(base, other, "threads = {threads}");
        }
    }

    #[test]
    fn comparison_statistics_extremes() {
        let cfg = SimulationConfig { n: 1, reps: 50, seed: 9, threads: 1 };
        let emp = monte_carlo(&cfg);
        // exact law of f0 for n = 1 is a point mass at 3 (row index 1)
        let stats = compare_to_exact(&emp, &[0.0, 1.0]).unwrap();
        assert_eq!(stats.tv, 0.0);
        // against a disjoint point mass the distance is 1
        let stats = compare_to_exact(&emp, &[1.0, 0.0]).unwrap();
        assert_eq!(stats.tv, 1.0);
        // coverage failure
        assert!(compare_to_exact(&emp, &[1.0]).is_err());
    }

    #[test]
    fn small_n_law() {
        let cfg = SimulationConfig { n: 2, reps: 100_000, seed: 123, threads: 4 };
        let emp = monte_carlo(&cfg);
        let p3 = emp.counts()[&3] as f64 / emp.reps() as f64;
        let se = (2.0 / 9.0f64 / emp.reps() as f64).sqrt();
        assert!((p3 - 2.0 / 3.0).abs() <= 4.0 * se, "p3 = {p3}");
    }
}
