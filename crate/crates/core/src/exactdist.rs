//! Exact and floating-point computation of the chain vertex-count
//! distribution.
//!
//! Everything here flows from the three-term recurrence
//!
//! ```text
//! C(n+1,2) p_k(n) = 2 C(n,2) p_k(n-1) - C(n-1,2) p_k(n-2) + p_{k-1}(n-1)
//! ```
//!
//! with base cases `p_0(0) = 1`, `p_1(1) = 1` and the convention that
//! `p_j(m) = 0` whenever `j < 0`, `j > m` or `m < 0`. The exact path clears
//! denominators: with `D_n = prod_{m<=n} C(m+1,2)` the scaled entries
//! `q_k(n) = p_k(n) D_n` are nonnegative integers satisfying
//!
//! ```text
//! q_k(n) = 2 C(n,2) q_k(n-1) - C(n-1,2) C(n,2) q_k(n-2) + q_{k-1}(n-1),
//! ```
//!
//! so a whole row costs integer multiplies by machine-word factors and no
//! gcd work; probabilities are reduced only on materialization. An
//! independent brute-force oracle sums the composition formula directly.
//!
//! The float path (`tail_dp`, `distribution_f64`) carries the recurrence in
//! double-double. The homogeneous recurrence admits a constant solution, so
//! any absolute rounding error injected early persists forever while the true
//! entries decay like `1/n`; in plain f64 that drift reaches ~1e-11 relative
//! by `n = 10^4`, which double-double pushes below 1e-20.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};

use crate::dd::Dd;
use crate::jet::{DdJet, Jet};
use crate::{Error, Result};

/// Entries below this are flushed to zero (and flagged) by the float DP.
/// Sits 20 orders below [`TAIL_ACCURACY_FLOOR`] so that every entry above
/// the accuracy floor is computed purely from unflushed inputs.
pub const UNDERFLOW_FLUSH: f64 = 1e-300;

/// Entries at or above this magnitude are accurate to 1e-10 relative.
pub const TAIL_ACCURACY_FLOOR: f64 = 1e-280;

/// Enumeration cap for the brute-force composition sum.
pub const BRUTE_FORCE_CAP: usize = 10;

/// Full exact distribution of `f0(T_n)`: `probs[k] = P(f0 = k + 2)`.
#[derive(Debug, Clone, PartialEq)]
pub struct ExactDistribution {
    n: usize,
    probs: Vec<BigRational>,
}

impl ExactDistribution {
    pub fn n(&self) -> usize {
        self.n
    }

    /// Probabilities indexed by the number of chain-interior vertices `k`.
    pub fn probs(&self) -> &[BigRational] {
        &self.probs
    }

    pub fn prob(&self, k: usize) -> &BigRational {
        &self.probs[k]
    }

    /// Exact mean of `f0` (vertex count including both anchors).
    pub fn mean(&self) -> BigRational {
        let mut acc = BigRational::zero();
        for (k, p) in self.probs.iter().enumerate() {
            acc += p * BigRational::from_integer(BigInt::from(k + 2));
        }
        acc
    }

    /// Exact variance of `f0`.
    pub fn variance(&self) -> BigRational {
        let m = self.mean();
        let mut acc = BigRational::zero();
        for (k, p) in self.probs.iter().enumerate() {
            let d = BigRational::from_integer(BigInt::from(k + 2)) - &m;
            acc += p * (&d * &d);
        }
        acc
    }

    /// Row of `f64` probabilities.
    pub fn to_f64_row(&self) -> Vec<f64> {
        self.probs.iter().map(ratio_to_f64).collect()
    }
}

/// Probability generating polynomial `G_n(z) = sum_k p_k(n) z^k`.
#[derive(Debug, Clone, PartialEq)]
pub struct GenPoly {
    n: usize,
    coeffs: Vec<BigRational>,
}

impl GenPoly {
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn coeffs(&self) -> &[BigRational] {
        &self.coeffs
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn eval_f64(&self, z: f64) -> f64 {
        // Horner on the f64 image of the exact coefficients
        let mut acc = 0.0;
        for c in self.coeffs.iter().rev() {
            acc = acc * z + ratio_to_f64(c);
        }
        acc
    }

    /// Exact value of `G_n(1)`; equals one for every `n`.
    pub fn eval_at_one(&self) -> BigRational {
        let mut acc = BigRational::zero();
        for c in &self.coeffs {
            acc += c;
        }
        acc
    }

    /// Exact `G_n'(1) = sum k c_k`.
    pub fn derivative_at_one(&self) -> BigRational {
        let mut acc = BigRational::zero();
        for (k, c) in self.coeffs.iter().enumerate() {
            acc += c * BigRational::from_integer(BigInt::from(k));
        }
        acc
    }

    /// Exact `G_n''(1) = sum k (k-1) c_k`.
    pub fn second_derivative_at_one(&self) -> BigRational {
        let mut acc = BigRational::zero();
        for (k, c) in self.coeffs.iter().enumerate() {
            acc += c * BigRational::from_integer(BigInt::from(k * k.saturating_sub(1)));
        }
        acc
    }
}

/// Exact cumulants `kappa^(1) .. kappa^(R)` of `f0(T_n)`.
#[derive(Debug, Clone, PartialEq)]
pub struct CumulantVector {
    pub n: usize,
    /// `values[r-1]` holds the r-th cumulant.
    pub values: Vec<f64>,
}

/// Convert a possibly huge rational to the nearest-ish `f64`.
///
/// `num/den` may each exceed the f64 range even when the quotient is tame,
/// so shift the numerator to give the integer quotient ~64 significant bits
/// and rescale.
pub fn ratio_to_f64(r: &BigRational) -> f64 {
    if r.numer().is_zero() {
        return 0.0;
    }
    let num = r.numer();
    let den = r.denom();
    let shift = den.bits() as i64 - num.bits() as i64 + 64;
    let scaled = if shift >= 0 { num << shift as usize } else { num >> (-shift) as usize };
    let q = scaled / den;
    let qf = q.to_f64().unwrap_or(f64::NAN);
    qf * 2f64.powi((-shift).clamp(i32::MIN as i64, i32::MAX as i64) as i32)
}

fn factorial(n: usize) -> BigInt {
    let mut acc = BigInt::one();
    for m in 2..=n {
        acc *= BigInt::from(m);
    }
    acc
}

/// Walk the scaled-integer rows `q_k(n)` for `n = 0..=n_max`, handing each
/// row and its common denominator `D_n` to the visitor.
pub(crate) fn for_each_scaled_row(
    n_max: usize,
    mut visit: impl FnMut(usize, &[BigInt], &BigInt),
) {
    let mut denom = BigInt::one();
    let mut prev2: Vec<BigInt> = vec![BigInt::one()];
    visit(0, &prev2, &denom);
    if n_max == 0 {
        return;
    }
    let mut prev1: Vec<BigInt> = vec![BigInt::zero(), BigInt::one()];
    visit(1, &prev1, &denom); // D_1 = C(2,2) = 1
    for n in 2..=n_max {
        let c_n = (n * (n - 1) / 2) as u64;
        let c_m = ((n - 1) * (n - 2) / 2) as u64;
        let mut row = Vec::with_capacity(n + 1);
        row.push(BigInt::zero());
        for k in 1..=n {
            let mut v = if k < prev1.len() { &prev1[k] * (2 * c_n) } else { BigInt::zero() };
            if k < prev2.len() {
                v -= &prev2[k] * (c_m * c_n);
            }
            v += &prev1[k - 1];
            row.push(v);
        }
        denom *= BigInt::from((n * (n + 1) / 2) as u64);
        visit(n, &row, &denom);
        prev2 = std::mem::replace(&mut prev1, row);
    }
}

/// Exact distribution of `f0(T_n)` via the scaled-integer recurrence.
pub fn distribution(n: usize) -> ExactDistribution {
    let mut out = None;
    for_each_scaled_row(n, |m, row, denom| {
        if m == n {
            let probs = row
                .iter()
                .map(|q| BigRational::new(q.clone(), denom.clone()))
                .collect();
            out = Some(ExactDistribution { n, probs });
        }
    });
    out.expect("row visitor always reaches n")
}

/// Full float row of the distribution. Plain f64: fast enough for the whole
/// practical range (`n` up to ~1e5); use [`tail_dp`] when column accuracy at
/// the 1e-10 level matters.
pub fn distribution_f64(n: usize) -> Vec<f64> {
    if n == 0 {
        return vec![1.0];
    }
    let mut prev2 = vec![1.0];
    let mut prev1 = vec![0.0, 1.0];
    for m in 2..=n {
        let mf = m as f64;
        let c_n1 = mf * (mf + 1.0) / 2.0;
        let c_n = mf * (mf - 1.0); // 2 C(m,2)
        let c_m = (mf - 1.0) * (mf - 2.0) / 2.0;
        let mut row = vec![0.0; m + 1];
        for k in 1..=m {
            let mut v = if k < prev1.len() { prev1[k] * c_n } else { 0.0 };
            if k < prev2.len() {
                v -= prev2[k] * c_m;
            }
            v = (v + prev1[k - 1]) / c_n1;
            row[k] = if v < UNDERFLOW_FLUSH { 0.0 } else { v };
        }
        prev2 = std::mem::replace(&mut prev1, row);
    }
    prev1
}

/// Brute-force oracle: sum of `prod i_m / C(I_m + 1, 2)` over all
/// compositions of `n` into `k` positive parts. Exponential; capped.
pub fn brute_force_pk(n: usize, k: usize) -> Result<BigRational> {
    if n > BRUTE_FORCE_CAP {
        return Err(Error::Cap(format!(
            "brute_force_pk enumerates compositions; n = {n} exceeds cap {BRUTE_FORCE_CAP}"
        )));
    }
    if n == 0 {
        return if k == 0 {
            Ok(BigRational::one())
        } else {
            Err(Error::Domain("k must be 0 when n = 0".into()))
        };
    }
    if k == 0 || k > n {
        return Err(Error::Domain(format!("k = {k} outside 1..={n}")));
    }
    let mut total = BigRational::zero();
    // parts[i] >= 1, sum = n; depth-first over prefix sums
    let mut parts = vec![0usize; k];
    fn rec(
        parts: &mut Vec<usize>,
        depth: usize,
        remaining: usize,
        prefix: usize,
        term: BigRational,
        total: &mut BigRational,
    ) {
        let k = parts.len();
        if depth == k - 1 {
            let i = remaining;
            let cap_i = prefix + i;
            let binom = BigInt::from(cap_i * (cap_i + 1) / 2);
            *total += term * BigRational::new(BigInt::from(i), binom);
            return;
        }
        let max_part = remaining - (k - 1 - depth);
        for i in 1..=max_part {
            let cap_i = prefix + i;
            let binom = BigInt::from(cap_i * (cap_i + 1) / 2);
            let next = &term * BigRational::new(BigInt::from(i), binom);
            rec(parts, depth + 1, remaining - i, cap_i, next, total);
        }
    }
    rec(&mut parts, 0, n, 0, BigRational::one(), &mut total);
    Ok(total)
}

/// Generating polynomial via the three-term polynomial recurrence
/// `G_n = (a_n z + b_n) G_{n-1} - c_n G_{n-2}` with
/// `a_n = 2/(n(n+1))`, `b_n = 2(n-1)/(n+1)`, `c_n = (n-1)(n-2)/(n(n+1))`.
pub fn genpoly(n: usize) -> GenPoly {
    let one = BigRational::one();
    if n == 0 {
        return GenPoly { n, coeffs: vec![one] };
    }
    let mut prev2 = vec![one.clone()];
    let mut prev1 = vec![BigRational::zero(), one];
    for m in 2..=n {
        let mm = BigInt::from(m);
        let a = BigRational::new(BigInt::from(2), (&mm * (m + 1)).clone());
        let b = BigRational::new(BigInt::from(2 * (m - 1)), BigInt::from(m + 1));
        let c = BigRational::new(BigInt::from((m - 1) * (m - 2)), (&mm * (m + 1)).clone());
        let mut row = vec![BigRational::zero(); m + 1];
        for (k, coeff) in prev1.iter().enumerate() {
            row[k] += coeff * &b;
            row[k + 1] += coeff * &a;
        }
        for (k, coeff) in prev2.iter().enumerate() {
            row[k] -= coeff * &c;
        }
        prev2 = std::mem::replace(&mut prev1, row);
    }
    GenPoly { n, coeffs: prev1 }
}

/// Evaluate `G_n(z)` without materializing coefficients, by the recurrence
/// regrouped with integer coefficients:
/// `n(n+1) G_n = (2n(n-1) + 2z) G_{n-1} - (n-1)(n-2) G_{n-2}`.
pub fn eval_g(n: u64, z: f64) -> Result<f64> {
    let mut g0 = 1.0f64;
    let mut g1 = z;
    if n == 0 {
        return Ok(g0);
    }
    for m in 2..=n {
        let mf = m as f64;
        let next = ((2.0 * mf * (mf - 1.0) + 2.0 * z) * g1 - (mf - 1.0) * (mf - 2.0) * g0)
            / (mf * (mf + 1.0));
        if !next.is_finite() {
            return Err(Error::Overflow(format!("eval_g diverged at n = {m}, z = {z}")));
        }
        g0 = g1;
        g1 = next;
    }
    Ok(g1)
}

/// Prefix sweep of [`eval_g`]: returns `G_0(z) ..= G_n(z)` in one pass.
pub fn eval_g_prefix(n: usize, z: f64) -> Result<Vec<f64>> {
    let mut out = Vec::with_capacity(n + 1);
    out.push(1.0);
    if n == 0 {
        return Ok(out);
    }
    out.push(z);
    for m in 2..=n {
        let mf = m as f64;
        let next = ((2.0 * mf * (mf - 1.0) + 2.0 * z) * out[m - 1]
            - (mf - 1.0) * (mf - 2.0) * out[m - 2])
            / (mf * (mf + 1.0));
        if !next.is_finite() {
            return Err(Error::Overflow(format!("eval_g diverged at n = {m}, z = {z}")));
        }
        out.push(next);
    }
    Ok(out)
}

/// Evaluate `G_n` at a jet (e.g. the jet of `e^t`), `O(n R^2)`.
pub fn eval_g_jet(n: u64, z: &Jet) -> Result<Jet> {
    let r = z.order();
    let mut g0 = Jet::constant(1.0, r);
    let mut g1 = z.clone();
    if n == 0 {
        return Ok(g0);
    }
    for m in 2..=n {
        let mf = m as f64;
        let lin = g1.scale(2.0 * mf * (mf - 1.0)).add(&z.mul(&g1).scale(2.0));
        let next = lin.sub(&g0.scale((mf - 1.0) * (mf - 2.0))).scale(1.0 / (mf * (mf + 1.0)));
        if !next.coeffs().iter().all(|c| c.is_finite()) {
            return Err(Error::Overflow(format!("eval_g_jet diverged at n = {m}")));
        }
        g0 = std::mem::replace(&mut g1, next);
    }
    Ok(g1)
}

/// Double-double jet sweep used by the exact-cumulant path. Coefficient
/// factors `m(m-1)` stay below 2^53 for every supported `m`.
pub(crate) fn eval_g_jet_dd(n: u64, z: &DdJet) -> Result<DdJet> {
    let r = z.order();
    let mut g0 = DdJet::constant(1.0, r);
    let mut g1 = DdJet { coeffs: z.coeffs.clone() };
    if n == 0 {
        return Ok(g0);
    }
    let mut cur = vec![Dd::ZERO; r + 1];
    for m in 2..=n {
        let mf = m as f64;
        let c_lin = 2.0 * mf * (mf - 1.0);
        let c_old = (mf - 1.0) * (mf - 2.0);
        let c_div = mf * (mf + 1.0);
        for i in 0..=r {
            let mut acc = g1.coeffs[i].mul_f64(c_lin).sub(g0.coeffs[i].mul_f64(c_old));
            for j in 0..=i {
                acc = acc.add(z.coeffs[j].mul(g1.coeffs[i - j]).mul_f64(2.0));
            }
            cur[i] = acc.div_f64(c_div);
        }
        if !cur[0].hi.is_finite() {
            return Err(Error::Overflow(format!("eval_g_jet_dd diverged at n = {m}")));
        }
        std::mem::swap(&mut g0.coeffs, &mut g1.coeffs);
        std::mem::swap(&mut g1.coeffs, &mut cur);
    }
    Ok(g1)
}

/// Exact cumulants of `f0(T_n)` to order `r_max` via the log of
/// `e^{2t} G_n(e^t)` in jet arithmetic.
pub fn exact_cumulants(n: u64, r_max: usize) -> Result<CumulantVector> {
    if n == 0 {
        return Err(Error::Domain("exact_cumulants requires n >= 1".into()));
    }
    if !(1..=12).contains(&r_max) {
        return Err(Error::Domain(format!("cumulant order {r_max} outside 1..=12")));
    }
    let z = DdJet::exp_t(r_max);
    let g = eval_g_jet_dd(n, &z)?;
    let mut lg = g.log();
    lg.coeffs[1] = lg.coeffs[1].add_f64(2.0); // e^{2t} prefactor
    let mut values = Vec::with_capacity(r_max);
    let mut fact = 1.0;
    for r in 1..=r_max {
        fact *= r as f64;
        values.push(lg.coeffs[r].to_f64() * fact);
    }
    Ok(CumulantVector { n: n as usize, values })
}

/// Column-truncated float DP rows at the requested `n` values.
#[derive(Debug, Clone)]
pub struct TailDp {
    pub k_max: usize,
    /// Requested rows: `rows[&n][k] = p_k(n)` in double precision.
    pub rows: BTreeMap<usize, Vec<f64>>,
    /// Entries flushed to zero because they fell below [`UNDERFLOW_FLUSH`].
    pub underflow: BTreeMap<usize, Vec<bool>>,
}

impl TailDp {
    pub fn row(&self, n: usize) -> &[f64] {
        &self.rows[&n]
    }

    pub fn is_underflowed(&self, n: usize, k: usize) -> bool {
        self.underflow[&n][k]
    }
}

/// Run the truncated DP up to `n_max`, keeping only the snapshot rows.
/// Memory is two working rows of `k_max + 1` double-doubles.
pub fn tail_dp_snapshots(n_max: usize, k_max: usize, snapshots: &[usize]) -> TailDp {
    assert!(k_max >= 1);
    let mut wanted: Vec<usize> = snapshots.to_vec();
    wanted.sort_unstable();
    wanted.dedup();
    assert!(wanted.last().map_or(true, |&m| m <= n_max));

    let mut rows = BTreeMap::new();
    let mut underflow = BTreeMap::new();
    let width = k_max + 1;

    let mut prev2 = vec![Dd::ZERO; width];
    prev2[0] = Dd::ONE; // n = 0
    let mut prev1 = vec![Dd::ZERO; width];
    if width > 1 {
        prev1[1] = Dd::ONE; // n = 1
    }
    let snapshot = |row: &[Dd]| -> (Vec<f64>, Vec<bool>) {
        (row.iter().map(|d| d.to_f64()).collect(), vec![false; row.len()])
    };
    if wanted.contains(&0) {
        let (r, f) = snapshot(&prev2);
        rows.insert(0, r);
        underflow.insert(0, f);
    }
    if wanted.contains(&1) {
        let (r, f) = snapshot(&prev1);
        rows.insert(1, r);
        underflow.insert(1, f);
    }

    let mut cur = vec![Dd::ZERO; width];
    let mut cur_flags = vec![false; width];
    let mut prev1_flags = vec![false; width];
    let mut prev2_flags = vec![false; width];
    for n in 2..=n_max {
        let nf = n as f64;
        let c_n1 = nf * (nf + 1.0) / 2.0;
        let c_n2 = nf * (nf - 1.0); // 2 C(n,2)
        let c_m = (nf - 1.0) * (nf - 2.0) / 2.0;
        cur[0] = Dd::ZERO;
        cur_flags[0] = false;
        let top = k_max.min(n);
        for k in 1..=top {
            let v = prev1[k]
                .mul_f64(c_n2)
                .sub(prev2[k].mul_f64(c_m))
                .add(prev1[k - 1])
                .div_f64(c_n1);
            if v.hi < UNDERFLOW_FLUSH {
                cur[k] = Dd::ZERO;
                // only a true positive value flushed counts as underflow;
                // structural zeros (k > n) are not flagged
                cur_flags[k] = k <= n;
            } else {
                cur[k] = v;
                cur_flags[k] = false;
            }
        }
        for k in (top + 1)..width {
            cur[k] = Dd::ZERO;
            cur_flags[k] = false;
        }
        if rows.len() < wanted.len() && wanted.binary_search(&n).is_ok() {
            rows.insert(n, cur.iter().map(|d| d.to_f64()).collect());
            underflow.insert(n, cur_flags.clone());
        }
        std::mem::swap(&mut prev2, &mut prev1);
        std::mem::swap(&mut prev1, &mut cur);
        std::mem::swap(&mut prev2_flags, &mut prev1_flags);
        std::mem::swap(&mut prev1_flags, &mut cur_flags);
    }
    TailDp { k_max, rows, underflow }
}

/// All rows `n = 0..=n_max` of the truncated DP (moderate `n_max` only).
pub fn tail_dp(n_max: usize, k_max: usize) -> Vec<Vec<f64>> {
    let all: Vec<usize> = (0..=n_max).collect();
    let dp = tail_dp_snapshots(n_max, k_max, &all);
    all.iter().map(|n| dp.rows[n].clone()).collect()
}

/// Closed forms for the top of the distribution, `p_{n-k}(n)` for `k <= 3`.
///
/// `k = 0, 1, 2` use the explicit product/polynomial forms; `k = 3` has no
/// published closed form and falls back to the exact DP row.
pub fn top_probability(n: usize, k: usize) -> Result<BigRational> {
    if k > 3 {
        return Err(Error::Domain(format!("top_probability supports k in 0..=3, got {k}")));
    }
    if n < k + 2 {
        return Err(Error::Domain(format!("top_probability needs n >= k + 2, got n = {n}")));
    }
    let two_n = BigInt::from(2).pow(n as u32);
    let fact_n = factorial(n);
    match k {
        0 => Ok(BigRational::new(two_n, &fact_n * factorial(n + 1))),
        1 => {
            // 2^n n^2 (1 - 1/n) / (3 (n!)^2)
            let num = &two_n * BigInt::from(n * n);
            let base = BigRational::new(num, BigInt::from(3) * (&fact_n * &fact_n));
            let corr = BigRational::one()
                - BigRational::new(BigInt::one(), BigInt::from(n));
            Ok(base * corr)
        }
        2 => {
            // 2^n / (n!)^2 * (n^5/18 - 37 n^4/180 + 79 n^3/360 - 19 n^2/360 - n/60)
            let nb = BigInt::from(n);
            let poly = BigRational::new(nb.pow(5), BigInt::from(18))
                - BigRational::new(BigInt::from(37) * nb.pow(4), BigInt::from(180))
                + BigRational::new(BigInt::from(79) * nb.pow(3), BigInt::from(360))
                - BigRational::new(BigInt::from(19) * nb.pow(2), BigInt::from(360))
                - BigRational::new(nb.clone(), BigInt::from(60));
            Ok(BigRational::new(two_n, &fact_n * &fact_n) * poly)
        }
        _ => Ok(distribution(n).prob(n - 3).clone()),
    }
}

/// Newton's inequalities for the exact coefficients of `G_n`: for
/// `1 <= k <= n-1`,
/// `p_k^2 (1 + 1/k)(1 + 1/(n-k)) >= p_{k-1} p_{k+1}`.
/// A necessary consequence of real-rootedness; checked exactly on the
/// scaled integers. Returns whether all hold and the first violating `k`.
pub fn newton_inequality_check(n: usize) -> Result<(bool, Option<usize>)> {
    if n < 2 {
        return Err(Error::Domain("newton_inequality_check needs n >= 2".into()));
    }
    let mut verdict = (true, None);
    for_each_scaled_row(n, |m, row, _| {
        if m != n {
            return;
        }
        for k in 1..n {
            // q_k^2 (k+1)(n-k+1) >= q_{k-1} q_{k+1} k (n-k)
            let lhs = &row[k] * &row[k] * BigInt::from((k + 1) * (n - k + 1));
            let rhs = &row[k - 1] * &row[k + 1] * BigInt::from(k * (n - k));
            if lhs < rhs {
                verdict = (false, Some(k));
                return;
            }
        }
    });
    Ok(verdict)
}

/// Summary statistics of a float pmf row (`row[k] = P(f0 = k + 2)`).
#[derive(Debug, Clone, Copy)]
pub struct PmfStats {
    pub mean: f64,
    pub variance: f64,
    pub sd: f64,
    /// Third central moment (equals the third cumulant).
    pub kappa3: f64,
}

/// Mean, variance and third central moment of `f0` under a float row.
/// The row is renormalized by its own mass to absorb column truncation.
pub fn pmf_stats(row: &[f64]) -> PmfStats {
    let mass: f64 = row.iter().sum();
    let mean: f64 = row.iter().enumerate().map(|(k, p)| (k + 2) as f64 * p).sum::<f64>() / mass;
    let mut m2 = 0.0;
    let mut m3 = 0.0;
    for (k, p) in row.iter().enumerate() {
        let d = (k + 2) as f64 - mean;
        m2 += p * d * d;
        m3 += p * d * d * d;
    }
    m2 /= mass;
    m3 /= mass;
    PmfStats { mean, variance: m2, sd: m2.sqrt(), kappa3: m3 }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rat(n: i64, d: i64) -> BigRational {
        BigRational::new(BigInt::from(n), BigInt::from(d))
    }

    #[test]
    fn brute_force_known_values() {
        assert_eq!(brute_force_pk(2, 1).unwrap(), rat(2, 3));
        assert_eq!(brute_force_pk(2, 2).unwrap(), rat(1, 3));
        assert_eq!(brute_force_pk(5, 5).unwrap(), rat(1, 2700));
        assert!(brute_force_pk(3, 0).is_err());
        assert!(brute_force_pk(11, 2).is_err());
    }

    #[test]
    fn distribution_small_rows() {
        assert_eq!(distribution(0).probs(), &[rat(1, 1)]);
        assert_eq!(distribution(1).probs(), &[rat(0, 1), rat(1, 1)]);
        assert_eq!(distribution(2).probs(), &[rat(0, 1), rat(2, 3), rat(1, 3)]);
    }

    #[test]
    fn distribution_matches_brute_force_oracle() {
        for n in 1..=9usize {
            let d = distribution(n);
            for k in 1..=n {
                assert_eq!(d.prob(k), &brute_force_pk(n, k).unwrap(), "n={n} k={k}");
            }
            assert_eq!(d.prob(0), &BigRational::zero());
        }
    }

    #[test]
    fn distribution_normalizes_exactly() {
        for n in [0usize, 1, 2, 7, 40, 120] {
            let total: BigRational = distribution(n).probs().iter().cloned().sum();
            assert_eq!(total, BigRational::one(), "n = {n}");
        }
    }

    #[test]
    fn genpoly_matches_distribution_and_examples() {
        assert_eq!(genpoly(1).coeffs(), &[rat(0, 1), rat(1, 1)]);
        assert_eq!(genpoly(2).coeffs(), &[rat(0, 1), rat(2, 3), rat(1, 3)]);
        for n in [3usize, 5, 9, 25] {
            assert_eq!(genpoly(n).coeffs(), distribution(n).probs(), "n = {n}");
            assert_eq!(genpoly(n).eval_at_one(), BigRational::one());
        }
    }

    #[test]
    fn eval_g_matches_genpoly_and_is_exact_at_one() {
        assert_eq!(eval_g(50, 1.0).unwrap(), 1.0);
        let g10 = genpoly(10);
        let direct = g10.eval_f64(0.5);
        let fast = eval_g(10, 0.5).unwrap();
        assert!((direct - fast).abs() <= 1e-13 * direct.abs());
    }

    #[test]
    fn eval_g_jet_first_coefficient_is_shifted_mean() {
        // [t^1] G_n(e^t) = G_n'(1) = E f0 - 2
        let g = genpoly(100);
        let exact_mean_minus_2 = ratio_to_f64(&g.derivative_at_one());
        let jet = eval_g_jet(100, &Jet::exp_t(2)).unwrap();
        assert!((jet.coeffs()[1] - exact_mean_minus_2).abs() <= 1e-9 * exact_mean_minus_2);
    }

    #[test]
    fn cumulants_of_degenerate_n1() {
        let c = exact_cumulants(1, 2).unwrap();
        assert!((c.values[0] - 3.0).abs() < 1e-14);
        assert!(c.values[1].abs() < 1e-14);
    }

    #[test]
    fn cumulants_match_exact_moments() {
        for n in [2u64, 5, 17, 50] {
            let g = genpoly(n as usize);
            let d1 = ratio_to_f64(&g.derivative_at_one());
            let d2 = ratio_to_f64(&g.second_derivative_at_one());
            let mean = d1 + 2.0;
            let var = d2 + d1 - d1 * d1;
            let c = exact_cumulants(n, 2).unwrap();
            assert!((c.values[0] - mean).abs() <= 1e-9 * mean, "mean n={n}");
            assert!((c.values[1] - var).abs() <= 1e-9 * var.max(1e-12), "var n={n}");
        }
    }

    #[test]
    fn tail_dp_matches_exact_row() {
        let dp = tail_dp_snapshots(100, 100, &[100]);
        let exact = distribution(100).to_f64_row();
        for (k, (a, b)) in dp.row(100).iter().zip(&exact).enumerate() {
            if *b >= TAIL_ACCURACY_FLOOR {
                assert!((a - b).abs() <= 1e-10 * b, "k = {k}: {a} vs {b}");
            }
        }
    }

    #[test]
    fn tail_dp_closed_form_columns() {
        let rows = tail_dp(300, 10);
        for n in 2..=300usize {
            let p1 = 2.0 / (n as f64 + 1.0);
            assert!((rows[n][1] - p1).abs() <= 1e-13 * p1, "n = {n}");
        }
        // p_2(n) = (4/n) [ (sum_{j=1}^{n-1} 1/(j+1)) - 1 + 2/(n+1) ]
        let mut h = 0.0;
        for j in 1..300 {
            h += 1.0 / (j as f64 + 1.0);
            let n = (j + 1) as f64;
            let p2 = 4.0 / n * (h - 1.0 + 2.0 / (n + 1.0));
            if j + 1 >= 2 {
                assert!((rows[j + 1][2] - p2).abs() <= 1e-12 * p2.abs().max(1e-300), "n = {}", j + 1);
            }
        }
    }

    #[test]
    fn top_probability_closed_forms() {
        assert_eq!(top_probability(5, 0).unwrap(), rat(1, 2700));
        assert_eq!(top_probability(5, 1).unwrap(), rat(2, 135));
        let d10 = distribution(10);
        assert_eq!(&top_probability(10, 2).unwrap(), d10.prob(8));
        assert_eq!(&top_probability(10, 3).unwrap(), d10.prob(7));
        assert!(top_probability(10, 4).is_err());
        assert!(top_probability(3, 2).is_err());
    }

    #[test]
    fn newton_inequalities_hold() {
        for n in [2usize, 10, 60] {
            let (ok, first) = newton_inequality_check(n).unwrap();
            assert!(ok, "violation at {first:?} for n = {n}");
        }
    }

    #[test]
    fn float_rows_are_unimodal() {
        for n in [5usize, 50, 500, 5000] {
            let row = distribution_f64(n);
            let peak = row
                .iter()
                .enumerate()
                .max_by(|a, b| a.1.total_cmp(b.1))
                .unwrap()
                .0;
            for k in 1..peak {
                assert!(row[k] <= row[k + 1] * (1.0 + 1e-12), "rise n={n} k={k}");
            }
            for k in peak..row.len() - 1 {
                assert!(row[k] >= row[k + 1] * (1.0 - 1e-12), "fall n={n} k={k}");
            }
        }
    }

    #[test]
    fn ratio_to_f64_handles_huge_terms() {
        let big = BigInt::from(10).pow(400);
        let r = BigRational::new(big.clone(), 3 * big);
        assert!((ratio_to_f64(&r) - 1.0 / 3.0).abs() < 1e-15);
        assert_eq!(ratio_to_f64(&BigRational::zero()), 0.0);
        let neg = BigRational::new(BigInt::from(-7), BigInt::from(2));
        assert_eq!(ratio_to_f64(&neg), -3.5);
    }

    #[test]
    fn pmf_stats_on_point_mass() {
        let s = pmf_stats(&[0.0, 1.0]);
        assert_eq!(s.mean, 3.0);
        assert_eq!(s.variance, 0.0);
    }
}
