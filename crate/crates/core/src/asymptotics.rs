//! Limit-theorem formulas for the vertex count: cumulant prefactors, CLT and
//! Edgeworth predictors, the large-deviation rate function with a numeric
//! Legendre-Fenchel oracle, fixed-`k` probability asymptotics, and the
//! saddle-point point-probability estimate.
//!
//! The scaled cumulant generating function of `f0(T_n)` converges to
//! `mu(t) = alpha(e^t) - 1`, which is analytic, strictly convex, and finite
//! on all of `R`. Everything in this module is a consequence of that limit:
//! cumulants grow like `mu^(r)(0) log n`, the CLT error is `O(1/sqrt(log n))`,
//! and `f0/log n` obeys a large deviation principle at speed `log n` with the
//! rate function `I = mu*` made explicit in [`rate_i`].

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;

use crate::analytic::k_of_alpha;
use crate::exactdist::TailDp;
use crate::special::{ln_gamma, norm_cdf, norm_pdf};
use crate::{Error, Result};

use std::f64::consts::PI;

/// `mu(t) = alpha(e^t) - 1`, the limiting scaled cumulant generating
/// function of `f0(T_n) / log n`.
pub fn mu(t: f64) -> f64 {
    ((8.0 * t.exp() + 1.0).sqrt() - 1.0) / 2.0 - 1.0
}

/// `mu'(t) = 2 e^t / sqrt(8 e^t + 1)`; strictly positive and increasing,
/// with range `(0, infinity)` and `mu'(0) = 2/3`.
pub fn mu_prime(t: f64) -> f64 {
    let e = t.exp();
    2.0 * e / (8.0 * e + 1.0).sqrt()
}

/// `mu''(t) = e^t (8 e^t + 2) / (8 e^t + 1)^{3/2}`; `mu''(0) = 10/27`.
pub fn mu_second(t: f64) -> f64 {
    let e = t.exp();
    e * (8.0 * e + 2.0) / (8.0 * e + 1.0).powf(1.5)
}

/// Second-order term of the cumulant generating function:
/// `psi(t) = 2t + log( K(alpha(e^t)) / Gamma(alpha(e^t)) )`.
pub fn psi(t: f64) -> f64 {
    let alpha = ((8.0 * t.exp() + 1.0).sqrt() - 1.0) / 2.0;
    2.0 * t + k_of_alpha(alpha).ln() - ln_gamma(alpha)
}

/// Stirling number of the second kind `S(r, k)` by the triangle recurrence.
pub fn stirling2(r: u32, k: u32) -> Result<u128> {
    if r > 30 {
        return Err(Error::Cap(format!("stirling2 supports r <= 30, got {r}")));
    }
    if k > r {
        return Err(Error::Domain(format!("stirling2 needs k <= r, got k = {k}, r = {r}")));
    }
    // S(r, k) = k S(r-1, k) + S(r-1, k-1)
    let mut row: Vec<u128> = vec![1]; // S(0, 0)
    for _ in 1..=r {
        let mut next = vec![0u128; row.len() + 1];
        for (j, &v) in row.iter().enumerate() {
            next[j] += j as u128 * v;
            next[j + 1] += v;
        }
        row = next;
    }
    Ok(row[k as usize])
}

/// Exact leading coefficient of the r-th cumulant of `f0(T_n)` in front of
/// `log n`:
///
/// ```text
/// sum_{k=1}^{r} (-1)^{k-1} S(r,k) 2^k (2k-2)! / (3^{2k-1} (k-1)!)
/// ```
///
/// which is also the r-th derivative of `alpha(e^t)` at `t = 0`.
pub fn cumulant_prefactor(r: u32) -> Result<BigRational> {
    if r == 0 || r > 30 {
        return Err(Error::Domain(format!("cumulant_prefactor needs 1 <= r <= 30, got {r}")));
    }
    let mut acc = BigRational::zero();
    for k in 1..=r {
        let s = BigInt::from(stirling2(r, k)?);
        let mut num = s * BigInt::from(2u32).pow(k);
        let mut den = BigInt::from(3u32).pow(2 * k - 1);
        // (2k-2)! / (k-1)!
        for m in 2..=(2 * k - 2) {
            num *= BigInt::from(m);
        }
        for m in 2..=(k - 1) {
            den *= BigInt::from(m);
        }
        let term = BigRational::new(num, den);
        if k % 2 == 1 {
            acc += term;
        } else {
            acc -= term;
        }
    }
    Ok(acc)
}

/// Large-deviation rate function of `f0(T_n) / log n`:
///
/// ```text
/// I(x) = x log(x/2) + x arsinh(2x) - x - sqrt(1 + 4x^2)/2 + 3/2   (x >= 0)
/// ```
///
/// with `I(x) = +inf` for `x < 0` and `I(0) = 1` by continuous extension.
/// Strictly convex, with its unique zero at `x = 2/3`.
pub fn rate_i(x: f64) -> f64 {
    if x < 0.0 {
        return f64::INFINITY;
    }
    if x == 0.0 {
        return 1.0;
    }
    x * (x / 2.0).ln() + x * (2.0 * x).asinh() - x - 0.5 * (1.0 + 4.0 * x * x).sqrt() + 1.5
}

/// Poissonian component `I1(x) = x log(x/2) - x + 2`, the rate function of
/// `X_n / log n` for `X_n` Poisson with parameter `2 log n`.
pub fn rate_i1(x: f64) -> f64 {
    if x < 0.0 {
        return f64::INFINITY;
    }
    if x == 0.0 {
        return 2.0;
    }
    x * (x / 2.0).ln() - x + 2.0
}

/// Symmetrized component `I2(x) = x arsinh(2x) - sqrt(1 + 4x^2)/2 - 1/2`,
/// so that `I = I1 + I2` exactly. The centered rate function of the
/// difference of two independent Poisson(`log n / 4`) variables is
/// `I2(x) + 1` (that one vanishes at `x = 0`; the split of the additive
/// constant here follows the explicit decomposition of `I`).
pub fn rate_i2(x: f64) -> f64 {
    if x < 0.0 {
        return f64::INFINITY;
    }
    x * (2.0 * x).asinh() - 0.5 * (1.0 + 4.0 * x * x).sqrt() - 0.5
}

const LF_TOL: f64 = 1e-12;

/// Legendre-Fenchel transform `f*(x) = sup_t (x t - f(t))` of a smooth
/// strictly convex `f`, computed by solving `f'(t*) = x` with a
/// secant/bisection hybrid on an expanding bracket.
pub fn legendre_fenchel(
    f_prime: impl Fn(f64) -> f64,
    f: impl Fn(f64) -> f64,
    x: f64,
) -> Result<f64> {
    let mut lo = -1.0f64;
    let mut hi = 1.0f64;
    let mut glo = f_prime(lo) - x;
    let mut ghi = f_prime(hi) - x;
    let mut grow = 0;
    while glo > 0.0 || ghi < 0.0 {
        grow += 1;
        if grow > 60 {
            return Err(Error::Domain(format!(
                "legendre_fenchel: x = {x} not bracketed by the derivative range"
            )));
        }
        if glo > 0.0 {
            lo *= 2.0;
            glo = f_prime(lo) - x;
        }
        if ghi < 0.0 {
            hi *= 2.0;
            ghi = f_prime(hi) - x;
        }
        if !glo.is_finite() || !ghi.is_finite() {
            return Err(Error::Domain(format!(
                "legendre_fenchel: derivative not finite while bracketing x = {x}"
            )));
        }
    }
    // secant on the two latest iterates, clipped to the shrinking bracket
    let mut t_prev = lo;
    let mut g_prev = f_prime(t_prev) - x;
    let mut t = 0.0f64.clamp(lo, hi);
    let mut g = f_prime(t) - x;
    for _ in 0..200 {
        if g.abs() <= LF_TOL {
            return Ok(x * t - f(t));
        }
        if g > 0.0 {
            hi = t;
        } else {
            lo = t;
        }
        let mut next = if g != g_prev {
            t - g * (t - t_prev) / (g - g_prev)
        } else {
            0.5 * (lo + hi)
        };
        if !next.is_finite() || next <= lo || next >= hi {
            next = 0.5 * (lo + hi);
        }
        t_prev = t;
        g_prev = g;
        t = next;
        g = f_prime(t) - x;
        if t == t_prev {
            break; // bracket exhausted at float resolution
        }
    }
    if g.abs() <= 1e-9 {
        // flat derivative region: accept the looser root
        return Ok(x * t - f(t));
    }
    Err(Error::NonConvergence(format!("legendre_fenchel stalled at x = {x}, residual {g}")))
}

/// Gaussian predictors for `f0(T_n)`:
/// `mu_n = (2/3) log n`, `sigma_n = sqrt((10/27) log n)`.
pub fn clt_predictors(n: u64) -> (f64, f64) {
    let l = (n as f64).ln();
    (2.0 / 3.0 * l, (10.0 / 27.0 * l).sqrt())
}

/// Centered sawtooth `S(y) = 1/2 - {y}`.
pub fn sawtooth(y: f64) -> f64 {
    0.5 - (y - y.floor())
}

/// First-order Edgeworth CDF correction for an integer-valued variable with
/// the given mean, standard deviation and third cumulant:
///
/// ```text
/// Phi(x) + gamma3/6 (1 - x^2) phi(x) + S(mean + x sd) phi(x) / sd
/// ```
///
/// where `gamma3 = kappa3 / sd^3` and the sawtooth argument is the lattice
/// position `mean + x sd` of the evaluation point, so the correction jumps
/// exactly where the exact CDF does.
pub fn edgeworth_cdf(x: f64, mean: f64, sd: f64, kappa3: f64) -> f64 {
    assert!(sd > 0.0, "edgeworth_cdf needs sd > 0");
    let gamma3 = kappa3 / (sd * sd * sd);
    norm_cdf(x)
        + gamma3 / 6.0 * (1.0 - x * x) * norm_pdf(x)
        + sawtooth(mean + x * sd) / sd * norm_pdf(x)
}

/// Leading-order fixed-`k` asymptotic `p_{k+1}(n) ~ 2^{k+1} (log n)^k / (k! n)`.
pub fn prob_asymptotic(n: u64, k: u32) -> f64 {
    let l = (n as f64).ln();
    let mut fact = 1.0;
    for m in 2..=k {
        fact *= m as f64;
    }
    2f64.powi(k as i32 + 1) * l.powi(k as i32) / (fact * n as f64)
}

/// Natural log of the top-end asymptotic
/// `p_{n-k}(n) ~ n^{3k-1} 2^n / (3^k k! (n!)^2)`.
/// For `k = 0` the product form `2^n / (n! (n+1)!)` is exact and is returned
/// exactly (in log scale) instead of its `1/n`-level approximation.
pub fn top_asymptotic(n: u64, k: u32) -> f64 {
    let nf = n as f64;
    if k == 0 {
        return nf * 2f64.ln() - ln_gamma(nf + 1.0) - ln_gamma(nf + 2.0);
    }
    let mut fact = 1.0;
    for m in 2..=k {
        fact *= m as f64;
    }
    (3 * k as i64 - 1) as f64 * nf.ln() + nf * 2f64.ln()
        - 2.0 * ln_gamma(nf + 1.0)
        - k as f64 * 3f64.ln()
        - fact.ln()
}

/// Saddle-point data for the point probability at `k_n ~ c log n`.
#[derive(Debug, Clone, Copy)]
pub struct SaddleEstimate {
    pub c: f64,
    /// Positive critical point: `alpha* = c - 1/2 + sqrt(4c^2 + 1)/2`,
    /// the root of `1 = c (1/alpha + 1/(alpha+1))`.
    pub alpha_star: f64,
    /// `sigma(alpha*) = (1/alpha*^2 + 1/(alpha*+1)^2)^{-1/2}`.
    pub sigma_star: f64,
}

impl SaddleEstimate {
    pub fn new(c: f64) -> Result<SaddleEstimate> {
        if !(c > 0.0 && c < 0.75) {
            return Err(Error::Domain(format!("saddle estimate is stated for c in (0, 3/4), got {c}")));
        }
        let alpha_star = c - 0.5 + 0.5 * (4.0 * c * c + 1.0).sqrt();
        let sigma_star = (1.0 / (alpha_star * alpha_star)
            + 1.0 / ((alpha_star + 1.0) * (alpha_star + 1.0)))
        .powf(-0.5);
        Ok(SaddleEstimate { c, alpha_star, sigma_star })
    }
}

/// Saddle-point estimate of `p_k(n)` evaluated at an explicit (possibly
/// fractional) `k` with its own critical point `alpha*(c)`:
///
/// ```text
/// sigma(a)/sqrt(2 pi) (1/a + 1/(a+1)) K(a)/Gamma(a) (a(a+1)/2)^{-k} n^{a-1} / sqrt(k)
/// ```
pub fn saddle_probability_at(n: u64, c: f64, k: f64) -> Result<f64> {
    let est = SaddleEstimate::new(c)?;
    if !(k >= 1.0) {
        return Err(Error::Domain(format!("saddle estimate needs k >= 1, got {k}")));
    }
    let a = est.alpha_star;
    let nf = n as f64;
    let binom = a * (a + 1.0) / 2.0;
    Ok(est.sigma_star / (2.0 * PI).sqrt()
        * (1.0 / a + 1.0 / (a + 1.0))
        * k_of_alpha(a)
        * (-ln_gamma(a)).exp()
        * binom.powf(-k)
        * nf.powf(a - 1.0)
        / k.sqrt())
}

/// Saddle-point estimate of `p_{k_n}(n)` for `k_n = floor(c log n)`.
///
/// The display is evaluated at the effective ratio `k_n / log n` rather than
/// at `c` itself: the flooring of `k_n` otherwise dominates the error (the
/// estimate is for the lattice point actually probed, and `k_n / log n` is
/// the ratio that lattice point realizes).
pub fn saddle_probability(n: u64, c: f64) -> Result<f64> {
    SaddleEstimate::new(c)?; // validate the stated c-range first
    let l = (n as f64).ln();
    let k = (c * l).floor();
    if k < 1.0 {
        return Err(Error::Domain(format!("n = {n} too small: floor(c log n) = {k}")));
    }
    saddle_probability_at(n, k / l, k)
}

/// Empirical LDP exponent `-log p_{k_n}(n) / log n` read off a DP snapshot.
pub fn ldp_exponent_estimate(dp: &TailDp, n: usize, c: f64) -> Result<f64> {
    let nf = n as f64;
    let k = (c * nf.ln()).floor() as usize;
    let row = dp
        .rows
        .get(&n)
        .ok_or_else(|| Error::Coverage(format!("no DP snapshot at n = {n}")))?;
    if k >= row.len() {
        return Err(Error::Coverage(format!("DP snapshot misses column k = {k}")));
    }
    if dp.is_underflowed(n, k) || row[k] <= 0.0 {
        return Err(Error::Domain(format!("p_{k}({n}) underflowed; exponent undefined")));
    }
    Ok(-row[k].ln() / nf.ln())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::jet::Jet;

    fn rat(n: i64, d: i64) -> BigRational {
        BigRational::new(BigInt::from(n), BigInt::from(d))
    }

    #[test]
    fn scaling_function_values_at_zero() {
        assert!(mu(0.0).abs() < 1e-12);
        assert!((mu_prime(0.0) - 2.0 / 3.0).abs() < 1e-12);
        assert!((mu_second(0.0) - 10.0 / 27.0).abs() < 1e-12);
        for &t in &[-2.0, -0.5, 0.0, 0.7, 2.5] {
            assert!(mu_prime(t) > 0.0);
            assert!(mu_second(t) > 0.0);
        }
    }

    #[test]
    fn stirling_reference_values() {
        assert_eq!(stirling2(4, 2).unwrap(), 7);
        assert_eq!(stirling2(7, 7).unwrap(), 1);
        assert_eq!(stirling2(9, 1).unwrap(), 1);
        assert_eq!(stirling2(5, 0).unwrap(), 0);
        assert!(stirling2(31, 2).is_err());
        assert!(stirling2(5, 6).is_err());
    }

    #[test]
    fn prefactor_reference_values() {
        let expected = [rat(2, 3), rat(10, 27), rat(14, 81), rat(62, 729), rat(334, 6561), rat(110, 6561)];
        for (r, e) in expected.iter().enumerate() {
            assert_eq!(&cumulant_prefactor(r as u32 + 1).unwrap(), e, "r = {}", r + 1);
        }
        assert_eq!(cumulant_prefactor(9).unwrap(), rat(-52598, 1594323));
    }

    #[test]
    fn prefactor_matches_jet_derivatives() {
        // alpha(e^t) = (sqrt(8 e^t + 1) - 1)/2 differentiated via jets
        let r = 12;
        let inner = Jet::exp_t(r).scale(8.0).add(&Jet::constant(1.0, r));
        let alpha = inner.sqrt().add(&Jet::constant(-1.0, r)).scale(0.5);
        let mut fact = 1.0;
        for order in 1..=r {
            fact *= order as f64;
            let jet_val = alpha.coeffs()[order] * fact;
            let exact = cumulant_prefactor(order as u32).unwrap();
            let exact_f = crate::exactdist::ratio_to_f64(&exact);
            assert!(
                (jet_val - exact_f).abs() <= 1e-10 * exact_f.abs(),
                "r = {order}: {jet_val} vs {exact_f}"
            );
        }
    }

    #[test]
    fn rate_function_reference_points() {
        assert_eq!(rate_i(-0.5), f64::INFINITY);
        assert_eq!(rate_i(0.0), 1.0);
        assert!(rate_i(2.0 / 3.0).abs() <= 1e-12);
        // I decomposes exactly
        for i in 1..=500 {
            let x = i as f64 * 0.01;
            let d = (rate_i(x) - (rate_i1(x) + rate_i2(x))).abs();
            assert!(d <= 1e-12, "x = {x}: {d}");
        }
    }

    #[test]
    fn legendre_fenchel_oracle() {
        // self-dual quadratic
        let v = legendre_fenchel(|t| t, |t| t * t / 2.0, 1.3).unwrap();
        assert!((v - 0.845).abs() < 1e-10);
        // duality with mu at the minimum
        let v = legendre_fenchel(mu_prime, mu, 2.0 / 3.0).unwrap();
        assert!(v.abs() < 1e-10);
        // Poisson component
        let v = legendre_fenchel(|t| 2.0 * t.exp(), |t| 2.0 * (t.exp() - 1.0), 1.0).unwrap();
        assert!((v - rate_i1(1.0)).abs() < 1e-10);
        // rate_i equals the transform of mu
        for &x in &[0.05, 0.1, 0.25, 2.0 / 3.0, 1.0, 2.0, 4.0] {
            let lf = legendre_fenchel(mu_prime, mu, x).unwrap();
            assert!((lf - rate_i(x)).abs() <= 1e-9, "x = {x}");
        }
        assert!(legendre_fenchel(|t| t.exp(), |t| t.exp() - 1.0, -1.0).is_err());
    }

    #[test]
    fn clt_predictor_values() {
        let n = std::f64::consts::E.powi(3).round() as u64; // log n ~ 3 only approximately
        let (m, s) = clt_predictors(n);
        assert!((m - 2.0).abs() < 0.01);
        assert!((s - (10.0f64 / 9.0).sqrt()).abs() < 0.01);
    }

    #[test]
    fn edgeworth_reduces_to_phi_at_symmetric_point() {
        // gamma3 = 0 and a sawtooth argument landing on .5 leave Phi(0) = 1/2
        let v = edgeworth_cdf(0.0, 10.5, 2.0, 0.0);
        assert!((v - 0.5).abs() < 1e-12);
        // the skewness factor vanishes at |x| = 1 regardless of kappa3
        let a = edgeworth_cdf(1.0, 10.5, 2.0, 0.0);
        let b = edgeworth_cdf(1.0, 10.5, 2.0, 5.0);
        assert_eq!(a, b);
    }

    #[test]
    fn fixed_k_asymptotic_values() {
        let n = 1000u64;
        assert!((prob_asymptotic(n, 0) - 2.0 / n as f64).abs() < 1e-15);
        let l = (n as f64).ln();
        assert!((prob_asymptotic(n, 1) - 4.0 * l / n as f64).abs() < 1e-15);
    }

    #[test]
    fn top_asymptotic_exact_at_k0() {
        // log(2^20 / (20! 21!))
        let expect = 20.0 * 2f64.ln() - ln_gamma(21.0) - ln_gamma(22.0);
        assert_eq!(top_asymptotic(20, 0), expect);
        let d20 = crate::exactdist::top_probability(20, 0).unwrap();
        let exact_log = crate::exactdist::ratio_to_f64(&d20).ln();
        assert!((top_asymptotic(20, 0) - exact_log).abs() < 1e-10);
    }

    #[test]
    fn saddle_estimate_reference_point() {
        let est = SaddleEstimate::new(2.0 / 3.0).unwrap();
        assert!((est.alpha_star - 1.0).abs() < 1e-12);
        assert!((est.sigma_star - 2.0 / 5f64.sqrt()).abs() < 1e-12);
        // alpha* solves 1 = c (1/a + 1/(1+a))
        for &c in &[0.1, 0.3, 0.5, 0.7] {
            let e = SaddleEstimate::new(c).unwrap();
            let res = 1.0 - c * (1.0 / e.alpha_star + 1.0 / (1.0 + e.alpha_star));
            assert!(res.abs() < 1e-12, "c = {c}");
        }
        assert!(SaddleEstimate::new(0.75).is_err());
        assert!(SaddleEstimate::new(0.0).is_err());
    }

    #[test]
    fn saddle_collapses_at_typical_c() {
        // with k = c log n unfloored and c = 2/3 the display reduces to
        // sqrt(27/10) / sqrt(2 pi log n)
        let n = 1_000_000u64;
        let l = (n as f64).ln();
        let direct = (27.0f64 / 10.0).sqrt() / (2.0 * PI * l).sqrt();
        let v = saddle_probability_at(n, 2.0 / 3.0, 2.0 / 3.0 * l).unwrap();
        assert!((v - direct).abs() <= 1e-10 * direct);
    }
}
