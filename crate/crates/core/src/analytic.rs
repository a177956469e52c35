//! Closed-form evaluation of the bivariate generating function
//! `F(u, z) = sum_n G_n(z) u^n` and of the constants in its singular
//! expansion at `u = 1`.
//!
//! For `z > -1/8` put `alpha = (sqrt(8z + 1) - 1)/2`, the positive root of
//! the indicial equation `alpha (alpha + 1) = 2z`. Then
//!
//! ```text
//! F(u, z) = 2F1(1 - alpha, -alpha; 2; u) / (1 - u)^alpha ,
//! ```
//!
//! and near `u = 1` the connection formula splits `F` into a singular ladder
//! `K(alpha) (1-u)^{-alpha} (1 + a_1 (1-u) + ...)` plus a subdominant
//! `L(alpha) (1-u)^{1+alpha}` branch, with a `log(1-u)` correction replacing
//! `L` when `alpha` is a half-integer. Transferring those exponents to
//! coefficients gives the large-`n` behavior of `G_n(z)` implemented in
//! [`predicted_gn`].
//!
//! Evaluation is restricted to real `u` in `[0, 1)` and real `z > -1/8`;
//! no analytic continuation is attempted.

use crate::exactdist::eval_g_prefix;
use crate::special::{gamma, inv_gamma, ln_gamma, tan_pi};
use crate::{Error, Result};

use std::f64::consts::PI;

/// Real parameters of the Gauss hypergeometric series.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HypergeomParams {
    pub a: f64,
    pub b: f64,
    pub c: f64,
}

/// A converged hypergeometric evaluation with a crude error estimate
/// (geometric tail bound plus summation roundoff).
#[derive(Debug, Clone, Copy)]
pub struct Hyp2f1 {
    pub value: f64,
    pub error_estimate: f64,
}

const HYP_MAX_TERMS: usize = 40_000;
const HYP_TOL: f64 = 1e-16;

/// Positive branch of the indicial equation: `alpha(z) = (sqrt(8z+1)-1)/2`.
pub fn alpha_of_z(z: f64) -> Result<f64> {
    if !(z > -0.125) {
        return Err(Error::Domain(format!("alpha_of_z needs z > -1/8, got {z}")));
    }
    Ok(((8.0 * z + 1.0).sqrt() - 1.0) / 2.0)
}

/// Inverse of [`alpha_of_z`]: `z = alpha (alpha + 1) / 2`.
pub fn z_of_alpha(alpha: f64) -> f64 {
    alpha * (alpha + 1.0) / 2.0
}

/// Gauss hypergeometric series, summed directly with term recursion.
///
/// Converges on `|u| < 1`; the error estimate degrades as `u` approaches 1.
pub fn hyp2f1(p: HypergeomParams, u: f64) -> Result<Hyp2f1> {
    if p.c <= 0.0 && (p.c - p.c.round()).abs() < 1e-12 {
        return Err(Error::Domain(format!("2F1 parameter c = {} is a nonpositive integer", p.c)));
    }
    if !(u.abs() < 1.0) {
        return Err(Error::Domain(format!("2F1 series needs |u| < 1, got {u}")));
    }
    let mut term = 1.0f64;
    let mut sum = 1.0f64;
    let mut abs_sum = 1.0f64;
    for j in 0..HYP_MAX_TERMS {
        let jf = j as f64;
        term *= (p.a + jf) * (p.b + jf) / ((p.c + jf) * (jf + 1.0)) * u;
        if term == 0.0 {
            // terminating series (a or b a nonpositive integer)
            return Ok(Hyp2f1 { value: sum, error_estimate: f64::EPSILON * abs_sum });
        }
        sum += term;
        abs_sum += term.abs();
        if term.abs() <= HYP_TOL * sum.abs() && jf > p.a.abs() && jf > p.b.abs() {
            let tail = term.abs() * u.abs() / (1.0 - u.abs());
            return Ok(Hyp2f1 {
                value: sum,
                error_estimate: tail + f64::EPSILON * abs_sum,
            });
        }
    }
    Err(Error::NonConvergence(format!(
        "2F1({}, {}; {}; {u}) did not meet tolerance in {HYP_MAX_TERMS} terms",
        p.a, p.b, p.c
    )))
}

/// The bivariate generating function in closed form:
/// `F(u, z) = 2F1(1-alpha, -alpha; 2; u) (1-u)^(-alpha)`.
pub fn f_closed(u: f64, z: f64) -> Result<f64> {
    if !(0.0..1.0).contains(&u) {
        return Err(Error::Domain(format!("f_closed needs u in [0, 1), got {u}")));
    }
    let alpha = alpha_of_z(z)?;
    let h = hyp2f1(HypergeomParams { a: 1.0 - alpha, b: -alpha, c: 2.0 }, u)?;
    Ok(h.value * (1.0 - u).powf(-alpha))
}

/// Mutual agreement of three representations of `F(u, z)`:
/// the defining form, the Euler transform
/// `(1-u)^(1+alpha) 2F1(2+alpha, 1+alpha; 2; u)`, and (for `u < 1/2`)
/// the Pfaff transform `2F1(-alpha, 1+alpha; 2; u/(u-1))`.
/// Returns the maximum pairwise deviation relative to the largest value.
pub fn representation_check(u: f64, z: f64) -> Result<f64> {
    if !(0.0..=0.9).contains(&u) {
        return Err(Error::Domain(format!("representation grid is u in [0, 0.9], got {u}")));
    }
    let alpha = alpha_of_z(z)?;
    let mut vals = vec![
        f_closed(u, z)?,
        (1.0 - u).powf(1.0 + alpha)
            * hyp2f1(HypergeomParams { a: 2.0 + alpha, b: 1.0 + alpha, c: 2.0 }, u)?.value,
    ];
    if u < 0.5 {
        vals.push(
            hyp2f1(HypergeomParams { a: -alpha, b: 1.0 + alpha, c: 2.0 }, u / (u - 1.0))?.value,
        );
    }
    let scale = vals.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    let mut worst = 0.0f64;
    for i in 0..vals.len() {
        for j in (i + 1)..vals.len() {
            worst = worst.max((vals[i] - vals[j]).abs());
        }
    }
    Ok(worst / scale)
}

/// Coefficients `G_0(z) ..= G_n(z)` of `F(., z)` by multiplying the
/// hypergeometric series with the binomial series of `(1-u)^(-alpha)`.
/// Independent of the three-term recurrence behind [`eval_g_prefix`].
pub fn f_series_coeffs(z: f64, n_max: usize) -> Result<Vec<f64>> {
    if n_max > 10_000 {
        return Err(Error::Cap(format!("f_series_coeffs is quadratic; n_max = {n_max} > 10000")));
    }
    let alpha = alpha_of_z(z)?;
    // 2F1(1-alpha, -alpha; 2; u) coefficients
    let mut h = Vec::with_capacity(n_max + 1);
    h.push(1.0f64);
    for j in 0..n_max {
        let jf = j as f64;
        let prev = *h.last().unwrap();
        h.push(prev * (1.0 - alpha + jf) * (-alpha + jf) / ((2.0 + jf) * (jf + 1.0)));
    }
    // (1-u)^(-alpha) coefficients
    let mut b = Vec::with_capacity(n_max + 1);
    b.push(1.0f64);
    for j in 0..n_max {
        let prev = *b.last().unwrap();
        b.push(prev * (alpha + j as f64) / (j as f64 + 1.0));
    }
    let mut out = Vec::with_capacity(n_max + 1);
    for n in 0..=n_max {
        let mut acc = 0.0;
        for i in 0..=n {
            acc += h[i] * b[n - i];
        }
        out.push(acc);
    }
    Ok(out)
}

/// Constants of the singular expansion of `F(u, z)` at `u = 1`.
#[derive(Debug, Clone, Copy)]
pub struct SingularData {
    pub z: f64,
    pub alpha: f64,
    /// Band index `k` with `alpha` in `(k - 1/2, k + 1/2]`.
    pub band: i32,
    /// `K(alpha) = Gamma(1+2a) / (Gamma(1+a) Gamma(2+a))`.
    pub k_const: f64,
    /// `L(alpha) = -Gamma(a)^2 tan(pi a) / (4 (1+2a) pi Gamma(2a))`;
    /// infinite exactly on the half-integer lattice.
    pub l_const: f64,
    /// Log-term constant, populated when `alpha` is within 1e-9 of `1/2 + k`.
    pub c_k: Option<f64>,
}

/// Half-integer routing window on `alpha`.
pub const HALF_INTEGER_WINDOW: f64 = 1e-9;

/// `K(alpha)` for `alpha > -1/2`.
pub fn k_of_alpha(alpha: f64) -> f64 {
    (ln_gamma(1.0 + 2.0 * alpha) - ln_gamma(1.0 + alpha) - ln_gamma(2.0 + alpha)).exp()
}

/// `L(alpha)` in the tangent form, finite away from half-integers.
/// `L(0) = -1/2` by continuity.
pub fn l_of_alpha(alpha: f64) -> f64 {
    if alpha == 0.0 {
        return -0.5;
    }
    -gamma(alpha) * gamma(alpha) * tan_pi(alpha)
        / (4.0 * (1.0 + 2.0 * alpha) * PI * gamma(2.0 * alpha))
}

/// `L(alpha)` via the defining gamma ratio; cross-check for [`l_of_alpha`].
pub fn l_gamma_form(alpha: f64) -> f64 {
    gamma(-1.0 - 2.0 * alpha) / (gamma(-alpha) * gamma(1.0 - alpha))
}

/// Log-term constant at the half-integer `alpha0 = 1/2 + k`.
pub fn c_k_constant(k: u32) -> f64 {
    let a0 = k as f64 + 0.5;
    gamma(a0) * gamma(a0) / (4.0 * PI * PI * a0 * (1.0 + 2.0 * a0) * gamma(2.0 * a0))
}

/// Assemble the singular data for a given `z > -1/8`.
pub fn singular_constants(z: f64) -> Result<SingularData> {
    let alpha = alpha_of_z(z)?;
    let band = (alpha - 0.5).ceil() as i32;
    let half_k = (alpha - 0.5).round();
    let is_half = half_k >= 0.0 && (alpha - 0.5 - half_k).abs() <= HALF_INTEGER_WINDOW;
    let (l_const, c_k) = if is_half {
        (f64::INFINITY, Some(c_k_constant(half_k as u32)))
    } else {
        (l_of_alpha(alpha), None)
    };
    Ok(SingularData { z, alpha, band, k_const: k_of_alpha(alpha), l_const, c_k })
}

impl SingularData {
    /// Taylor coefficients `a_j(alpha)` of `2F1(1-a, -a; -2a; w)` at `w = 0`:
    /// `a_0 = 1`, `a_1 = (1-a)/2`, then the rising-factorial ratio.
    /// Once a coefficient vanishes (integer `alpha`), all later ones do too.
    pub fn a_coeffs(&self, depth: usize) -> Vec<f64> {
        let a = self.alpha;
        let mut out = Vec::with_capacity(depth + 1);
        out.push(1.0);
        if depth == 0 {
            return out;
        }
        out.push((1.0 - a) / 2.0); // the -a/-2a cancellation done by hand
        let mut cur = out[1];
        for j in 1..depth {
            let jf = j as f64;
            let den = (-2.0 * a + jf) * (jf + 1.0);
            if cur == 0.0 || den == 0.0 {
                // integer alpha: the numerator zero at j = alpha persists and
                // reaches any vanishing denominator only after cur is 0
                out.resize(depth + 1, 0.0);
                return out;
            }
            cur *= (1.0 - a + jf) * (-a + jf) / den;
            out.push(cur);
        }
        out
    }
}

/// Coefficient asymptotics transferred from the singular expansion:
///
/// - generic `alpha` in band `k`:
///   `K n^{a-1}/Gamma(a) + sum_j K a_j n^{a-j-1}/Gamma(a-j) + L n^{-a-2}/Gamma(-a-1)`
///   with `j` up to `min(depth, k+1)`;
/// - half-integer `alpha0`:
///   `K n^{a0-1}/Gamma(a0) + 2 C_k n^{a0-2} log n / Gamma(-1-a0)`.
///
/// Reciprocal gammas at nonpositive integers evaluate to zero, so ladder
/// terms sitting on the pole lattice drop out cleanly.
pub fn predicted_gn(z: f64, n: u64, depth: usize) -> Result<f64> {
    let sd = singular_constants(z)?;
    let nf = n as f64;
    if let Some(ck) = sd.c_k {
        let a0 = sd.alpha;
        return Ok(sd.k_const * inv_gamma(a0) * nf.powf(a0 - 1.0)
            + 2.0 * ck * inv_gamma(-1.0 - a0) * nf.powf(a0 - 2.0) * nf.ln());
    }
    let a = sd.alpha;
    let d = depth.min((sd.band + 1).max(1) as usize);
    let aj = sd.a_coeffs(d);
    let mut val = sd.k_const * inv_gamma(a) * nf.powf(a - 1.0);
    for (j, &coeff) in aj.iter().enumerate().skip(1) {
        let ig = inv_gamma(a - j as f64);
        if ig != 0.0 {
            val += sd.k_const * coeff * ig * nf.powf(a - j as f64 - 1.0);
        }
    }
    val += sd.l_const * inv_gamma(-a - 1.0) * nf.powf(-a - 2.0);
    Ok(val)
}

/// Maximum residual coefficient of the hypergeometric ODE
/// `u (1-u)^2 F_uu + 2 (1-u)^2 F_u - 2 z F = 0` through degree `n_max`.
///
/// The degree-`m` coefficient of the left side is
/// `(m+1)(m+2) G_{m+1} - 2 m (m+1) G_m - 2 z G_m + m (m-1) G_{m-1}`,
/// evaluated on the recurrence-generated sequence; its size measures how
/// exactly the computed coefficients satisfy the ODE.
pub fn ode_residual(z: f64, n_max: usize) -> Result<f64> {
    if n_max > 1000 {
        return Err(Error::Cap(format!("ode_residual supports n_max <= 1000, got {n_max}")));
    }
    let g = eval_g_prefix(n_max + 1, z)?;
    let mut worst = 0.0f64;
    for m in 0..=n_max {
        let mf = m as f64;
        let g_prev = if m >= 1 { g[m - 1] } else { 0.0 };
        let r = (mf + 1.0) * (mf + 2.0) * g[m + 1] - 2.0 * mf * (mf + 1.0) * g[m] - 2.0 * z * g[m]
            + mf * (mf - 1.0) * g_prev;
        worst = worst.max(r.abs());
    }
    Ok(worst)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactdist::eval_g;

    #[test]
    fn alpha_reference_points() {
        assert_eq!(alpha_of_z(0.0).unwrap(), 0.0);
        assert_eq!(alpha_of_z(1.0).unwrap(), 1.0);
        assert_eq!(alpha_of_z(0.375).unwrap(), 0.5);
        assert!(alpha_of_z(-0.125).is_err());
        assert!(alpha_of_z(-0.2).is_err());
    }

    #[test]
    fn alpha_involution() {
        for i in 0..=50 {
            let a = i as f64 * 0.1;
            let back = alpha_of_z(z_of_alpha(a)).unwrap();
            assert!((back - a).abs() <= 1e-12, "alpha = {a}");
        }
    }

    #[test]
    fn hyp2f1_reference_values() {
        let one = hyp2f1(HypergeomParams { a: 0.3, b: -1.2, c: 2.0 }, 0.0).unwrap();
        assert_eq!(one.value, 1.0);
        // 2F1(1,1;2;u) = -log(1-u)/u
        let v = hyp2f1(HypergeomParams { a: 1.0, b: 1.0, c: 2.0 }, 0.5).unwrap();
        assert!((v.value - 2.0 * (2.0f64).ln()).abs() < 1e-14);
        // a = 0 terminates immediately
        let t = hyp2f1(HypergeomParams { a: 0.0, b: -1.0, c: 2.0 }, 0.3).unwrap();
        assert_eq!(t.value, 1.0);
        assert!(hyp2f1(HypergeomParams { a: 1.0, b: 1.0, c: -2.0 }, 0.3).is_err());
        assert!(hyp2f1(HypergeomParams { a: 1.0, b: 1.0, c: 2.0 }, 1.0).is_err());
    }

    #[test]
    fn f_closed_geometric_case() {
        // F(u, 1) = 1/(1-u)
        for &u in &[0.1, 0.5, 0.8] {
            let v = f_closed(u, 1.0).unwrap();
            assert!((v * (1.0 - u) - 1.0).abs() < 1e-12, "u = {u}");
        }
        assert_eq!(f_closed(0.0, 0.7).unwrap(), 1.0);
    }

    #[test]
    fn f_closed_matches_partial_sums() {
        let g = eval_g_prefix(60, 0.5).unwrap();
        let mut sum = 0.0;
        let mut up = 1.0;
        for gn in &g {
            sum += gn * up;
            up *= 0.4;
        }
        let v = f_closed(0.4, 0.5).unwrap();
        assert!((v - sum).abs() <= 1e-10 * sum.abs());
    }

    #[test]
    fn representations_agree() {
        assert!(representation_check(0.3, 1.0).unwrap() <= 1e-10);
        assert!(representation_check(0.0, 0.7).unwrap() <= 1e-15);
        assert!(representation_check(0.45, 0.2).unwrap() <= 1e-9);
        assert!(representation_check(0.9, 2.0).unwrap() <= 1e-9);
    }

    #[test]
    fn series_coeffs_special_cases() {
        let ones = f_series_coeffs(1.0, 40).unwrap();
        for (n, c) in ones.iter().enumerate() {
            assert!((c - 1.0).abs() < 1e-12, "n = {n}");
        }
        let delta = f_series_coeffs(0.0, 10).unwrap();
        assert_eq!(delta[0], 1.0);
        for c in &delta[1..] {
            assert_eq!(*c, 0.0);
        }
    }

    #[test]
    fn series_coeffs_match_recurrence() {
        for &z in &[-0.1, 0.25, 0.5, 2.0] {
            let series = f_series_coeffs(z, 60).unwrap();
            let rec = eval_g_prefix(60, z).unwrap();
            for n in 0..=60 {
                let denom = rec[n].abs().max(1e-300);
                assert!(
                    (series[n] - rec[n]).abs() <= 1e-10 * denom,
                    "z = {z}, n = {n}: {} vs {}",
                    series[n],
                    rec[n]
                );
            }
        }
    }

    #[test]
    fn singular_constants_reference_values() {
        let sd = singular_constants(1.0).unwrap();
        assert!((sd.k_const - 1.0).abs() < 1e-13); // K(1) = Gamma(3)/(Gamma(2)Gamma(3))
        assert_eq!(sd.band, 1);
        assert!(sd.c_k.is_none());

        let half = singular_constants(0.375).unwrap();
        assert_eq!(half.alpha, 0.5);
        assert!(half.l_const.is_infinite());
        let c0 = half.c_k.unwrap();
        assert!((c0 - 1.0 / (4.0 * PI)).abs() < 1e-13);

        // a_1(alpha) = (1 - alpha)/2 vanishes at alpha = 1
        let aj = sd.a_coeffs(3);
        assert_eq!(aj[1], 0.0);
        assert_eq!(aj[2], 0.0);
    }

    #[test]
    fn c_k_window_and_monotonicity() {
        let mut prev = f64::INFINITY;
        for k in 0..=10 {
            let c = c_k_constant(k);
            assert!(c > 0.0 && c < 0.1, "k = {k}: {c}");
            assert!(c < prev, "k = {k}");
            prev = c;
        }
    }

    #[test]
    fn l_forms_agree() {
        for &a in &[0.05, 0.3, 0.62, 1.1, 1.9, 2.3, 3.7] {
            let lt = l_of_alpha(a);
            let lg = l_gamma_form(a);
            assert!((lt - lg).abs() <= 1e-10 * lg.abs(), "alpha = {a}: {lt} vs {lg}");
        }
        assert!((l_of_alpha(1e-9) - -0.5).abs() < 1e-6);
    }

    #[test]
    fn predicted_gn_normalization_and_accuracy() {
        // z = 1: G_n(1) = 1 and the prediction collapses to K(1) = 1
        let p = predicted_gn(1.0, 1_000_000, 2).unwrap();
        assert!((p - 1.0).abs() < 1e-12);
        // z = 1/2: relative error at n = 1e4 well under 5/n
        let n = 10_000u64;
        let g = eval_g(n, 0.5).unwrap();
        let pred = predicted_gn(0.5, n, 1).unwrap();
        assert!(((pred - g) / g).abs() <= 5.0 / n as f64);
        // half-integer branch at z = 3/8
        let g = eval_g(n, 0.375).unwrap();
        let pred = predicted_gn(0.375, n, 1).unwrap();
        let rel = ((pred - g) / g).abs();
        assert!(rel <= 3.0 * (n as f64).ln() / n as f64, "rel = {rel}");
    }

    #[test]
    fn ode_residual_small() {
        assert!(ode_residual(1.0, 200).unwrap() <= 1e-12);
        assert!(ode_residual(0.5, 200).unwrap() <= 1e-10);
        assert!(ode_residual(-0.1, 100).unwrap() <= 1e-10);
        assert!(ode_residual(0.5, 2000).is_err());
    }
}
