//! Truncated Taylor series ("jets") around `t = 0`.
//!
//! A [`Jet`] of order `R` stores the coefficients of `a_0 + a_1 t + ... +
//! a_R t^R`; every operation closes over that order, discarding higher
//! degrees. This is the carrier for exact moment and cumulant extraction:
//! evaluate the probability generating polynomial at the jet of `e^t`, take
//! the log, and read cumulants off the coefficients.

use crate::dd::Dd;

/// Order-`R` truncated Taylor series with `f64` coefficients.
#[derive(Debug, Clone, PartialEq)]
pub struct Jet {
    coeffs: Vec<f64>,
}

impl Jet {
    /// Series with the given coefficients; the order is `coeffs.len() - 1`.
    pub fn new(coeffs: Vec<f64>) -> Jet {
        assert!(!coeffs.is_empty(), "a jet needs at least the constant term");
        Jet { coeffs }
    }

    /// The constant `c` as an order-`order` jet.
    pub fn constant(c: f64, order: usize) -> Jet {
        let mut coeffs = vec![0.0; order + 1];
        coeffs[0] = c;
        Jet { coeffs }
    }

    /// The jet of `e^t` (coefficients `1/j!`).
    pub fn exp_t(order: usize) -> Jet {
        let mut coeffs = vec![1.0; order + 1];
        for j in 1..=order {
            coeffs[j] = coeffs[j - 1] / j as f64;
        }
        Jet { coeffs }
    }

    pub fn order(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeffs(&self) -> &[f64] {
        &self.coeffs
    }

    pub fn add(&self, other: &Jet) -> Jet {
        self.zip(other, |a, b| a + b)
    }

    pub fn sub(&self, other: &Jet) -> Jet {
        self.zip(other, |a, b| a - b)
    }

    fn zip(&self, other: &Jet, f: impl Fn(f64, f64) -> f64) -> Jet {
        assert_eq!(self.order(), other.order(), "jet orders must match");
        Jet::new(self.coeffs.iter().zip(&other.coeffs).map(|(&a, &b)| f(a, b)).collect())
    }

    pub fn scale(&self, s: f64) -> Jet {
        Jet::new(self.coeffs.iter().map(|&a| a * s).collect())
    }

    /// Cauchy product truncated at the common order.
    pub fn mul(&self, other: &Jet) -> Jet {
        assert_eq!(self.order(), other.order(), "jet orders must match");
        let r = self.order();
        let mut out = vec![0.0; r + 1];
        for i in 0..=r {
            let mut acc = 0.0;
            for j in 0..=i {
                acc += self.coeffs[j] * other.coeffs[i - j];
            }
            out[i] = acc;
        }
        Jet::new(out)
    }

    /// `exp` of the series.
    pub fn exp(&self) -> Jet {
        let r = self.order();
        let mut out = vec![0.0; r + 1];
        out[0] = self.coeffs[0].exp();
        // b' = a' b  =>  k b_k = sum_{j=1..k} j a_j b_{k-j}
        for k in 1..=r {
            let mut acc = 0.0;
            for j in 1..=k {
                acc += j as f64 * self.coeffs[j] * out[k - j];
            }
            out[k] = acc / k as f64;
        }
        Jet::new(out)
    }

    /// `log` of the series; the constant term must be positive.
    pub fn log(&self) -> Jet {
        let a0 = self.coeffs[0];
        assert!(a0 > 0.0, "jet log needs a positive constant term, got {a0}");
        let r = self.order();
        let mut out = vec![0.0; r + 1];
        out[0] = a0.ln();
        // a' = b' a  =>  k a_k = sum_{j=1..k} j b_j a_{k-j}
        for k in 1..=r {
            let mut acc = k as f64 * self.coeffs[k];
            for j in 1..k {
                acc -= j as f64 * out[j] * self.coeffs[k - j];
            }
            out[k] = acc / (k as f64 * a0);
        }
        Jet::new(out)
    }

    /// Square root of the series; the constant term must be positive.
    pub fn sqrt(&self) -> Jet {
        let a0 = self.coeffs[0];
        assert!(a0 > 0.0, "jet sqrt needs a positive constant term, got {a0}");
        let r = self.order();
        let mut out = vec![0.0; r + 1];
        out[0] = a0.sqrt();
        for k in 1..=r {
            let mut acc = self.coeffs[k];
            for j in 1..k {
                acc -= out[j] * out[k - j];
            }
            out[k] = acc / (2.0 * out[0]);
        }
        Jet::new(out)
    }
}

/// Double-double twin of [`Jet`], used inside the long generating-function
/// recurrences where f64 drift would swamp the high-order coefficients.
#[derive(Debug, Clone)]
pub(crate) struct DdJet {
    pub coeffs: Vec<Dd>,
}

impl DdJet {
    pub fn constant(c: f64, order: usize) -> DdJet {
        let mut coeffs = vec![Dd::ZERO; order + 1];
        coeffs[0] = Dd::from_f64(c);
        DdJet { coeffs }
    }

    /// `e^t` with coefficients `1/j!` carried in double-double.
    pub fn exp_t(order: usize) -> DdJet {
        let mut coeffs = vec![Dd::ONE; order + 1];
        for j in 1..=order {
            coeffs[j] = coeffs[j - 1].div_f64(j as f64);
        }
        DdJet { coeffs }
    }

    pub fn order(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn log(&self) -> DdJet {
        let a0 = self.coeffs[0];
        let r = self.order();
        let mut out = vec![Dd::ZERO; r + 1];
        out[0] = a0.ln();
        for k in 1..=r {
            let mut acc = self.coeffs[k].mul_f64(k as f64);
            for j in 1..k {
                acc = acc.sub(out[j].mul_f64(j as f64).mul(self.coeffs[k - j]));
            }
            out[k] = acc.div_f64(k as f64).div(a0);
        }
        DdJet { coeffs: out }
    }

    #[cfg(test)]
    pub fn to_f64(&self) -> Vec<f64> {
        self.coeffs.iter().map(|c| c.to_f64()).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exp_t_matches_factorials() {
        let e = Jet::exp_t(5);
        assert_eq!(e.coeffs()[3], 1.0 / 6.0);
        assert_eq!(e.coeffs()[5], 1.0 / 120.0);
    }

    #[test]
    fn exp_log_roundtrip() {
        let a = Jet::new(vec![1.3, -0.4, 0.27, 0.05, -0.8, 0.11]);
        let back = a.exp().log();
        for (x, y) in a.coeffs().iter().zip(back.coeffs()) {
            assert!((x - y).abs() <= 1e-12 * x.abs().max(1.0), "{x} vs {y}");
        }
    }

    #[test]
    fn log_exp_t_is_t() {
        let l = Jet::exp_t(6).log();
        assert!(l.coeffs()[0].abs() < 1e-15);
        assert!((l.coeffs()[1] - 1.0).abs() < 1e-15);
        for k in 2..=6 {
            assert!(l.coeffs()[k].abs() < 1e-15, "k = {k}");
        }
    }

    #[test]
    fn sqrt_squares_back() {
        let a = Jet::new(vec![9.0, 8.0, 2.0, -1.0, 0.5]);
        let s = a.sqrt();
        let sq = s.mul(&s);
        for (x, y) in a.coeffs().iter().zip(sq.coeffs()) {
            assert!((x - y).abs() < 1e-12 * x.abs().max(1.0));
        }
    }

    #[test]
    fn dd_jet_log_matches_f64_path() {
        let a = Jet::new(vec![1.0, 0.9, 0.41, 0.13]);
        let d = DdJet {
            coeffs: a.coeffs().iter().map(|&c| crate::dd::Dd::from_f64(c)).collect(),
        };
        let la = a.log();
        let ld = d.log().to_f64();
        for (x, y) in la.coeffs().iter().zip(&ld) {
            assert!((x - y).abs() < 1e-13);
        }
    }
}
