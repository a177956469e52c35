//! Exact and asymptotic analysis of the vertex count of a random convex chain.
//!
//! The model: fix the triangle `T` with vertices `(0,0)`, `(1,0)`, `(0,1)`,
//! drop `n` independent uniform points into it, and take the convex hull of
//! the points together with `(1,0)` and `(0,1)`. The number of hull vertices
//! `f0` (the two anchors included) is a random variable whose distribution
//! `p_k = P(f0 = k + 2)` satisfies a three-term recurrence and whose bivariate
//! generating function has a closed form in terms of the Gauss hypergeometric
//! function. This crate computes all of it, several independent ways:
//!
//! - [`exactdist`]: the distribution in exact rational arithmetic, probability
//!   generating polynomials, a brute-force composition-sum oracle, a float
//!   dynamic program that scales to `n = 10^7`, and exact cumulants via
//!   truncated-series (jet) arithmetic.
//! - [`analytic`]: the hypergeometric closed form of the generating function,
//!   its alternative representations, the indicial exponent `alpha(z)`, and
//!   the constants of the singular expansion at `u = 1` that drive coefficient
//!   asymptotics.
//! - [`asymptotics`]: cumulant prefactors, central-limit and Edgeworth
//!   predictors, the large-deviation rate function with a numeric
//!   Legendre-Fenchel oracle, fixed-`k` probability asymptotics, and the
//!   saddle-point estimate for `p_{c log n}`.
//! - [`geometry`]: seeded, thread-count-invariant Monte Carlo simulation of
//!   the chain and empirical-vs-exact comparison statistics.
//! - [`validate`]: the cross-validation suites wired into the `convex-chain`
//!   CLI and the acceptance tests.
//!
//! Everything is a pure function of its inputs; simulation determinism is part
//! of the interface (same `(n, reps, seed)` means bit-identical output, no
//! matter how many worker threads run the trials).

pub mod analytic;
pub mod asymptotics;
mod dd;
pub mod exactdist;
pub mod geometry;
pub mod jet;
pub mod special;
pub mod validate;

use std::fmt;

/// Crate-wide error type.
#[derive(Debug, Clone, PartialEq)]
pub enum Error {
    /// Input outside the mathematical or documented domain of an operation.
    Domain(String),
    /// Input exceeds an enforced resource cap (e.g. brute-force enumeration).
    Cap(String),
    /// An intermediate value left the finite floating-point range.
    Overflow(String),
    /// A series or iteration hit its budget before reaching tolerance.
    NonConvergence(String),
    /// Empirical data not covered by the reference distribution.
    Coverage(String),
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::Domain(m) => write!(f, "domain error: {m}"),
            Error::Cap(m) => write!(f, "cap exceeded: {m}"),
            Error::Overflow(m) => write!(f, "overflow: {m}"),
            Error::NonConvergence(m) => write!(f, "did not converge: {m}"),
            Error::Coverage(m) => write!(f, "coverage error: {m}"),
        }
    }
}

impl std::error::Error for Error {}

pub type Result<T> = std::result::Result<T, Error>;
