//! Zero-noise estimators.
//!
//! The univariate estimators work on `(G, ⟨O⟩)` pairs: Richardson
//! (Lagrange interpolation evaluated at `G = 0`), least-squares polynomial
//! fits and a three-point exponential model. The multivariate hypersurface
//! fit works on full rate vectors λ̄ over a truncated monomial basis, and
//! [`overhead_count`] counts how many distinct noise settings that needs.

mod exponential;
mod hypersurface;
mod least_squares;
mod overhead;
mod polynomial;
mod richardson;

pub use exponential::exponential_extrapolate;
pub use hypersurface::{
    hypersurface_fit, monomial_basis, monomial_basis_with_cap, HypersurfaceSample, MonomialBasis,
    DEFAULT_BASIS_CAP,
};
pub use overhead::{binomial, overhead_count, OverheadCount};
pub use polynomial::polynomial_extrapolate;
pub use richardson::{richardson_coefficients, richardson_extrapolate, CONDITIONING_WARN_NODES};

use std::fmt;

/// One noisy expectation value measured at amplification `factor`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct NoisyPoint {
    pub factor: f64,
    pub value: f64,
    /// Standard error; 0 for infinite-sampling values.
    pub stderr: f64,
}

impl NoisyPoint {
    pub fn exact(factor: f64, value: f64) -> Self {
        Self {
            factor,
            value,
            stderr: 0.0,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Method {
    Richardson,
    Polynomial { degree: usize },
    Exponential,
    Hypersurface { order: usize },
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Method::Richardson => f.write_str("richardson"),
            Method::Polynomial { degree } => write!(f, "polynomial(degree={degree})"),
            Method::Exponential => f.write_str("exponential"),
            Method::Hypersurface { order } => write!(f, "hypersurface(order={order})"),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Diagnostics {
    /// Unweighted 2-norm of the fit residual; 0 for interpolating rules.
    pub residual_norm: f64,
    /// Ratio of extreme singular values of the (column-scaled) design
    /// matrix, or `Σ|γ_j|` for Richardson weights.
    pub condition: f64,
    pub rank: usize,
}

#[derive(Clone, Debug, PartialEq)]
pub struct ExtrapolationResult {
    pub estimate: f64,
    /// Richardson weights `γ_j`, or fitted model coefficients.
    pub coefficients: Vec<f64>,
    pub variance: f64,
    pub method: Method,
    pub diagnostics: Diagnostics,
}
