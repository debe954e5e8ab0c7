//! Zero-noise extrapolation for multiqubit systems whose qubits suffer
//! independent noise at different rates.
//!
//! Noise is amplified globally: every rate `λ_i` is multiplied by the same
//! factor `G`, either directly ([`amplify::scale_rates`]) or by stretching the
//! drive ([`amplify::stretch_pulse`]). The noisy observable is then a
//! univariate function of `G`, so standard estimators such as Richardson
//! extrapolation need only `n + 1` settings for order `n`. The multivariate
//! hypersurface fit over all rates is available for comparison together with
//! its measurement overhead ([`extrapolate::overhead_count`]).
//!
//! ```
//! use zne::extrapolate::{richardson_extrapolate, NoisyPoint};
//!
//! let points: Vec<_> = [1.0, 2.0, 3.0]
//!     .iter()
//!     .map(|&g| NoisyPoint::exact(g, 0.9 - 0.05 * g + 0.002 * g * g))
//!     .collect();
//! let result = richardson_extrapolate(&points).unwrap();
//! assert!((result.estimate - 0.9).abs() < 1e-12);
//! ```

// `!(x > 0.0)` is used on purpose so that NaN fails validation
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod amplify;
pub mod cli;
pub mod error;
pub mod export;
pub mod extrapolate;
pub mod lindblad;
pub mod pipeline;
pub mod quantum;
pub mod sampling;
pub mod scenario;

pub use error::{Error, Result};
