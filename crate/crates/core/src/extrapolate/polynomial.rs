use nalgebra::DMatrix;

use crate::error::{Error, Result};

use super::least_squares;
use super::{Diagnostics, ExtrapolationResult, Method, NoisyPoint};

/// Least-squares polynomial of degree `degree` in `G`; the estimate is the
/// intercept. Points carrying stderr are weighted by `1/σ²`.
pub fn polynomial_extrapolate(points: &[NoisyPoint], degree: usize) -> Result<ExtrapolationResult> {
    if points.len() < degree + 1 {
        return Err(Error::InsufficientPoints {
            required: degree + 1,
            found: points.len(),
        });
    }
    let design = DMatrix::from_fn(points.len(), degree + 1, |i, j| {
        points[i].factor.powi(j as i32)
    });
    let values: Vec<f64> = points.iter().map(|p| p.value).collect();
    let stderr: Vec<f64> = points.iter().map(|p| p.stderr).collect();
    let sol = least_squares::solve(&design, &values, &stderr)?;
    Ok(ExtrapolationResult {
        estimate: sol.coefficients[0],
        variance: sol.intercept_variance,
        method: Method::Polynomial { degree },
        diagnostics: Diagnostics {
            residual_norm: sol.residual_norm,
            condition: sol.condition,
            rank: sol.rank,
        },
        coefficients: sol.coefficients,
    })
}
