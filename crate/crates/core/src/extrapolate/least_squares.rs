//! Weighted linear least squares through a column-equilibrated SVD.
//!
//! Normal equations are never formed: Vandermonde-like designs are badly
//! conditioned and squaring the condition number would hide it.

use nalgebra::{DMatrix, DVector, SVD};

use crate::error::{Error, Result};

/// Singular values below `RANK_TOL · σ_max` count as zero.
pub(crate) const RANK_TOL: f64 = 1e-10;

#[derive(Clone, Debug)]
pub(crate) struct Solution {
    pub coefficients: Vec<f64>,
    /// Variance of the first coefficient; 0 in exact (unweighted) mode.
    pub intercept_variance: f64,
    pub residual_norm: f64,
    pub condition: f64,
    pub rank: usize,
}

/// Per-row weights `1/σ`. All-zero stderr means exact data with unit weights;
/// a mix of zero and non-zero stderr is rejected.
fn row_weights(stderr: &[f64]) -> Result<Option<Vec<f64>>> {
    let zero = stderr.iter().filter(|&&s| s == 0.0).count();
    if zero == stderr.len() {
        return Ok(None);
    }
    if zero > 0 {
        return Err(Error::MixedWeights);
    }
    if let Some(bad) = stderr.iter().find(|s| !(s.is_finite() && **s > 0.0)) {
        return Err(Error::Config(format!("invalid standard error {bad}")));
    }
    Ok(Some(stderr.iter().map(|s| 1.0 / s).collect()))
}

pub(crate) fn solve(design: &DMatrix<f64>, values: &[f64], stderr: &[f64]) -> Result<Solution> {
    let (rows, cols) = design.shape();
    debug_assert_eq!(rows, values.len());
    debug_assert_eq!(rows, stderr.len());
    if values.iter().any(|v| !v.is_finite()) || design.iter().any(|v| !v.is_finite()) {
        return Err(Error::Config("non-finite value in least-squares data".into()));
    }
    let weights = row_weights(stderr)?;

    let mut a = design.clone();
    let mut b = DVector::from_column_slice(values);
    if let Some(w) = &weights {
        for (i, wi) in w.iter().enumerate() {
            a.row_mut(i).scale_mut(*wi);
            b[i] *= wi;
        }
    }
    let norms: Vec<f64> = (0..cols).map(|j| a.column(j).norm()).collect();
    for (j, &n) in norms.iter().enumerate() {
        if n == 0.0 {
            return Err(Error::Conditioning {
                rank: cols - 1,
                columns: cols,
                condition: f64::INFINITY,
            });
        }
        a.column_mut(j).unscale_mut(n);
    }

    let svd = SVD::new(a, true, true);
    let sigma = &svd.singular_values;
    let smax = sigma.max();
    let smin = sigma.min();
    let rank = sigma.iter().filter(|&&s| s > RANK_TOL * smax).count();
    let condition = if smin > 0.0 { smax / smin } else { f64::INFINITY };
    if rank < cols {
        return Err(Error::Conditioning {
            rank,
            columns: cols,
            condition,
        });
    }
    let u = svd.u.as_ref().expect("u requested");
    let v_t = svd.v_t.as_ref().expect("v_t requested");

    let utb = u.transpose() * &b;
    let scaled = v_t.transpose() * DVector::from_fn(cols, |k, _| utb[k] / sigma[k]);
    let coefficients: Vec<f64> = scaled.iter().zip(&norms).map(|(c, n)| c / n).collect();

    let fitted = design * DVector::from_column_slice(&coefficients);
    let residual_norm = (fitted - DVector::from_column_slice(values)).norm();

    // Cov = V Σ⁻² Vᵀ in scaled coordinates; only the intercept entry is needed.
    let intercept_variance = if weights.is_some() {
        (0..cols)
            .map(|k| (v_t[(k, 0)] / sigma[k]).powi(2))
            .sum::<f64>()
            / (norms[0] * norms[0])
    } else {
        0.0
    };

    Ok(Solution {
        coefficients,
        intercept_variance,
        residual_norm,
        condition,
        rank,
    })
}
