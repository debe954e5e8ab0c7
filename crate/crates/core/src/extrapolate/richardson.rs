use crate::error::{Error, Result};

use super::{Diagnostics, ExtrapolationResult, Method, NoisyPoint};

/// Node counts above this produce combinatorially large weights.
pub const CONDITIONING_WARN_NODES: usize = 12;

/// Lagrange basis at zero: `γ_j = Π_{m≠j} G_m / (G_m − G_j)`.
///
/// These are the unique weights with `Σγ_j = 1` and `Σγ_j G_j^k = 0` for
/// `k = 1..n`, so any degree-`n` polynomial in `G` is extrapolated exactly.
pub fn richardson_coefficients(factors: &[f64]) -> Result<Vec<f64>> {
    if factors.len() < 2 {
        return Err(Error::InsufficientPoints {
            required: 2,
            found: factors.len(),
        });
    }
    if let Some(bad) = factors.iter().find(|g| !g.is_finite()) {
        return Err(Error::Config(format!("non-finite amplification factor {bad}")));
    }
    for (j, gj) in factors.iter().enumerate() {
        if factors[..j].contains(gj) {
            return Err(Error::DegenerateNodes(*gj));
        }
    }
    if factors.len() > CONDITIONING_WARN_NODES {
        log::warn!(
            "{} Richardson nodes: weights grow combinatorially and amplify noise",
            factors.len()
        );
    }
    Ok(factors
        .iter()
        .enumerate()
        .map(|(j, &gj)| {
            factors
                .iter()
                .enumerate()
                .filter(|&(m, _)| m != j)
                .map(|(_, &gm)| gm / (gm - gj))
                .product()
        })
        .collect())
}

/// `Σ γ_j E(G_j)` with variance `Σ γ_j² σ_j²` for independent points.
pub fn richardson_extrapolate(points: &[NoisyPoint]) -> Result<ExtrapolationResult> {
    let factors: Vec<f64> = points.iter().map(|p| p.factor).collect();
    let gamma = richardson_coefficients(&factors)?;
    let estimate = gamma.iter().zip(points).map(|(g, p)| g * p.value).sum();
    let variance = gamma
        .iter()
        .zip(points)
        .map(|(g, p)| g * g * p.stderr * p.stderr)
        .sum();
    let condition = gamma.iter().map(|g| g.abs()).sum();
    Ok(ExtrapolationResult {
        estimate,
        variance,
        method: Method::Richardson,
        diagnostics: Diagnostics {
            residual_norm: 0.0,
            condition,
            rank: gamma.len(),
        },
        coefficients: gamma,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use nalgebra::{DMatrix, DVector};

    /// Independent route: solve the moment system `Σγ_j G_j^k = δ_{k0}`.
    fn vandermonde_oracle(factors: &[f64]) -> Vec<f64> {
        let n = factors.len();
        let a = DMatrix::from_fn(n, n, |k, j| factors[j].powi(k as i32));
        let mut b = DVector::zeros(n);
        b[0] = 1.0;
        a.lu().solve(&b).unwrap().iter().copied().collect()
    }

    #[test]
    fn two_and_three_node_weights() {
        let g = richardson_coefficients(&[1.0, 2.0]).unwrap();
        assert_eq!(g, vec![2.0, -1.0]);
        let oracle = vandermonde_oracle(&[1.0, 2.0]);
        assert!((g[0] - oracle[0]).abs() < 1e-14 && (g[1] - oracle[1]).abs() < 1e-14);

        let g = richardson_coefficients(&[1.0, 2.0, 3.0]).unwrap();
        let oracle = vandermonde_oracle(&[1.0, 2.0, 3.0]);
        for (x, y) in g.iter().zip([3.0, -3.0, 1.0]) {
            assert!((x - y).abs() < 1e-14);
        }
        for (x, y) in g.iter().zip(oracle) {
            assert!((x - y).abs() < 1e-12);
        }
    }

    #[test]
    fn duplicate_nodes_rejected() {
        assert!(matches!(
            richardson_coefficients(&[1.0, 1.0]),
            Err(Error::DegenerateNodes(_))
        ));
        assert!(richardson_coefficients(&[1.0]).is_err());
    }

    #[test]
    fn linear_data_two_points() {
        let pts: Vec<_> = [1.0, 2.0]
            .iter()
            .map(|&g| NoisyPoint::exact(g, 0.7 + 0.1 * g))
            .collect();
        let r = richardson_extrapolate(&pts).unwrap();
        assert!((r.estimate - 0.7).abs() < 1e-12);
        assert_eq!(r.variance, 0.0);
    }

    #[test]
    fn cubic_data_four_points() {
        let c = [0.31, -0.8, 0.25, -0.04];
        let pts: Vec<_> = [1.0, 2.0, 3.0, 4.0]
            .iter()
            .map(|&g: &f64| NoisyPoint::exact(g, c[0] + c[1] * g + c[2] * g * g + c[3] * g.powi(3)))
            .collect();
        let r = richardson_extrapolate(&pts).unwrap();
        assert!((r.estimate - c[0]).abs() < 1e-9);
    }

    #[test]
    fn variance_propagation() {
        let sigma = 0.013;
        let pts = [
            NoisyPoint {
                factor: 1.0,
                value: 0.5,
                stderr: sigma,
            },
            NoisyPoint {
                factor: 2.0,
                value: 0.4,
                stderr: sigma,
            },
        ];
        let r = richardson_extrapolate(&pts).unwrap();
        assert!((r.variance - 5.0 * sigma * sigma).abs() < 1e-18);
    }
}
