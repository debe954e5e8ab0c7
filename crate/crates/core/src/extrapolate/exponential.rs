use crate::error::{Error, Result};

use super::{Diagnostics, ExtrapolationResult, Method, NoisyPoint};

const SPACING_TOL: f64 = 1e-9;

/// Three-point exponential model `E(G) = a + b·r^{G/Δ}` at equally spaced
/// factors `G₁, G₁+Δ, G₁+2Δ`, solved in closed form with
/// `r = (E₃−E₂)/(E₂−E₁)` and evaluated at `G = 0`.
///
/// Coefficients are reported as `[a, b, r]`. Requires `0 < r < 1`.
pub fn exponential_extrapolate(points: &[NoisyPoint]) -> Result<ExtrapolationResult> {
    if points.len() != 3 {
        return Err(Error::InsufficientPoints {
            required: 3,
            found: points.len(),
        });
    }
    let mut pts = points.to_vec();
    pts.sort_by(|a, b| a.factor.total_cmp(&b.factor));
    let spacing = pts[1].factor - pts[0].factor;
    if !(spacing > 0.0) || ((pts[2].factor - pts[1].factor) - spacing).abs() > SPACING_TOL {
        return Err(Error::UnequalSpacing);
    }
    let [e1, e2, e3] = [pts[0].value, pts[1].value, pts[2].value];
    let d1 = e2 - e1;
    let d2 = e3 - e2;
    if d1 == 0.0 {
        return Err(Error::DegenerateRatio);
    }
    let r = d2 / d1;
    if !(r > 0.0 && r < 1.0) {
        return Err(Error::NonDecaying(r));
    }
    let k = pts[0].factor / spacing;
    // b·r^k, the decaying part at G₁
    let tail = d1 / (r - 1.0);
    let a = e1 - tail;
    let b = tail * r.powf(-k);
    let estimate = a + b;

    let grad = gradient(d1, d2, k);
    let variance = grad
        .iter()
        .zip(&pts)
        .map(|(g, p)| g * g * p.stderr * p.stderr)
        .sum();
    Ok(ExtrapolationResult {
        estimate,
        coefficients: vec![a, b, r],
        variance,
        method: Method::Exponential,
        diagnostics: Diagnostics {
            residual_norm: 0.0,
            condition: grad.iter().map(|g| g.abs()).sum(),
            rank: 3,
        },
    })
}

/// ∂estimate/∂(E₁, E₂, E₃) for delta-method variance propagation.
fn gradient(d1: f64, d2: f64, k: f64) -> [f64; 3] {
    let r = d2 / d1;
    let denom = d2 - d1;
    let tail = d1 * d1 / denom;
    let rk = r.powf(-k);
    let dtail_dd1 = d1 * (2.0 * d2 - d1) / (denom * denom);
    let dtail_dd2 = -d1 * d1 / (denom * denom);
    let drk_dr = -k * r.powf(-k - 1.0);
    let dr_dd1 = -d2 / (d1 * d1);
    let dr_dd2 = 1.0 / d1;
    let df_dd1 = dtail_dd1 * (rk - 1.0) + tail * drk_dr * dr_dd1;
    let df_dd2 = dtail_dd2 * (rk - 1.0) + tail * drk_dr * dr_dd2;
    [1.0 - df_dd1, df_dd1 - df_dd2, df_dd2]
}
