//! Multivariate hypersurface fit over the full rate vector λ̄.
//!
//! The noisy expectation is modelled as a truncated multinomial in
//! `λ_1..λ_N`; its constant term is the zero-noise estimate. A degree-`d`
//! monomial is stored as the sorted multiset of its variable indices, so
//! `λ_0²λ_2` is `[0, 0, 2]`. Listing the multisets in ascending lexicographic
//! order within each degree gives graded lexicographic order on exponent
//! vectors, intercept first.

use nalgebra::DMatrix;
use num_traits::ToPrimitive;

use crate::error::{Error, Result};

use super::least_squares;
use super::overhead::overhead_count;
use super::{Diagnostics, ExtrapolationResult, Method};

/// Largest basis enumerated without an explicit override.
pub const DEFAULT_BASIS_CAP: u64 = 10_000_000;

#[derive(Clone, Debug, PartialEq)]
pub struct HypersurfaceSample {
    pub rates: Vec<f64>,
    pub value: f64,
    pub stderr: f64,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MonomialBasis {
    num_vars: usize,
    order: usize,
    offsets: Vec<usize>,
    vars: Vec<u32>,
}

impl MonomialBasis {
    pub fn num_vars(&self) -> usize {
        self.num_vars
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn len(&self) -> usize {
        self.offsets.len() - 1
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Variable indices of monomial `k`, with repetition.
    pub fn variables(&self, k: usize) -> &[u32] {
        &self.vars[self.offsets[k]..self.offsets[k + 1]]
    }

    pub fn degree(&self, k: usize) -> usize {
        self.offsets[k + 1] - self.offsets[k]
    }

    /// Dense exponent vector of monomial `k`.
    pub fn exponents(&self, k: usize) -> Vec<u32> {
        let mut e = vec![0u32; self.num_vars];
        for &v in self.variables(k) {
            e[v as usize] += 1;
        }
        e
    }

    pub fn evaluate(&self, k: usize, rates: &[f64]) -> f64 {
        self.variables(k).iter().map(|&v| rates[v as usize]).product()
    }

    pub fn iter_exponents(&self) -> impl Iterator<Item = Vec<u32>> + '_ {
        (0..self.len()).map(|k| self.exponents(k))
    }
}

pub fn monomial_basis(num_vars: usize, order: usize) -> Result<MonomialBasis> {
    monomial_basis_with_cap(num_vars, order, DEFAULT_BASIS_CAP)
}

/// Enumerates the basis unless its size exceeds `cap`; pass `u64::MAX` to force.
pub fn monomial_basis_with_cap(num_vars: usize, order: usize, cap: u64) -> Result<MonomialBasis> {
    if num_vars == 0 {
        return Err(Error::Config("monomial basis needs at least one variable".into()));
    }
    let count = overhead_count(num_vars, order);
    let size = match count.cumulative.to_u64() {
        Some(s) if s <= cap => s as usize,
        _ => {
            return Err(Error::BudgetExceeded {
                required: count.cumulative.to_string(),
                cap,
            })
        }
    };
    let total_vars: usize = count
        .per_order
        .iter()
        .enumerate()
        .map(|(d, c)| d * c.to_usize().unwrap_or(0))
        .sum();
    let mut offsets = Vec::with_capacity(size + 1);
    let mut vars = Vec::with_capacity(total_vars);
    offsets.push(0);
    let top = (num_vars - 1) as u32;
    for degree in 0..=order {
        let mut current = vec![0u32; degree];
        loop {
            vars.extend_from_slice(&current);
            offsets.push(vars.len());
            // next non-decreasing sequence in lexicographic order
            match current.iter().rposition(|&v| v < top) {
                Some(i) => {
                    let next = current[i] + 1;
                    current[i..].iter_mut().for_each(|v| *v = next);
                }
                None => break,
            }
        }
    }
    debug_assert_eq!(offsets.len(), size + 1);
    Ok(MonomialBasis {
        num_vars,
        order,
        offsets,
        vars,
    })
}

/// Least-squares multinomial fit; the estimate is the constant coefficient.
pub fn hypersurface_fit(samples: &[HypersurfaceSample], order: usize) -> Result<ExtrapolationResult> {
    let Some(first) = samples.first() else {
        return Err(Error::InsufficientSamples {
            required: 1,
            found: 0,
        });
    };
    let num_vars = first.rates.len();
    for s in samples {
        if s.rates.len() != num_vars {
            return Err(Error::DimensionMismatch {
                expected: num_vars,
                found: s.rates.len(),
            });
        }
        if s.rates.iter().any(|r| !(r.is_finite() && *r >= 0.0)) {
            return Err(Error::InvalidNoise(format!(
                "sample rates {:?} must be finite and non-negative",
                s.rates
            )));
        }
    }
    let required = overhead_count(num_vars.max(1), order).cumulative;
    if required > samples.len().into() {
        return Err(Error::InsufficientSamples {
            required: required.to_u64().unwrap_or(u64::MAX),
            found: samples.len(),
        });
    }
    let basis = monomial_basis(num_vars, order)?;
    let design = DMatrix::from_fn(samples.len(), basis.len(), |i, k| {
        basis.evaluate(k, &samples[i].rates)
    });
    let values: Vec<f64> = samples.iter().map(|s| s.value).collect();
    let stderr: Vec<f64> = samples.iter().map(|s| s.stderr).collect();
    let sol = least_squares::solve(&design, &values, &stderr)?;
    Ok(ExtrapolationResult {
        estimate: sol.coefficients[0],
        variance: sol.intercept_variance,
        method: Method::Hypersurface { order },
        diagnostics: Diagnostics {
            residual_norm: sol.residual_norm,
            condition: sol.condition,
            rank: sol.rank,
        },
        coefficients: sol.coefficients,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn univariate_basis() {
        let b = monomial_basis(1, 3).unwrap();
        let e: Vec<_> = b.iter_exponents().collect();
        assert_eq!(e, vec![vec![0], vec![1], vec![2], vec![3]]);
    }

    #[test]
    fn bivariate_graded_lex() {
        let b = monomial_basis(2, 2).unwrap();
        let e: Vec<_> = b.iter_exponents().collect();
        assert_eq!(
            e,
            vec![
                vec![0, 0],
                vec![1, 0],
                vec![0, 1],
                vec![2, 0],
                vec![1, 1],
                vec![0, 2]
            ]
        );
    }

    #[test]
    fn trivariate_degree_two_order() {
        let b = monomial_basis(3, 2).unwrap();
        let deg2: Vec<_> = (4..b.len()).map(|k| b.exponents(k)).collect();
        assert_eq!(
            deg2,
            vec![
                vec![2, 0, 0],
                vec![1, 1, 0],
                vec![1, 0, 1],
                vec![0, 2, 0],
                vec![0, 1, 1],
                vec![0, 0, 2]
            ]
        );
    }

    #[test]
    fn enumeration_matches_brute_force() {
        // every exponent vector in [0, n]^N with sum ≤ n, no duplicates
        for num_vars in 1..=4usize {
            for order in 0..=4usize {
                let b = monomial_basis(num_vars, order).unwrap();
                let mut brute = 0usize;
                let mut idx = vec![0u32; num_vars];
                loop {
                    if idx.iter().sum::<u32>() as usize <= order {
                        brute += 1;
                    }
                    let mut i = 0;
                    while i < num_vars {
                        idx[i] += 1;
                        if idx[i] as usize <= order {
                            break;
                        }
                        idx[i] = 0;
                        i += 1;
                    }
                    if i == num_vars {
                        break;
                    }
                }
                assert_eq!(b.len(), brute);
                let mut all: Vec<_> = b.iter_exponents().collect();
                all.sort();
                all.dedup();
                assert_eq!(all.len(), brute);
            }
        }
    }

    #[test]
    fn budget_cap() {
        assert!(matches!(
            monomial_basis_with_cap(200, 3, 1_000_000),
            Err(Error::BudgetExceeded { .. })
        ));
        let err = monomial_basis(200, 6).unwrap_err();
        assert_eq!(err.exit_code(), 4);
    }

    fn planted(rng: &mut ChaCha8Rng, num_vars: usize, order: usize) -> (MonomialBasis, Vec<f64>) {
        let basis = monomial_basis(num_vars, order).unwrap();
        let coeffs = (0..basis.len()).map(|_| rng.random_range(-1.0..1.0)).collect();
        (basis, coeffs)
    }

    fn eval(basis: &MonomialBasis, coeffs: &[f64], rates: &[f64]) -> f64 {
        (0..basis.len()).map(|k| coeffs[k] * basis.evaluate(k, rates)).sum()
    }

    #[test]
    fn exact_recovery_three_vars() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let (basis, coeffs) = planted(&mut rng, 3, 2);
        assert_eq!(basis.len(), 10);
        let samples: Vec<_> = (0..15)
            .map(|_| {
                let rates: Vec<f64> = (0..3).map(|_| rng.random_range(0.0..0.1)).collect();
                HypersurfaceSample {
                    value: eval(&basis, &coeffs, &rates),
                    rates,
                    stderr: 0.0,
                }
            })
            .collect();
        let fit = hypersurface_fit(&samples, 2).unwrap();
        assert!((fit.estimate - coeffs[0]).abs() < 1e-8);
    }

    #[test]
    fn too_few_samples() {
        let samples = vec![
            HypersurfaceSample {
                rates: vec![0.1, 0.2],
                value: 0.3,
                stderr: 0.0
            };
            2
        ];
        assert!(matches!(
            hypersurface_fit(&samples, 1),
            Err(Error::InsufficientSamples {
                required: 3,
                found: 2
            })
        ));
    }

    #[test]
    fn single_ray_is_rank_deficient() {
        let base = [0.01, 0.03];
        let samples: Vec<_> = (1..=8)
            .map(|g| {
                let rates: Vec<f64> = base.iter().map(|b| b * g as f64).collect();
                HypersurfaceSample {
                    value: 0.9 - rates[0] + 2.0 * rates[1] * rates[1],
                    rates,
                    stderr: 0.0,
                }
            })
            .collect();
        // oracle: on the ray every degree-d monomial is (const)·G^d, so the
        // design has at most order+1 independent columns
        let basis = monomial_basis(2, 2).unwrap();
        let design = DMatrix::from_fn(samples.len(), basis.len(), |i, k| {
            basis.evaluate(k, &samples[i].rates)
        });
        assert_eq!(design.rank(1e-12 * design.norm()), 3);
        assert!(matches!(
            hypersurface_fit(&samples, 2),
            Err(Error::Conditioning { rank: 3, columns: 6, .. })
        ));
    }
}
