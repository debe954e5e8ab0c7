//! Global noise amplification: every rate scaled by the same factor `G`.
//!
//! Two routes produce the same amplified state. Rate scaling multiplies every
//! `λ_i` by `G`. Pulse stretching runs the drive `G` times slower with
//! `H'(t) = H(t/G)/G` over `GT`, leaving the rates untouched; substituting
//! `t = G t'` in the integrated master equation shows that
//! `ρ'_λ(GT) = ρ_{Gλ}(T)`. [`equivalence_gap`] measures that identity
//! numerically.

use crate::error::{Error, Result};
use crate::lindblad::{evolve, EvolutionConfig, HamiltonianSchedule, OpenSystem, Segment};
use crate::quantum::{max_abs_diff, NoiseModel, NoiseTerm, C64};

fn check_factor(factor: f64) -> Result<()> {
    if !factor.is_finite() || !(factor >= 1.0) {
        return Err(Error::FactorBelowOne(factor));
    }
    Ok(())
}

/// Every rate multiplied by `factor`; jump operators unchanged.
pub fn scale_rates(noise: &NoiseModel, factor: f64) -> Result<NoiseModel> {
    check_factor(factor)?;
    NoiseModel::new(
        noise
            .terms()
            .iter()
            .map(|t| NoiseTerm {
                jump: t.jump.clone(),
                rate: t.rate * factor,
            })
            .collect(),
    )
}

/// Durations multiplied by `factor`, generators divided by it.
pub fn stretch_pulse(hamiltonian: &HamiltonianSchedule, factor: f64) -> Result<HamiltonianSchedule> {
    check_factor(factor)?;
    let inv = C64::from(1.0 / factor);
    Ok(HamiltonianSchedule::from_segments_unchecked(
        hamiltonian
            .segments()
            .iter()
            .map(|s| Segment {
                duration: s.duration * factor,
                generator: &s.generator * inv,
            })
            .collect(),
    ))
}

/// Largest entrywise distance between the pulse-stretched evolution over
/// `GT` and the rate-scaled evolution over `T`.
pub fn equivalence_gap(system: &OpenSystem, factor: f64, config: &EvolutionConfig) -> Result<f64> {
    let stretched = evolve(
        &system.initial,
        &stretch_pulse(&system.hamiltonian, factor)?,
        &system.noise,
        config,
    )?;
    let scaled = evolve(
        &system.initial,
        &system.hamiltonian,
        &scale_rates(&system.noise, factor)?,
        config,
    )?;
    Ok(max_abs_diff(
        stretched.final_state.matrix(),
        scaled.final_state.matrix(),
    ))
}

/// Base rate vector λ̄₁ and the amplification levels `G_j`.
#[derive(Clone, Debug)]
pub struct AmplificationPlan {
    base_rates: NoiseModel,
    factors: Vec<f64>,
}

impl AmplificationPlan {
    /// Factors must be at least 1 and strictly increasing.
    pub fn new(base_rates: NoiseModel, factors: Vec<f64>) -> Result<Self> {
        if factors.is_empty() {
            return Err(Error::Config("amplification plan has no factors".into()));
        }
        for &g in &factors {
            check_factor(g)?;
        }
        for w in factors.windows(2) {
            if w[1] == w[0] {
                return Err(Error::DegenerateNodes(w[0]));
            }
            if w[1] < w[0] {
                return Err(Error::Config(format!(
                    "amplification factors must be strictly increasing ({} after {})",
                    w[1], w[0]
                )));
            }
        }
        Ok(Self { base_rates, factors })
    }

    pub fn base_rates(&self) -> &NoiseModel {
        &self.base_rates
    }

    pub fn factors(&self) -> &[f64] {
        &self.factors
    }

    /// Amplified noise models, one per factor, in factor order.
    pub fn noise_models(&self) -> Result<Vec<NoiseModel>> {
        self.factors
            .iter()
            .map(|&g| scale_rates(&self.base_rates, g))
            .collect()
    }
}
