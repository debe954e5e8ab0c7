//! Finite-shot measurement.
//!
//! A measurement is projective in the observable's eigenbasis, with
//! degenerate eigenvalues merged into one outcome. Shots are drawn as
//! outcome counts by chained conditional binomials from a ChaCha20 stream,
//! so identical `(seed, inputs)` reproduce identical counts on any machine.
//!
//! `stderr` is the sample standard deviation (denominator `shots − 1`)
//! divided by `√shots`; a single shot reports `stderr = 0`.

use rand::{RngCore, SeedableRng};
use rand_chacha::ChaCha20Rng;
use rand_distr::{Binomial, Distribution};

use crate::error::{Error, Result};
use crate::quantum::{trace_product, DensityMatrix, Observable};

/// Recorded in reports so that seeded runs can be reproduced.
pub const RNG_ALGORITHM: &str = "ChaCha20 (rand_chacha 0.9, seed_from_u64)";

const NORMALIZATION_TOL: f64 = 1e-8;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ShotConfig {
    pub shots: u64,
    pub seed: u64,
}

impl ShotConfig {
    pub fn new(shots: u64, seed: u64) -> Result<Self> {
        if shots == 0 {
            return Err(Error::Config("shots must be at least 1".into()));
        }
        Ok(Self { shots, seed })
    }

    /// Configuration for the `index`-th task of a sweep seeded by `self.seed`.
    pub fn for_task(&self, index: u64) -> Self {
        Self {
            shots: self.shots,
            seed: task_seed(self.seed, index),
        }
    }
}

/// Per-task seed: the first word of ChaCha20 stream `index` keyed by
/// `seed_from_u64(master)`. Independent of evaluation order.
pub fn task_seed(master: u64, index: u64) -> u64 {
    let mut rng = ChaCha20Rng::seed_from_u64(master);
    rng.set_stream(index);
    rng.next_u64()
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SampledEstimate {
    pub mean: f64,
    pub stderr: f64,
    pub shots: u64,
}

/// Born-rule probabilities for each distinct eigenvalue.
pub fn outcome_probabilities(obs: &Observable, rho: &DensityMatrix) -> Result<Vec<f64>> {
    let mut probs = obs
        .projectors()
        .iter()
        .map(|p| trace_product(p, rho.matrix()).map(|x| x.clamp(0.0, 1.0)))
        .collect::<Result<Vec<_>>>()?;
    let total: f64 = probs.iter().sum();
    if (total - 1.0).abs() > NORMALIZATION_TOL {
        return Err(Error::CorruptedState(total));
    }
    probs.iter_mut().for_each(|p| *p /= total);
    Ok(probs)
}

/// Number of shots landing on each outcome.
pub fn outcome_counts(probs: &[f64], config: &ShotConfig) -> Result<Vec<u64>> {
    let mut rng = ChaCha20Rng::seed_from_u64(config.seed);
    let mut remaining = config.shots;
    let mut mass = 1.0f64;
    let mut counts = Vec::with_capacity(probs.len());
    for (k, &p) in probs.iter().enumerate() {
        let n = if k + 1 == probs.len() || remaining == 0 {
            remaining
        } else {
            let cond = if mass > 0.0 { (p / mass).clamp(0.0, 1.0) } else { 0.0 };
            Binomial::new(remaining, cond)
                .map_err(|e| Error::Config(format!("binomial draw: {e}")))?
                .sample(&mut rng)
        };
        counts.push(n);
        remaining -= n;
        mass -= p;
    }
    Ok(counts)
}

pub fn measure(obs: &Observable, rho: &DensityMatrix, config: &ShotConfig) -> Result<SampledEstimate> {
    if config.shots == 0 {
        return Err(Error::Config("shots must be at least 1".into()));
    }
    let probs = outcome_probabilities(obs, rho)?;
    let counts = outcome_counts(&probs, config)?;
    let shots = config.shots as f64;
    let values = obs.eigenvalues();
    let mean = counts
        .iter()
        .zip(values)
        .map(|(&n, &e)| n as f64 * e)
        .sum::<f64>()
        / shots;
    let stderr = if config.shots > 1 {
        let ss: f64 = counts
            .iter()
            .zip(values)
            .map(|(&n, &e)| n as f64 * (e - mean).powi(2))
            .sum();
        (ss / (shots - 1.0)).sqrt() / shots.sqrt()
    } else {
        0.0
    };
    Ok(SampledEstimate {
        mean,
        stderr,
        shots: config.shots,
    })
}
