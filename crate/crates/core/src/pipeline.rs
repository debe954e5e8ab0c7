//! End-to-end runs: amplify, evolve, measure, extrapolate.
//!
//! Independent noise settings are evaluated in parallel; results are always
//! assembled in input order and sampled runs derive one seed per setting
//! with [`task_seed`](crate::sampling::task_seed), so outputs do not depend
//! on scheduling.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::amplify::{scale_rates, AmplificationPlan};
use crate::error::{Error, Result};
use crate::extrapolate::{
    exponential_extrapolate, hypersurface_fit, overhead_count, polynomial_extrapolate,
    richardson_extrapolate, ExtrapolationResult, DEFAULT_BASIS_CAP, HypersurfaceSample, NoisyPoint, OverheadCount,
};
use crate::lindblad::{evolve, EvolutionConfig, OpenSystem};
use crate::quantum::{expectation, NoiseModel};
use crate::sampling::{measure, ShotConfig, RNG_ALGORITHM};
use crate::scenario::{MethodSpec, PipelineSpec, SamplePlan, Scenario, SurfaceSpec};

pub const MINUTES_PER_YEAR: f64 = 525_600.0;

/// One expectation value, exact or shot-limited.
fn observe(
    system: &OpenSystem,
    config: &EvolutionConfig,
    shots: Option<ShotConfig>,
) -> Result<(f64, f64)> {
    let out = evolve(&system.initial, &system.hamiltonian, &system.noise, config)?;
    match shots {
        None => Ok((expectation(&system.observable, &out.final_state)?, 0.0)),
        Some(cfg) => {
            let est = measure(&system.observable, &out.final_state, &cfg)?;
            Ok((est.mean, est.stderr))
        }
    }
}

/// Noise-free reference value of the scenario's observable.
pub fn ideal_value(scenario: &Scenario, config: &EvolutionConfig) -> Result<f64> {
    let system = scenario.system.with_noise(NoiseModel::empty());
    observe(&system, config, None).map(|(v, _)| v)
}

fn evaluate_all(
    scenario: &Scenario,
    models: Vec<NoiseModel>,
    config: &EvolutionConfig,
    shots: Option<ShotConfig>,
) -> Result<Vec<(f64, f64)>> {
    models
        .into_par_iter()
        .enumerate()
        .map(|(j, noise)| {
            let system = scenario.system.with_noise(noise);
            observe(&system, config, shots.map(|s| s.for_task(j as u64)))
        })
        .collect()
}

#[derive(Clone, Debug)]
pub struct ZneReport {
    pub fit: ExtrapolationResult,
    pub ideal: f64,
    pub abs_bias: f64,
    pub points: Vec<NoisyPoint>,
    /// Distinct noise settings evaluated.
    pub settings: usize,
    pub shots: Option<ShotConfig>,
}

impl ZneReport {
    pub fn estimate(&self) -> f64 {
        self.fit.estimate
    }

    pub fn rng_algorithm(&self) -> Option<&'static str> {
        self.shots.map(|_| RNG_ALGORITHM)
    }
}

fn validate_univariate(spec: &PipelineSpec) -> Result<()> {
    let n = spec.factors.len();
    match spec.method {
        MethodSpec::Richardson => {
            if n < 2 {
                return Err(Error::Config(
                    "pipeline.factors: Richardson needs at least 2 factors".into(),
                ));
            }
            if let Some(order) = spec.order {
                if order + 1 != n {
                    return Err(Error::Config(format!(
                        "pipeline.order: Richardson order {order} needs {} factors, {n} given",
                        order + 1
                    )));
                }
            }
        }
        MethodSpec::Polynomial => {
            let degree = spec.order.ok_or_else(|| {
                Error::Config("pipeline.order: polynomial fit needs a degree".into())
            })?;
            if n < degree + 1 {
                return Err(Error::Config(format!(
                    "pipeline.factors: degree {degree} needs at least {} factors, {n} given",
                    degree + 1
                )));
            }
        }
        MethodSpec::Exponential => {
            if n != 3 {
                return Err(Error::Config(format!(
                    "pipeline.factors: exponential extrapolation needs exactly 3 factors, {n} given"
                )));
            }
            let mut f = spec.factors.clone();
            f.sort_by(f64::total_cmp);
            if ((f[2] - f[1]) - (f[1] - f[0])).abs() > 1e-9 {
                return Err(Error::Config(
                    "pipeline.factors: exponential extrapolation needs equally spaced factors"
                        .into(),
                ));
            }
        }
        MethodSpec::Hypersurface => {
            return Err(Error::Config(
                "pipeline.method: use the hypersurface runner for `hypersurface`".into(),
            ))
        }
    }
    Ok(())
}

/// Standard ZNE: every rate scaled by each `G_j`, then a univariate fit.
pub fn run_zne(scenario: &Scenario, spec: &PipelineSpec) -> Result<ZneReport> {
    validate_univariate(spec)?;
    let shots = spec.sampling.map(|s| s.config()).transpose()?;
    let config: EvolutionConfig = spec.integrator.into();
    let plan = AmplificationPlan::new(scenario.system.noise.clone(), spec.factors.clone())
        .map_err(|e| Error::Config(format!("pipeline.factors: {e}")))?;

    let values = evaluate_all(scenario, plan.noise_models()?, &config, shots)?;
    let points: Vec<NoisyPoint> = plan
        .factors()
        .iter()
        .zip(values)
        .map(|(&factor, (value, stderr))| NoisyPoint {
            factor,
            value,
            stderr,
        })
        .collect();
    let fit = match spec.method {
        MethodSpec::Richardson => richardson_extrapolate(&points)?,
        MethodSpec::Polynomial => polynomial_extrapolate(&points, spec.order.unwrap_or(0))?,
        MethodSpec::Exponential => exponential_extrapolate(&points)?,
        MethodSpec::Hypersurface => unreachable!("rejected by validation"),
    };
    let ideal = ideal_value(scenario, &config)?;
    Ok(ZneReport {
        abs_bias: (fit.estimate - ideal).abs(),
        settings: points.len(),
        fit,
        ideal,
        points,
        shots,
    })
}

#[derive(Clone, Debug)]
pub struct HypersurfaceReport {
    pub fit: ExtrapolationResult,
    pub ideal: f64,
    pub abs_bias: f64,
    pub samples: Vec<HypersurfaceSample>,
    pub overhead: OverheadCount,
    pub shots: Option<ShotConfig>,
}

impl HypersurfaceReport {
    pub fn estimate(&self) -> f64 {
        self.fit.estimate
    }

    /// Settings standard ZNE needs for the same order.
    pub fn standard_zne(&self) -> usize {
        self.overhead.standard_zne()
    }
}

/// Rate vectors listed by a sample plan, in plan order.
pub fn plan_rate_vectors(base: &[f64], plan: &SamplePlan) -> Result<Vec<Vec<f64>>> {
    let mut out = Vec::new();
    for &g in &plan.ray_factors {
        if !(g >= 0.0) || !g.is_finite() {
            return Err(Error::Config(format!(
                "pipeline.samples.ray_factors: {g} must be non-negative"
            )));
        }
        out.push(base.iter().map(|r| r * g).collect());
    }
    for (k, v) in plan.explicit.iter().enumerate() {
        if v.len() != base.len() {
            return Err(Error::Config(format!(
                "pipeline.samples.explicit[{k}]: {} rates given, scenario has {}",
                v.len(),
                base.len()
            )));
        }
        out.push(v.clone());
    }
    if let Some(r) = &plan.random {
        if !(r.spread > 0.0) || !r.spread.is_finite() {
            return Err(Error::Config(
                "pipeline.samples.random.spread: must be positive".into(),
            ));
        }
        let mut rng = ChaCha8Rng::seed_from_u64(r.seed);
        for _ in 0..r.count {
            out.push(
                base.iter()
                    .map(|&l| l * (1.0 + r.spread * rng.random::<f64>()))
                    .collect(),
            );
        }
    }
    Ok(out)
}

/// Refuses bases larger than [`DEFAULT_BASIS_CAP`] before anything is built.
pub fn check_budget(overhead: &OverheadCount) -> Result<()> {
    if overhead.cumulative > DEFAULT_BASIS_CAP.into() {
        return Err(Error::BudgetExceeded {
            required: overhead.cumulative.to_string(),
            cap: DEFAULT_BASIS_CAP,
        });
    }
    Ok(())
}

/// Multivariate method: one evolution per rate vector, then a multinomial fit.
/// The basis size and sample count are checked before any evolution.
pub fn run_hypersurface(scenario: &Scenario, spec: &PipelineSpec) -> Result<HypersurfaceReport> {
    let order = spec
        .order
        .ok_or_else(|| Error::Config("pipeline.order: hypersurface fit needs an order".into()))?;
    let plan = spec
        .samples
        .as_ref()
        .ok_or_else(|| Error::Config("pipeline.samples: hypersurface fit needs a sample plan".into()))?;
    let sources = scenario.num_sources();
    if sources == 0 {
        return Err(Error::Config(
            "scenario.noise: hypersurface fit needs at least one noise source".into(),
        ));
    }
    let overhead = overhead_count(sources, order);
    check_budget(&overhead)?;
    let rate_vectors = plan_rate_vectors(&scenario.base_rates(), plan)?;
    if overhead.cumulative > rate_vectors.len().into() {
        return Err(Error::InsufficientSamples {
            required: overhead.cumulative_u64().unwrap_or(u64::MAX),
            found: rate_vectors.len(),
        });
    }
    let shots = spec.sampling.map(|s| s.config()).transpose()?;
    let config: EvolutionConfig = spec.integrator.into();
    let models = rate_vectors
        .iter()
        .map(|r| scenario.system.noise.with_rates(r))
        .collect::<Result<Vec<_>>>()?;
    let values = evaluate_all(scenario, models, &config, shots)?;
    let samples: Vec<HypersurfaceSample> = rate_vectors
        .into_iter()
        .zip(values)
        .map(|(rates, (value, stderr))| HypersurfaceSample {
            rates,
            value,
            stderr,
        })
        .collect();
    let fit = hypersurface_fit(&samples, order)?;
    let ideal = ideal_value(scenario, &config)?;
    Ok(HypersurfaceReport {
        abs_bias: (fit.estimate - ideal).abs(),
        fit,
        ideal,
        samples,
        overhead,
        shots,
    })
}

#[derive(Clone, Debug)]
pub struct OverheadReport {
    pub count: OverheadCount,
    pub stability_minutes: f64,
    pub settings_per_period: u64,
}

impl OverheadReport {
    pub fn standard_zne(&self) -> usize {
        self.count.standard_zne()
    }

    /// Wall-clock minutes to collect `settings` distinct noise settings.
    pub fn minutes_for(&self, settings: f64) -> f64 {
        settings * self.stability_minutes / self.settings_per_period as f64
    }

    pub fn top_order_minutes(&self) -> f64 {
        self.minutes_for(big_to_f64(&self.count.top_order_term))
    }

    pub fn cumulative_minutes(&self) -> f64 {
        self.minutes_for(big_to_f64(&self.count.cumulative))
    }

    pub fn standard_minutes(&self) -> f64 {
        self.minutes_for(self.standard_zne() as f64)
    }
}

fn big_to_f64(x: &num_bigint::BigUint) -> f64 {
    num_traits::ToPrimitive::to_f64(x).unwrap_or(f64::INFINITY)
}

/// Measurement overhead of the hypersurface method and the time it would
/// take when each stability period yields `settings_per_period` settings.
pub fn overhead_report(
    sources: usize,
    order: usize,
    stability_minutes: f64,
    settings_per_period: u64,
) -> Result<OverheadReport> {
    if sources == 0 {
        return Err(Error::Config("overhead.sources: must be at least 1".into()));
    }
    if !(stability_minutes > 0.0) || !stability_minutes.is_finite() {
        return Err(Error::Config("overhead.stability_minutes: must be positive".into()));
    }
    if settings_per_period == 0 {
        return Err(Error::Config("overhead.settings_per_period: must be positive".into()));
    }
    Ok(OverheadReport {
        count: overhead_count(sources, order),
        stability_minutes,
        settings_per_period,
    })
}

#[derive(Clone, Debug)]
pub struct RayTrajectory {
    pub base: [f64; 2],
    /// `(G, ⟨O⟩)` along `G·λ̄₁`.
    pub points: Vec<(f64, f64)>,
    pub intercept: f64,
}

#[derive(Clone, Debug)]
pub struct SurfaceData {
    /// `(λ₁, λ₂, ⟨O⟩)`, λ₂ varying fastest.
    pub grid: Vec<(f64, f64, f64)>,
    pub rays: Vec<RayTrajectory>,
    pub ideal: f64,
}

fn linspace(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    if n == 1 {
        return vec![lo];
    }
    (0..n)
        .map(|k| lo + (hi - lo) * k as f64 / (n - 1) as f64)
        .collect()
}

/// Observable over a 2-rate grid plus Richardson trajectories along each ray.
pub fn surface_data(scenario: &Scenario, spec: &SurfaceSpec) -> Result<SurfaceData> {
    let sources = scenario.num_sources();
    if sources != 2 {
        return Err(Error::UnsupportedVisualization(sources));
    }
    let g = &spec.grid;
    for axis in 0..2 {
        if !(g.min[axis] >= 0.0 && g.max[axis] > g.min[axis]) || g.points[axis] == 0 {
            return Err(Error::Config(format!(
                "surface.grid: axis {axis} needs 0 ≤ min < max and at least one point"
            )));
        }
    }
    for (k, ray) in spec.rays.iter().enumerate() {
        if ray.iter().any(|r| !(*r >= 0.0) || !r.is_finite()) {
            return Err(Error::Config(format!("surface.rays[{k}]: rates must be non-negative")));
        }
    }
    let config: EvolutionConfig = spec.integrator.into();
    let noise = &scenario.system.noise;

    let xs = linspace(g.min[0], g.max[0], g.points[0]);
    let ys = linspace(g.min[1], g.max[1], g.points[1]);
    let cells: Vec<(f64, f64)> = xs
        .iter()
        .flat_map(|&x| ys.iter().map(move |&y| (x, y)))
        .collect();
    let grid = cells
        .par_iter()
        .map(|&(x, y)| {
            let system = scenario.system.with_noise(noise.with_rates(&[x, y])?);
            observe(&system, &config, None).map(|(v, _)| (x, y, v))
        })
        .collect::<Result<Vec<_>>>()?;

    let rays = spec
        .rays
        .iter()
        .map(|&base| {
            let base_noise = noise.with_rates(&base)?;
            let points = spec
                .factors
                .par_iter()
                .map(|&factor| {
                    let system = scenario.system.with_noise(scale_rates(&base_noise, factor)?);
                    observe(&system, &config, None).map(|(v, _)| (factor, v))
                })
                .collect::<Result<Vec<_>>>()?;
            let noisy: Vec<NoisyPoint> =
                points.iter().map(|&(f, v)| NoisyPoint::exact(f, v)).collect();
            let intercept = richardson_extrapolate(&noisy)?.estimate;
            Ok(RayTrajectory {
                base,
                points,
                intercept,
            })
        })
        .collect::<Result<Vec<_>>>()?;

    Ok(SurfaceData {
        grid,
        rays,
        ideal: ideal_value(scenario, &config)?,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scenario::ConfigFile;

    fn relaxation_config(method: &str, factors: &str) -> ConfigFile {
        ConfigFile::from_json(&format!(
            r#"{{
            "scenario": {{
                "qubits": 1,
                "initial_state": {{ "basis": "1" }},
                "noise": [ {{ "site": 0, "kind": "relaxation", "rate": 0.05 }} ],
                "horizon": 1.0,
                "observable": {{ "pauli": "Z" }}
            }},
            "pipeline": {{ "method": "{method}", "factors": {factors} }}
        }}"#
        ))
        .unwrap()
    }

    #[test]
    fn two_point_richardson_matches_closed_form() {
        let cfg = relaxation_config("richardson", "[1, 2]");
        let report = run_zne(&cfg.scenario().unwrap(), cfg.pipeline().unwrap()).unwrap();
        let e = |g: f64| 1.0 - 2.0 * (-g * 0.05f64).exp();
        assert!((report.estimate() - (2.0 * e(1.0) - e(2.0))).abs() < 1e-9);
        assert!((report.ideal + 1.0).abs() < 1e-12);
        assert_eq!(report.settings, 2);
        assert!((report.abs_bias - (report.estimate() + 1.0).abs()).abs() < 1e-15);
    }

    #[test]
    fn exponential_spacing_is_validated() {
        let cfg = relaxation_config("exponential", "[1, 2, 4]");
        let err = run_zne(&cfg.scenario().unwrap(), cfg.pipeline().unwrap()).unwrap_err();
        assert!(matches!(err, Error::Config(ref m) if m.contains("equally spaced")));
        let cfg = relaxation_config("exponential", "[1, 2, 3]");
        let report = run_zne(&cfg.scenario().unwrap(), cfg.pipeline().unwrap()).unwrap();
        // E(G) is exactly exponential in G here, so the model is exact
        assert!(report.abs_bias < 1e-9);
    }

    #[test]
    fn overhead_examples() {
        let r = overhead_report(200, 3, 1.0, 1).unwrap();
        assert!((r.top_order_minutes() / MINUTES_PER_YEAR - 2.575).abs() < 0.01);
        assert_eq!(r.standard_zne(), 4);
        let r = overhead_report(1, 1, 3.0, 2).unwrap();
        assert_eq!(r.count.cumulative, 2u32.into());
        assert_eq!(r.standard_zne(), 2);
        assert!((r.standard_minutes() - 3.0).abs() < 1e-15);
    }

    #[test]
    fn plan_vectors() {
        let plan = SamplePlan {
            ray_factors: vec![1.0, 2.0],
            explicit: vec![vec![0.5, 0.5]],
            random: Some(crate::scenario::RandomPlan {
                count: 3,
                spread: 0.5,
                seed: 1,
            }),
        };
        let v = plan_rate_vectors(&[0.1, 0.2], &plan).unwrap();
        assert_eq!(v.len(), 6);
        assert_eq!(v[1], vec![0.2, 0.4]);
        for r in &v[3..] {
            assert!(r[0] >= 0.1 && r[0] < 0.15 && r[1] >= 0.2 && r[1] < 0.3);
        }
        assert_eq!(v, plan_rate_vectors(&[0.1, 0.2], &plan).unwrap());
    }
}
