//! Config file schema.
//!
//! One JSON document carries everything a run needs:
//!
//! ```json
//! {
//!   "scenario": {
//!     "qubits": 2,
//!     "initial_state": { "product": "+0" },
//!     "hamiltonian": [
//!       { "duration": 1.0, "generator": { "pauli_sum": [ { "coeff": 0.5, "pauli": "XI" } ] } }
//!     ],
//!     "noise": [ { "site": 0, "kind": "relaxation", "rate": 0.01 } ],
//!     "custom_noise": [],
//!     "horizon": 1.0,
//!     "observable": { "pauli": "XI" }
//!   },
//!   "pipeline": {
//!     "method": "richardson",
//!     "factors": [1, 2, 3],
//!     "integrator": { "rk4": {} }
//!   }
//! }
//! ```
//!
//! Unknown fields are rejected everywhere. A Hamiltonian schedule shorter
//! than `horizon` is padded with an idle (`H = 0`) segment.

use std::path::Path;

use serde::Deserialize;

use crate::error::{Error, Result};
use crate::lindblad::{EvolutionConfig, HamiltonianSchedule, OpenSystem, Segment};
use crate::quantum::{
    c, dephasing_jump, pauli_string, relaxation_jump, CMatrix, DensityMatrix, JumpOperator,
    NoiseModel, NoiseTerm, Observable, C64,
};
use crate::sampling::ShotConfig;

const HORIZON_SLACK: f64 = 1e-12;

#[derive(Clone, Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConfigFile {
    #[serde(default)]
    pub scenario: Option<ScenarioSpec>,
    #[serde(default)]
    pub pipeline: Option<PipelineSpec>,
    #[serde(default)]
    pub surface: Option<SurfaceSpec>,
    #[serde(default)]
    pub overhead: Option<OverheadSpec>,
}

impl ConfigFile {
    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::Config(format!("config: {e}")))
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::Config(format!("{}: {e}", path.display())))?;
        serde_json::from_str(&text).map_err(|e| Error::Config(format!("{}: {e}", path.display())))
    }

    pub fn scenario(&self) -> Result<Scenario> {
        self.scenario
            .as_ref()
            .ok_or_else(|| Error::Config("missing `scenario` section".into()))?
            .build()
    }

    pub fn pipeline(&self) -> Result<&PipelineSpec> {
        self.pipeline
            .as_ref()
            .ok_or_else(|| Error::Config("missing `pipeline` section".into()))
    }
}

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MatrixSpec {
    pub re: Vec<Vec<f64>>,
    #[serde(default)]
    pub im: Option<Vec<Vec<f64>>>,
}

impl MatrixSpec {
    fn build(&self, field: &str) -> Result<CMatrix> {
        let n = self.re.len();
        if n == 0 || self.re.iter().any(|row| row.len() != n) {
            return Err(Error::Config(format!("{field}.re: expected a square matrix")));
        }
        if let Some(im) = &self.im {
            if im.len() != n || im.iter().any(|row| row.len() != n) {
                return Err(Error::Config(format!("{field}.im: shape differs from `re`")));
            }
        }
        Ok(CMatrix::from_fn(n, n, |i, j| {
            let im = self.im.as_ref().map_or(0.0, |m| m[i][j]);
            c(self.re[i][j], im)
        }))
    }
}

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PauliTerm {
    pub coeff: f64,
    pub pauli: String,
}

#[derive(Clone, Debug, Deserialize)]
#[serde(rename_all = "snake_case", deny_unknown_fields)]
pub enum OperatorSpec {
    Pauli(String),
    PauliSum(Vec<PauliTerm>),
    Matrix(MatrixSpec),
}

impl OperatorSpec {
    fn build(&self, qubits: usize, field: &str) -> Result<CMatrix> {
        let dim = 1usize << qubits;
        let m = match self {
            OperatorSpec::Pauli(p) => pauli_string(p).map_err(|e| ctx(field, e))?,
            OperatorSpec::PauliSum(terms) => {
                let mut acc = CMatrix::zeros(dim, dim);
                for (k, t) in terms.iter().enumerate() {
                    let p = pauli_string(&t.pauli).map_err(|e| ctx(&format!("{field}[{k}]"), e))?;
                    if p.nrows() != dim {
                        return Err(Error::Config(format!(
                            "{field}[{k}]: Pauli string `{}` does not act on {qubits} qubits",
                            t.pauli
                        )));
                    }
                    acc += p * C64::from(t.coeff);
                }
                acc
            }
            OperatorSpec::Matrix(m) => m.build(field)?,
        };
        if m.nrows() != dim {
            return Err(Error::Config(format!(
                "{field}: operator dimension {} does not match {qubits} qubits",
                m.nrows()
            )));
        }
        Ok(m)
    }
}

#[derive(Clone, Debug, Deserialize)]
#[serde(rename_all = "snake_case", deny_unknown_fields)]
pub enum StateSpec {
    /// Computational basis bit string, e.g. `"01"`.
    Basis(String),
    /// Single-qubit labels from `0 1 + - r l`, e.g. `"+0"`.
    Product(String),
    Matrix(MatrixSpec),
}

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SegmentSpec {
    pub duration: f64,
    pub generator: OperatorSpec,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum NoiseKind {
    Relaxation,
    Dephasing,
}

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct NoiseSpec {
    pub site: usize,
    pub kind: NoiseKind,
    pub rate: f64,
}

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CustomNoiseSpec {
    pub label: String,
    pub operator: OperatorSpec,
    pub rate: f64,
}

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScenarioSpec {
    pub qubits: usize,
    pub initial_state: StateSpec,
    #[serde(default)]
    pub hamiltonian: Vec<SegmentSpec>,
    #[serde(default)]
    pub noise: Vec<NoiseSpec>,
    #[serde(default)]
    pub custom_noise: Vec<CustomNoiseSpec>,
    pub horizon: f64,
    pub observable: OperatorSpec,
}

fn ctx(field: &str, e: Error) -> Error {
    Error::Config(format!("{field}: {e}"))
}

/// A validated scenario ready to evolve.
#[derive(Clone, Debug)]
pub struct Scenario {
    pub qubits: usize,
    pub system: OpenSystem,
}

impl Scenario {
    pub fn horizon(&self) -> f64 {
        self.system.horizon()
    }

    /// Number of independent noise rates N.
    pub fn num_sources(&self) -> usize {
        self.system.noise.len()
    }

    pub fn base_rates(&self) -> Vec<f64> {
        self.system.noise.rates()
    }
}

impl ScenarioSpec {
    pub fn build(&self) -> Result<Scenario> {
        let q = self.qubits;
        if q == 0 || q > crate::quantum::MAX_QUBITS {
            return Err(Error::Config(format!(
                "scenario.qubits: {q} outside 1..={}",
                crate::quantum::MAX_QUBITS
            )));
        }
        if !(self.horizon > 0.0) || !self.horizon.is_finite() {
            return Err(Error::Config(format!(
                "scenario.horizon: {} must be positive",
                self.horizon
            )));
        }
        let dim = 1usize << q;

        let initial = match &self.initial_state {
            StateSpec::Basis(bits) => {
                if bits.chars().any(|ch| ch != '0' && ch != '1') {
                    return Err(Error::Config(format!(
                        "scenario.initial_state.basis: `{bits}` is not a bit string"
                    )));
                }
                DensityMatrix::basis(bits)
            }
            StateSpec::Product(labels) => DensityMatrix::product(labels),
            StateSpec::Matrix(m) => DensityMatrix::new(m.build("scenario.initial_state.matrix")?),
        }
        .map_err(|e| ctx("scenario.initial_state", e))?;
        if initial.dim() != dim {
            return Err(Error::Config(format!(
                "scenario.initial_state: dimension {} does not match {q} qubits",
                initial.dim()
            )));
        }

        let mut segments = Vec::with_capacity(self.hamiltonian.len() + 1);
        for (k, seg) in self.hamiltonian.iter().enumerate() {
            let field = format!("scenario.hamiltonian[{k}]");
            segments.push(Segment {
                duration: seg.duration,
                generator: seg.generator.build(q, &format!("{field}.generator"))?,
            });
        }
        let used: f64 = segments.iter().map(|s| s.duration).sum();
        if used > self.horizon * (1.0 + HORIZON_SLACK) {
            return Err(Error::Config(format!(
                "scenario.hamiltonian: total duration {used} exceeds horizon {}",
                self.horizon
            )));
        }
        let idle = self.horizon - used;
        if idle > self.horizon * HORIZON_SLACK {
            segments.push(Segment {
                duration: idle,
                generator: CMatrix::zeros(dim, dim),
            });
        }
        let hamiltonian =
            HamiltonianSchedule::new(segments).map_err(|e| ctx("scenario.hamiltonian", e))?;

        let mut terms = Vec::new();
        for (k, n) in self.noise.iter().enumerate() {
            let field = format!("scenario.noise[{k}]");
            if n.site >= q {
                return Err(Error::Config(format!(
                    "{field}.site: {} out of range for {q} qubits",
                    n.site
                )));
            }
            let jump = match n.kind {
                NoiseKind::Relaxation => relaxation_jump(n.site, q),
                NoiseKind::Dephasing => dephasing_jump(n.site, q),
            }
            .map_err(|e| ctx(&field, e))?;
            terms.push(NoiseTerm { jump, rate: n.rate });
        }
        for (k, n) in self.custom_noise.iter().enumerate() {
            let field = format!("scenario.custom_noise[{k}]");
            let m = n.operator.build(q, &format!("{field}.operator"))?;
            let jump = JumpOperator::custom(n.label.clone(), m).map_err(|e| ctx(&field, e))?;
            terms.push(NoiseTerm { jump, rate: n.rate });
        }
        let noise = NoiseModel::new(terms).map_err(|e| ctx("scenario.noise", e))?;
        if noise.weak_noise_advisory(self.horizon) {
            log::warn!("some rate·horizon ≥ 0.5; the weak-noise expansion may not hold");
        }

        let observable = Observable::new(self.observable.build(q, "scenario.observable")?)
            .map_err(|e| ctx("scenario.observable", e))?;

        Ok(Scenario {
            qubits: q,
            system: OpenSystem {
                initial,
                hamiltonian,
                noise,
                observable,
            },
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum MethodSpec {
    Richardson,
    Polynomial,
    Exponential,
    Hypersurface,
}

#[derive(Clone, Copy, Debug, PartialEq, Deserialize)]
#[serde(rename_all = "snake_case", deny_unknown_fields)]
pub enum IntegratorSpec {
    Rk4 {
        #[serde(default)]
        step: Option<f64>,
    },
    Rk45 {
        tolerance: f64,
    },
}

impl Default for IntegratorSpec {
    fn default() -> Self {
        IntegratorSpec::Rk4 { step: None }
    }
}

impl From<IntegratorSpec> for EvolutionConfig {
    fn from(spec: IntegratorSpec) -> Self {
        match spec {
            IntegratorSpec::Rk4 { step } => EvolutionConfig::Rk4Fixed { step },
            IntegratorSpec::Rk45 { tolerance } => EvolutionConfig::Rk45Adaptive { tolerance },
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ShotSpec {
    pub shots: u64,
    #[serde(default)]
    pub seed: u64,
}

impl ShotSpec {
    pub fn config(&self) -> Result<ShotConfig> {
        ShotConfig::new(self.shots, self.seed)
    }
}

/// Random rate vectors `λ_i·(1 + spread·u_i)`, `u_i ~ U[0, 1)`.
#[derive(Clone, Copy, Debug, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RandomPlan {
    pub count: usize,
    pub spread: f64,
    #[serde(default)]
    pub seed: u64,
}

/// Rate vectors for the hypersurface method. All listed parts are combined,
/// in the order ray, explicit, random.
#[derive(Clone, Debug, Default, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SamplePlan {
    /// Points `G·λ̄₁` on the amplification ray.
    #[serde(default)]
    pub ray_factors: Vec<f64>,
    #[serde(default)]
    pub explicit: Vec<Vec<f64>>,
    #[serde(default)]
    pub random: Option<RandomPlan>,
}

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PipelineSpec {
    pub method: MethodSpec,
    #[serde(default)]
    pub factors: Vec<f64>,
    /// Polynomial degree or multinomial truncation order. For Richardson it
    /// is implied by the factor count and, if given, must agree.
    #[serde(default)]
    pub order: Option<usize>,
    #[serde(default)]
    pub samples: Option<SamplePlan>,
    #[serde(default)]
    pub sampling: Option<ShotSpec>,
    #[serde(default)]
    pub integrator: IntegratorSpec,
}

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GridSpec {
    pub min: [f64; 2],
    pub max: [f64; 2],
    pub points: [usize; 2],
}

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SurfaceSpec {
    pub grid: GridSpec,
    /// Base rate pairs λ̄₁, one trajectory each.
    pub rays: Vec<[f64; 2]>,
    pub factors: Vec<f64>,
    #[serde(default)]
    pub integrator: IntegratorSpec,
}

#[derive(Clone, Copy, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OverheadSpec {
    pub sources: usize,
    pub order: usize,
    #[serde(default = "default_stability_minutes")]
    pub stability_minutes: f64,
    #[serde(default = "default_settings_per_period")]
    pub settings_per_period: u64,
}

fn default_stability_minutes() -> f64 {
    1.0
}

fn default_settings_per_period() -> u64 {
    1
}
