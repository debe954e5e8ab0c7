use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("site {site} out of range for {qubits}-qubit system")]
    SiteOutOfRange { site: usize, qubits: usize },

    #[error("dimension mismatch: expected {expected}, got {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("invalid matrix: {0}")]
    InvalidMatrix(String),

    #[error("invalid density matrix: {0}")]
    InvalidState(String),

    #[error("expectation value has imaginary part {0:e}; state or observable is corrupted")]
    ImaginaryExpectation(f64),

    #[error("invalid noise model: {0}")]
    InvalidNoise(String),

    #[error("amplification factor {0} is below 1; noise reduction is not implementable")]
    FactorBelowOne(f64),

    #[error("invalid configuration: {0}")]
    Config(String),

    #[error("integration diverged at t = {time}")]
    IntegrationDiverged { time: f64 },

    #[error("adaptive step size underflow at t = {time}")]
    StepUnderflow { time: f64 },

    #[error("degenerate extrapolation nodes: factor {0} appears more than once")]
    DegenerateNodes(f64),

    #[error("insufficient points: {required} required, {found} given")]
    InsufficientPoints { required: usize, found: usize },

    #[error("insufficient samples: hypersurface fit requires {required}, {found} given")]
    InsufficientSamples { required: u64, found: usize },

    #[error("ill-conditioned design matrix: rank {rank} of {columns} (condition {condition:e})")]
    Conditioning {
        rank: usize,
        columns: usize,
        condition: f64,
    },

    #[error("amplification factors are not equally spaced")]
    UnequalSpacing,

    #[error("degenerate ratio: the first two values coincide")]
    DegenerateRatio,

    #[error("data does not decay toward a limit (ratio {0}); exponential model does not apply")]
    NonDecaying(f64),

    #[error("mixing exact (stderr = 0) and sampled points is not supported")]
    MixedWeights,

    #[error("monomial basis needs {required} terms, over the budget of {cap}")]
    BudgetExceeded { required: String, cap: u64 },

    #[error("outcome probabilities sum to {0}; state is corrupted")]
    CorruptedState(f64),

    #[error("surface export needs exactly 2 free noise rates, scenario has {0}")]
    UnsupportedVisualization(usize),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),
}

impl Error {
    /// Process exit code: 2 config error, 3 numerical failure, 4 budget exceeded.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::IntegrationDiverged { .. }
            | Error::StepUnderflow { .. }
            | Error::Conditioning { .. }
            | Error::ImaginaryExpectation(_)
            | Error::CorruptedState(_)
            | Error::DegenerateRatio
            | Error::NonDecaying(_) => 3,
            Error::BudgetExceeded { .. } => 4,
            _ => 2,
        }
    }
}
