#![allow(dead_code)]

use rand::Rng;
use rand_chacha::ChaCha8Rng;
use zne::extrapolate::{monomial_basis, MonomialBasis};
use zne::lindblad::{HamiltonianSchedule, OpenSystem, Segment};
use zne::quantum::{c, pauli_string, CMatrix, DensityMatrix, NoiseModel, Observable, C64};
use zne::scenario::{ConfigFile, Scenario};

pub fn random_hermitian(rng: &mut ChaCha8Rng, dim: usize, scale: f64) -> CMatrix {
    let a = CMatrix::from_fn(dim, dim, |_, _| {
        c(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0))
    });
    (&a + a.adjoint()) * C64::from(0.5 * scale)
}

pub fn random_pure_state(rng: &mut ChaCha8Rng, dim: usize) -> DensityMatrix {
    let psi = nalgebra::DVector::from_fn(dim, |_, _| {
        c(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0))
    });
    DensityMatrix::from_pure(&psi).unwrap()
}

pub fn random_schedule(rng: &mut ChaCha8Rng, dim: usize) -> HamiltonianSchedule {
    let n = rng.random_range(1..=3);
    HamiltonianSchedule::new(
        (0..n)
            .map(|_| Segment {
                duration: rng.random_range(0.2..0.6),
                generator: random_hermitian(rng, dim, 1.5),
            })
            .collect(),
    )
    .unwrap()
}

/// Single qubit prepared in |1⟩, relaxation only, no drive; ⟨Z⟩(T) = 1 − 2e^{−λT}.
pub fn relaxation_system(rate: f64, horizon: f64) -> OpenSystem {
    OpenSystem {
        initial: DensityMatrix::basis("1").unwrap(),
        hamiltonian: HamiltonianSchedule::idle(2, horizon).unwrap(),
        noise: NoiseModel::t1_t2(&[(rate, 0.0)]).unwrap().with_rates(&[rate, 0.0]).unwrap(),
        observable: Observable::pauli("Z").unwrap(),
    }
}

/// Driven two-qubit register with independent T1/T2 noise on each qubit,
/// four noise sources with distinct rates.
pub const DESK_SCENARIO: &str = r#"{
    "scenario": {
        "qubits": 2,
        "initial_state": { "product": "+0" },
        "hamiltonian": [
            { "duration": 0.6, "generator": { "pauli_sum": [
                { "coeff": 0.8, "pauli": "XI" }, { "coeff": 0.5, "pauli": "IX" }, { "coeff": 0.3, "pauli": "ZZ" } ] } },
            { "duration": 0.4, "generator": { "pauli_sum": [
                { "coeff": -0.6, "pauli": "YI" }, { "coeff": 0.4, "pauli": "ZZ" } ] } }
        ],
        "noise": [
            { "site": 0, "kind": "relaxation", "rate": 0.012 },
            { "site": 0, "kind": "dephasing", "rate": 0.007 },
            { "site": 1, "kind": "relaxation", "rate": 0.018 },
            { "site": 1, "kind": "dephasing", "rate": 0.004 }
        ],
        "horizon": 1.0,
        "observable": { "pauli_sum": [ { "coeff": 1.0, "pauli": "XZ" }, { "coeff": 0.5, "pauli": "ZI" } ] }
    },
    "pipeline": { "method": "richardson", "factors": [1, 2, 3, 4] }
}"#;

pub fn desk_config() -> ConfigFile {
    ConfigFile::from_json(DESK_SCENARIO).unwrap()
}

pub fn desk_scenario() -> Scenario {
    desk_config().scenario().unwrap()
}

/// Scenario with every rate multiplied by `scale`.
pub fn scaled_scenario(base: &Scenario, scale: f64) -> Scenario {
    let rates: Vec<f64> = base.base_rates().iter().map(|r| r * scale).collect();
    Scenario {
        qubits: base.qubits,
        system: base.system.with_noise(base.system.noise.with_rates(&rates).unwrap()),
    }
}

pub struct Multinomial {
    pub basis: MonomialBasis,
    pub coeffs: Vec<f64>,
}

impl Multinomial {
    pub fn random(rng: &mut ChaCha8Rng, num_vars: usize, order: usize) -> Self {
        let basis = monomial_basis(num_vars, order).unwrap();
        let coeffs = (0..basis.len()).map(|_| rng.random_range(-1.0..1.0)).collect();
        Self { basis, coeffs }
    }

    /// Direct evaluation from dense exponent vectors.
    pub fn eval(&self, rates: &[f64]) -> f64 {
        self.basis
            .iter_exponents()
            .zip(&self.coeffs)
            .map(|(e, c)| {
                c * e
                    .iter()
                    .zip(rates)
                    .map(|(&p, r)| r.powi(p as i32))
                    .product::<f64>()
            })
            .sum()
    }

    pub fn intercept(&self) -> f64 {
        self.coeffs[0]
    }
}

pub fn pauli(labels: &str) -> CMatrix {
    pauli_string(labels).unwrap()
}
