//! Stretching the drive by G with fixed rates reaches the same final state
//! as multiplying every rate by G.

use zne::amplify::{equivalence_gap, scale_rates, stretch_pulse};
use zne::lindblad::{evolve, EvolutionConfig, HamiltonianSchedule, OpenSystem, Segment};
use zne::quantum::{pauli_string, C64, DensityMatrix, NoiseModel, Observable};

fn main() -> zne::Result<()> {
    let drive = pauli_string("XI")? * C64::from(0.9) + pauli_string("ZZ")? * C64::from(0.4);
    let hamiltonian = HamiltonianSchedule::new(vec![
        Segment { duration: 0.5, generator: drive.clone() },
        Segment { duration: 0.5, generator: drive * C64::from(-1.0) },
    ])?;
    let system = OpenSystem {
        initial: DensityMatrix::product("+0")?,
        hamiltonian,
        noise: NoiseModel::t1_t2(&[(0.02, 0.01), (0.03, 0.005)])?,
        observable: Observable::pauli("XZ")?,
    };
    let config = EvolutionConfig::rk45(1e-11);

    for g in [1.5, 2.0, 3.0] {
        let stretched = stretch_pulse(&system.hamiltonian, g)?;
        let scaled = scale_rates(&system.noise, g)?;
        let a = evolve(&system.initial, &stretched, &system.noise, &config)?;
        let b = evolve(&system.initial, &system.hamiltonian, &scaled, &config)?;
        println!(
            "G = {g}: stretched to T = {:.2}, steps {} vs {}, gap {:.2e}",
            stretched.total_time(),
            a.steps_taken,
            b.steps_taken,
            equivalence_gap(&system, g, &config)?
        );
    }
    Ok(())
}
