//! Relaxation and dephasing of a single qubit against their closed forms,
//! with both integrators.

use zne::lindblad::{evolve, EvolutionConfig, HamiltonianSchedule};
use zne::quantum::{expectation, DensityMatrix, NoiseModel, Observable};

fn main() -> zne::Result<()> {
    let (rate, horizon) = (0.3, 2.0);
    let idle = HamiltonianSchedule::idle(2, horizon)?;
    let z = Observable::pauli("Z")?;
    let x = Observable::pauli("X")?;

    for config in [EvolutionConfig::default(), EvolutionConfig::rk45(1e-10)] {
        let relax = evolve(
            &DensityMatrix::basis("1")?,
            &idle,
            &NoiseModel::t1_t2(&[(rate, 0.0)])?,
            &config,
        )?;
        let dephase = evolve(
            &DensityMatrix::product("+")?,
            &idle,
            &NoiseModel::t1_t2(&[(0.0, rate)])?,
            &config,
        )?;
        let ez = expectation(&z, &relax.final_state)?;
        let ex = expectation(&x, &dephase.final_state)?;
        println!("{config:?}");
        println!(
            "  <Z> = {ez:.12}  closed form {:.12}  ({} steps, trace drift {:.1e})",
            1.0 - 2.0 * (-rate * horizon).exp(),
            relax.steps_taken,
            relax.trace_drift
        );
        println!("  <X> = {ex:.12}  closed form {:.12}", (-2.0 * rate * horizon).exp());
    }
    Ok(())
}
