//! Standard ZNE on a driven two-qubit register with four distinct T1/T2
//! rates: Richardson, least-squares polynomial and exponential fits.
//!
//!     cargo run --example richardson

use zne::pipeline::run_zne;
use zne::scenario::{ConfigFile, MethodSpec};

fn main() -> zne::Result<()> {
    let path = std::path::Path::new(env!("CARGO_MANIFEST_DIR")).join("configs/richardson.json");
    let cfg = ConfigFile::load(&path)?;
    let scenario = cfg.scenario()?;
    let base = cfg.pipeline()?.clone();

    let runs = [
        (MethodSpec::Richardson, vec![1.0, 2.0], None),
        (MethodSpec::Richardson, vec![1.0, 2.0, 3.0], None),
        (MethodSpec::Richardson, vec![1.0, 2.0, 3.0, 4.0], None),
        (MethodSpec::Polynomial, vec![1.0, 1.5, 2.0, 2.5, 3.0], Some(2)),
        (MethodSpec::Exponential, vec![1.0, 2.0, 3.0], None),
    ];
    for (method, factors, order) in runs {
        let mut spec = base.clone();
        spec.method = method;
        spec.factors = factors;
        spec.order = order;
        let report = run_zne(&scenario, &spec)?;
        println!(
            "{:<22} {} settings  estimate {:+.10}  |bias| {:.3e}",
            report.fit.method.to_string(),
            report.settings,
            report.estimate(),
            report.abs_bias
        );
    }
    Ok(())
}
