//! Finite-shot Richardson: the reported variance Σγ²σ² against the spread
//! of estimates over many seeds.

use zne::pipeline::run_zne;
use zne::scenario::{ConfigFile, ShotSpec};

fn main() -> zne::Result<()> {
    let path = std::path::Path::new(env!("CARGO_MANIFEST_DIR")).join("configs/sampled.json");
    let cfg = ConfigFile::load(&path)?;
    let scenario = cfg.scenario()?;
    let mut spec = cfg.pipeline()?.clone();

    for shots in [1_000u64, 4_000, 16_000] {
        let mut estimates = Vec::new();
        let mut predicted = 0.0;
        let seeds = 100;
        for seed in 0..seeds {
            spec.sampling = Some(ShotSpec { shots, seed });
            let report = run_zne(&scenario, &spec)?;
            predicted += report.fit.variance / seeds as f64;
            estimates.push(report.estimate());
        }
        let mean = estimates.iter().sum::<f64>() / seeds as f64;
        let var = estimates.iter().map(|e| (e - mean).powi(2)).sum::<f64>() / (seeds - 1) as f64;
        println!(
            "{shots:>6} shots: mean {mean:+.5}, std {:.4e}, predicted {:.4e}",
            var.sqrt(),
            predicted.sqrt()
        );
    }
    Ok(())
}
