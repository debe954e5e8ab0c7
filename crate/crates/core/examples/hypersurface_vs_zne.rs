//! The multinomial fit over all four rates against standard ZNE on the same
//! scenario. Both remove the noise to second order; the hypersurface needs
//! C(N+n, n) settings where ZNE needs n + 1.

use zne::pipeline::{run_hypersurface, run_zne};
use zne::scenario::{ConfigFile, MethodSpec};

fn main() -> zne::Result<()> {
    let path = std::path::Path::new(env!("CARGO_MANIFEST_DIR")).join("configs/hypersurface.json");
    let cfg = ConfigFile::load(&path)?;
    let scenario = cfg.scenario()?;
    let spec = cfg.pipeline()?;

    let surface = run_hypersurface(&scenario, spec)?;
    println!(
        "hypersurface: {} samples (basis {}), estimate {:+.10}, |bias| {:.3e}, condition {:.2e}",
        surface.samples.len(),
        surface.overhead.cumulative,
        surface.estimate(),
        surface.abs_bias,
        surface.fit.diagnostics.condition
    );

    let mut zne_spec = spec.clone();
    zne_spec.method = MethodSpec::Richardson;
    zne_spec.factors = vec![1.0, 2.0, 3.0];
    zne_spec.order = None;
    let zne = run_zne(&scenario, &zne_spec)?;
    println!(
        "richardson:   {} settings, estimate {:+.10}, |bias| {:.3e}",
        zne.settings,
        zne.estimate(),
        zne.abs_bias
    );

    // samples only on the ray leave the surface underdetermined
    let mut ray_only = spec.clone();
    ray_only.samples = Some(zne::scenario::SamplePlan {
        ray_factors: (1..=15).map(f64::from).collect(),
        ..Default::default()
    });
    match run_hypersurface(&scenario, &ray_only) {
        Err(e) => println!("ray-only samples: {e}"),
        Ok(r) => println!("ray-only samples: unexpectedly fitted, estimate {}", r.estimate()),
    }
    Ok(())
}
