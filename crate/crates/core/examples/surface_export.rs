//! Writes the two-rate observable surface and per-ray trajectories as CSV.
//!
//!     cargo run --example surface_export -- /tmp/surface

use zne::export::export_surface;
use zne::scenario::ConfigFile;

fn main() -> zne::Result<()> {
    let out = std::env::args()
        .nth(1)
        .map(std::path::PathBuf::from)
        .unwrap_or_else(|| std::env::temp_dir().join("zne-surface"));
    let path = std::path::Path::new(env!("CARGO_MANIFEST_DIR")).join("configs/surface.json");
    let cfg = ConfigFile::load(&path)?;
    let spec = cfg.surface.as_ref().expect("surface section");

    let (data, written) = export_surface(&cfg.scenario()?, spec, &out)?;
    for ray in &data.rays {
        println!(
            "ray ({:.3}, {:.3}): intercept {:+.10}, |bias| {:.2e}",
            ray.base[0],
            ray.base[1],
            ray.intercept,
            (ray.intercept - data.ideal).abs()
        );
    }
    for p in written {
        println!("wrote {}", p.display());
    }
    Ok(())
}
