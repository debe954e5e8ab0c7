//! Command-line front end.
//!
//! Exit codes: 0 success, 2 config error, 3 numerical failure, 4 budget exceeded.

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};

use crate::error::{Error, Result};
use crate::export;
use crate::pipeline::{
    overhead_report, run_hypersurface, run_zne, surface_data, MINUTES_PER_YEAR,
};
use crate::scenario::{ConfigFile, MethodSpec, OverheadSpec, PipelineSpec, ShotSpec};

#[derive(Debug, Parser)]
#[command(name = "zne", version, about = "Zero-noise extrapolation under multi-source Lindblad noise")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Args, Clone, Default)]
pub struct CommonArgs {
    /// JSON config with `scenario`, `pipeline`, `surface` or `overhead` sections.
    #[arg(long)]
    pub config: Option<PathBuf>,
    /// Directory for CSV outputs; nothing is written when omitted.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Master seed for shot sampling.
    #[arg(long)]
    pub seed: Option<u64>,
    /// Infinite-sampling expectation values (the default).
    #[arg(long, conflicts_with = "shots")]
    pub exact: bool,
    /// Shots per noise setting.
    #[arg(long)]
    pub shots: Option<u64>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Standard ZNE pipeline (richardson, polynomial, exponential).
    Run(CommonArgs),
    /// Multivariate hypersurface fit over all noise rates.
    Hypersurface(CommonArgs),
    /// Measurement-overhead counts and wall-clock projection.
    Overhead {
        #[command(flatten)]
        common: CommonArgs,
        #[arg(long)]
        sources: Option<usize>,
        #[arg(long)]
        order: Option<usize>,
        #[arg(long)]
        stability_minutes: Option<f64>,
        #[arg(long)]
        settings_per_period: Option<u64>,
    },
    /// Observable surface over two rates plus per-ray trajectories.
    Surface(CommonArgs),
    /// Parse and validate a config without running anything.
    Validate(CommonArgs),
}

fn load(common: &CommonArgs) -> Result<ConfigFile> {
    match &common.config {
        Some(path) => ConfigFile::load(path),
        None => Err(Error::Config("--config <path> is required".into())),
    }
}

fn apply_overrides(spec: &PipelineSpec, common: &CommonArgs) -> PipelineSpec {
    let mut spec = spec.clone();
    if common.exact {
        spec.sampling = None;
    }
    if let Some(shots) = common.shots {
        let seed = common
            .seed
            .or(spec.sampling.map(|s| s.seed))
            .unwrap_or(0);
        spec.sampling = Some(ShotSpec { shots, seed });
    } else if let (Some(seed), Some(s)) = (common.seed, spec.sampling.as_mut()) {
        s.seed = seed;
    }
    spec
}

fn print_written(paths: &[PathBuf]) {
    for p in paths {
        println!("wrote {}", p.display());
    }
}

fn cmd_run(common: &CommonArgs) -> Result<()> {
    let cfg = load(common)?;
    let scenario = cfg.scenario()?;
    let spec = apply_overrides(cfg.pipeline()?, common);
    let report = run_zne(&scenario, &spec)?;
    println!("method     {}", report.fit.method);
    println!("settings   {}", report.settings);
    for p in &report.points {
        println!("  G = {:<8} value = {:+.12} ± {:.3e}", p.factor, p.value, p.stderr);
    }
    println!("estimate   {:+.12}", report.estimate());
    println!("ideal      {:+.12}", report.ideal);
    println!("|bias|     {:.6e}", report.abs_bias);
    println!("variance   {:.6e}", report.fit.variance);
    if let Some(dir) = &common.out {
        print_written(&export::write_zne(&report, dir)?);
    }
    Ok(())
}

fn cmd_hypersurface(common: &CommonArgs) -> Result<()> {
    let cfg = load(common)?;
    let scenario = cfg.scenario()?;
    let spec = apply_overrides(cfg.pipeline()?, common);
    let report = run_hypersurface(&scenario, &spec)?;
    println!("method       {}", report.fit.method);
    println!("sources      {}", report.overhead.sources);
    println!("samples      {} (basis size {})", report.samples.len(), report.overhead.cumulative);
    println!("standard ZNE {} settings", report.standard_zne());
    println!("estimate     {:+.12}", report.estimate());
    println!("ideal        {:+.12}", report.ideal);
    println!("|bias|       {:.6e}", report.abs_bias);
    println!("condition    {:.3e}", report.fit.diagnostics.condition);
    if let Some(dir) = &common.out {
        print_written(&export::write_hypersurface(&report, dir)?);
    }
    Ok(())
}

fn cmd_overhead(
    common: &CommonArgs,
    sources: Option<usize>,
    order: Option<usize>,
    stability_minutes: Option<f64>,
    settings_per_period: Option<u64>,
) -> Result<()> {
    let from_file: Option<OverheadSpec> = match &common.config {
        Some(path) => ConfigFile::load(path)?.overhead,
        None => None,
    };
    let sources = sources
        .or(from_file.map(|o| o.sources))
        .ok_or_else(|| Error::Config("overhead needs --sources or overhead.sources".into()))?;
    let order = order
        .or(from_file.map(|o| o.order))
        .ok_or_else(|| Error::Config("overhead needs --order or overhead.order".into()))?;
    let minutes = stability_minutes
        .or(from_file.map(|o| o.stability_minutes))
        .unwrap_or(1.0);
    let per_period = settings_per_period
        .or(from_file.map(|o| o.settings_per_period))
        .unwrap_or(1);
    let report = overhead_report(sources, order, minutes, per_period)?;
    println!("noise sources N = {sources}, truncation order n = {order}");
    println!(
        "top-order term   {:>24} settings  {:>14.4} years",
        report.count.top_order_term,
        report.top_order_minutes() / MINUTES_PER_YEAR
    );
    println!(
        "cumulative       {:>24} settings  {:>14.4} years",
        report.count.cumulative,
        report.cumulative_minutes() / MINUTES_PER_YEAR
    );
    println!(
        "standard ZNE     {:>24} settings  {:>14.4} minutes",
        report.standard_zne(),
        report.standard_minutes()
    );
    if let Some(dir) = &common.out {
        print_written(&export::write_overhead(&report, dir)?);
    }
    Ok(())
}

fn cmd_surface(common: &CommonArgs) -> Result<()> {
    let cfg = load(common)?;
    let scenario = cfg.scenario()?;
    let spec = cfg
        .surface
        .as_ref()
        .ok_or_else(|| Error::Config("missing `surface` section".into()))?;
    let (data, written) = match &common.out {
        Some(dir) => export::export_surface(&scenario, spec, dir)?,
        None => (surface_data(&scenario, spec)?, Vec::new()),
    };
    println!("grid points {}", data.grid.len());
    println!("ideal       {:+.12}", data.ideal);
    for (k, ray) in data.rays.iter().enumerate() {
        println!(
            "ray {k}: base ({:.4e}, {:.4e}) intercept {:+.12} |bias| {:.3e}",
            ray.base[0],
            ray.base[1],
            ray.intercept,
            (ray.intercept - data.ideal).abs()
        );
    }
    print_written(&written);
    Ok(())
}

fn cmd_validate(common: &CommonArgs) -> Result<()> {
    let cfg = load(common)?;
    if cfg.scenario.is_some() {
        let s = cfg.scenario()?;
        println!(
            "scenario: {} qubits, {} noise sources, horizon {}",
            s.qubits,
            s.num_sources(),
            s.horizon()
        );
    }
    if let Some(p) = &cfg.pipeline {
        let p = apply_overrides(p, common);
        if p.method == MethodSpec::Hypersurface {
            let order = p
                .order
                .ok_or_else(|| Error::Config("pipeline.order: hypersurface fit needs an order".into()))?;
            let scenario = cfg.scenario()?;
            let plan = p
                .samples
                .as_ref()
                .ok_or_else(|| Error::Config("pipeline.samples: missing sample plan".into()))?;
            let need = crate::extrapolate::overhead_count(scenario.num_sources(), order);
            crate::pipeline::check_budget(&need)?;
            let n = crate::pipeline::plan_rate_vectors(&scenario.base_rates(), plan)?.len();
            if need.cumulative > n.into() {
                return Err(Error::InsufficientSamples {
                    required: need.cumulative_u64().unwrap_or(u64::MAX),
                    found: n,
                });
            }
            println!("pipeline: hypersurface, order {order}, {n} samples ({} required)", need.cumulative);
        } else {
            println!("pipeline: {:?}, {} factors", p.method, p.factors.len());
        }
    }
    if cfg.surface.is_some() {
        println!("surface: present");
    }
    if cfg.overhead.is_some() {
        println!("overhead: present");
    }
    println!("ok");
    Ok(())
}

pub fn execute(cli: Cli) -> Result<()> {
    match cli.command {
        Command::Run(c) => cmd_run(&c),
        Command::Hypersurface(c) => cmd_hypersurface(&c),
        Command::Overhead {
            common,
            sources,
            order,
            stability_minutes,
            settings_per_period,
        } => cmd_overhead(&common, sources, order, stability_minutes, settings_per_period),
        Command::Surface(c) => cmd_surface(&c),
        Command::Validate(c) => cmd_validate(&c),
    }
}

/// Parses `std::env::args`, runs, and returns the process exit code.
pub fn main_with_exit_code() -> i32 {
    let cli = Cli::parse();
    match execute(cli) {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}
