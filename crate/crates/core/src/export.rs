//! CSV outputs. Every file has a header row and floats are written with 17
//! significant digits, which round-trips any `f64` exactly.
//!
//! | file              | columns                                                    |
//! |-------------------|------------------------------------------------------------|
//! | `points.csv`      | `factor,value,stderr,weight`                               |
//! | `samples.csv`     | `rate_0,…,rate_{N-1},value,stderr`                         |
//! | `summary.csv`     | `method,estimate,ideal,abs_bias,variance,settings,required,standard_zne,rng` |
//! | `overhead.csv`    | `quantity,settings,minutes,years`                          |
//! | `grid.csv`        | `lambda_1,lambda_2,expectation`                            |
//! | `ray_<k>.csv`     | `factor,lambda_1,lambda_2,expectation`                     |
//! | `intercepts.csv`  | `ray,lambda_1,lambda_2,intercept,ideal,abs_bias`           |

use std::path::{Path, PathBuf};

use crate::error::Result;
use crate::pipeline::{
    surface_data, HypersurfaceReport, OverheadReport, SurfaceData, ZneReport, MINUTES_PER_YEAR,
};
use crate::scenario::{Scenario, SurfaceSpec};

pub fn fmt_f64(x: f64) -> String {
    format!("{x:.16e}")
}

fn writer(dir: &Path, name: &str) -> Result<(csv::Writer<std::fs::File>, PathBuf)> {
    std::fs::create_dir_all(dir)?;
    let path = dir.join(name);
    Ok((csv::Writer::from_path(&path)?, path))
}

const SUMMARY_HEADER: [&str; 9] = [
    "method",
    "estimate",
    "ideal",
    "abs_bias",
    "variance",
    "settings",
    "required",
    "standard_zne",
    "rng",
];

pub fn write_zne(report: &ZneReport, dir: &Path) -> Result<Vec<PathBuf>> {
    let (mut w, points) = writer(dir, "points.csv")?;
    w.write_record(["factor", "value", "stderr", "weight"])?;
    let is_richardson = matches!(report.fit.method, crate::extrapolate::Method::Richardson);
    for (j, p) in report.points.iter().enumerate() {
        let weight = if is_richardson {
            fmt_f64(report.fit.coefficients[j])
        } else {
            String::new()
        };
        w.write_record([fmt_f64(p.factor), fmt_f64(p.value), fmt_f64(p.stderr), weight])?;
    }
    w.flush()?;

    let (mut w, summary) = writer(dir, "summary.csv")?;
    w.write_record(SUMMARY_HEADER)?;
    w.write_record([
        report.fit.method.to_string(),
        fmt_f64(report.fit.estimate),
        fmt_f64(report.ideal),
        fmt_f64(report.abs_bias),
        fmt_f64(report.fit.variance),
        report.settings.to_string(),
        report.settings.to_string(),
        report.settings.to_string(),
        report.rng_algorithm().unwrap_or("").to_string(),
    ])?;
    w.flush()?;
    Ok(vec![points, summary])
}

pub fn write_hypersurface(report: &HypersurfaceReport, dir: &Path) -> Result<Vec<PathBuf>> {
    let n = report.samples.first().map_or(0, |s| s.rates.len());
    let (mut w, samples) = writer(dir, "samples.csv")?;
    let mut header: Vec<String> = (0..n).map(|i| format!("rate_{i}")).collect();
    header.push("value".into());
    header.push("stderr".into());
    w.write_record(&header)?;
    for s in &report.samples {
        let mut row: Vec<String> = s.rates.iter().map(|&r| fmt_f64(r)).collect();
        row.push(fmt_f64(s.value));
        row.push(fmt_f64(s.stderr));
        w.write_record(&row)?;
    }
    w.flush()?;

    let (mut w, summary) = writer(dir, "summary.csv")?;
    w.write_record(SUMMARY_HEADER)?;
    w.write_record([
        report.fit.method.to_string(),
        fmt_f64(report.fit.estimate),
        fmt_f64(report.ideal),
        fmt_f64(report.abs_bias),
        fmt_f64(report.fit.variance),
        report.samples.len().to_string(),
        report.overhead.cumulative.to_string(),
        report.standard_zne().to_string(),
        report.shots.map_or("", |_| crate::sampling::RNG_ALGORITHM).to_string(),
    ])?;
    w.flush()?;
    Ok(vec![samples, summary])
}

pub fn write_overhead(report: &OverheadReport, dir: &Path) -> Result<Vec<PathBuf>> {
    let (mut w, path) = writer(dir, "overhead.csv")?;
    w.write_record(["quantity", "settings", "minutes", "years"])?;
    let mut row = |label: String, settings: String, minutes: f64| -> Result<()> {
        w.write_record([
            label,
            settings,
            fmt_f64(minutes),
            fmt_f64(minutes / MINUTES_PER_YEAR),
        ])?;
        Ok(())
    };
    row(
        "top_order".into(),
        report.count.top_order_term.to_string(),
        report.top_order_minutes(),
    )?;
    row(
        "cumulative".into(),
        report.count.cumulative.to_string(),
        report.cumulative_minutes(),
    )?;
    row(
        "standard_zne".into(),
        report.standard_zne().to_string(),
        report.standard_minutes(),
    )?;
    for (i, c) in report.count.per_order.iter().enumerate() {
        let minutes = report.minutes_for(num_traits::ToPrimitive::to_f64(c).unwrap_or(f64::INFINITY));
        row(format!("order_{i}"), c.to_string(), minutes)?;
    }
    w.flush()?;
    Ok(vec![path])
}

pub fn write_surface(data: &SurfaceData, dir: &Path) -> Result<Vec<PathBuf>> {
    let mut paths = Vec::new();
    let (mut w, path) = writer(dir, "grid.csv")?;
    w.write_record(["lambda_1", "lambda_2", "expectation"])?;
    for &(x, y, v) in &data.grid {
        w.write_record([fmt_f64(x), fmt_f64(y), fmt_f64(v)])?;
    }
    w.flush()?;
    paths.push(path);

    for (k, ray) in data.rays.iter().enumerate() {
        let (mut w, path) = writer(dir, &format!("ray_{k}.csv"))?;
        w.write_record(["factor", "lambda_1", "lambda_2", "expectation"])?;
        for &(g, v) in &ray.points {
            w.write_record([
                fmt_f64(g),
                fmt_f64(g * ray.base[0]),
                fmt_f64(g * ray.base[1]),
                fmt_f64(v),
            ])?;
        }
        w.flush()?;
        paths.push(path);
    }

    let (mut w, path) = writer(dir, "intercepts.csv")?;
    w.write_record(["ray", "lambda_1", "lambda_2", "intercept", "ideal", "abs_bias"])?;
    for (k, ray) in data.rays.iter().enumerate() {
        w.write_record([
            k.to_string(),
            fmt_f64(ray.base[0]),
            fmt_f64(ray.base[1]),
            fmt_f64(ray.intercept),
            fmt_f64(data.ideal),
            fmt_f64((ray.intercept - data.ideal).abs()),
        ])?;
    }
    w.flush()?;
    paths.push(path);
    Ok(paths)
}

/// Computes the surface and ray trajectories and writes them under `dir`.
pub fn export_surface(
    scenario: &Scenario,
    spec: &SurfaceSpec,
    dir: &Path,
) -> Result<(SurfaceData, Vec<PathBuf>)> {
    let data = surface_data(scenario, spec)?;
    let paths = write_surface(&data, dir)?;
    Ok((data, paths))
}
