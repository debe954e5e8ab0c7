use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn config(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("configs").join(name)
}

fn zne(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_zne")).args(args).output().unwrap()
}

fn stdout(out: &Output) -> String {
    String::from_utf8_lossy(&out.stdout).into_owned()
}

#[test]
fn run_writes_csv_and_reports_bias() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = config("richardson.json");
    let out = zne(&["run", "--config", cfg.to_str().unwrap(), "--out", dir.path().to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let text = stdout(&out);
    assert!(text.contains("settings   4"));
    assert!(text.contains("ideal"));
    let summary = std::fs::read_to_string(dir.path().join("summary.csv")).unwrap();
    assert!(summary.starts_with("method,estimate,ideal,abs_bias,variance,settings,required,standard_zne,rng"));
    assert_eq!(std::fs::read_to_string(dir.path().join("points.csv")).unwrap().lines().count(), 5);
}

#[test]
fn seed_flag_gives_reproducible_output() {
    let cfg = config("sampled.json");
    let run = |seed: &str| {
        let dir = tempfile::tempdir().unwrap();
        let out = zne(&["run", "--config", cfg.to_str().unwrap(), "--seed", seed, "--out", dir.path().to_str().unwrap()]);
        assert_eq!(out.status.code(), Some(0));
        std::fs::read(dir.path().join("points.csv")).unwrap()
    };
    assert_eq!(run("3"), run("3"));
    assert_ne!(run("3"), run("4"));
}

#[test]
fn exact_flag_drops_sampling() {
    let cfg = config("sampled.json");
    let out = zne(&["run", "--config", cfg.to_str().unwrap(), "--exact"]);
    assert_eq!(out.status.code(), Some(0));
    assert!(stdout(&out).contains("± 0.000e0"));
    let out = zne(&["run", "--config", cfg.to_str().unwrap(), "--exact", "--shots", "10"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn overhead_from_flags_and_file() {
    let out = zne(&["overhead", "--sources", "200", "--order", "3"]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    assert!(text.contains("1353400") && text.contains("1373701") && text.contains("2.5750 years"));
    let cfg = config("overhead.json");
    let out = zne(&["overhead", "--config", cfg.to_str().unwrap(), "--order", "2"]);
    assert!(stdout(&out).contains("20100"));
    assert_eq!(zne(&["overhead", "--order", "2"]).status.code(), Some(2));
}

#[test]
fn exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let write = |name: &str, text: &str| {
        let p = dir.path().join(name);
        std::fs::write(&p, text).unwrap();
        p
    };
    let base = std::fs::read_to_string(config("hypersurface.json")).unwrap();

    let unknown = write("unknown.json", &base.replace("\"horizon\"", "\"horizn\": 1, \"horizon\""));
    let out = zne(&["validate", "--config", unknown.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("horizn"));

    let short = write("short.json", &base.replace("\"count\": 20", "\"count\": 5"));
    let out = zne(&["hypersurface", "--config", short.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("requires 15"));

    let ray_only = write(
        "ray.json",
        &base.replace("\"count\": 20", "\"count\": 0").replace(
            "\"ray_factors\": [\n        1,\n        2,\n        3\n      ]",
            "\"ray_factors\": [1, 2, 3, 4, 5, 6, 7, 8, 9, 10, 11, 12, 13, 14, 15]",
        ),
    );
    let out = zne(&["hypersurface", "--config", ray_only.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(3), "{}", String::from_utf8_lossy(&out.stderr));

    let huge = write("huge.json", &base.replace("\"order\": 2", "\"order\": 3000"));
    assert_eq!(zne(&["validate", "--config", huge.to_str().unwrap()]).status.code(), Some(4));
    assert_eq!(zne(&["hypersurface", "--config", huge.to_str().unwrap()]).status.code(), Some(4));

    let out = zne(&["surface", "--config", config("richardson.json").to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    assert_eq!(zne(&["run", "--config", "/nonexistent.json"]).status.code(), Some(2));
    assert_eq!(zne(&["validate", "--config", config("surface.json").to_str().unwrap()]).status.code(), Some(0));
}
