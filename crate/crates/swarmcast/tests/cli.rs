use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use swarmcast::manifest::Manifest;
use swarmcast::parallel::Threaded;

const DATA: &str = concat!(env!("CARGO_MANIFEST_DIR"), "/data/sensex_monthly.csv");

fn swarmcast(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_swarmcast"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn ok(args: &[&str]) -> String {
    let out = swarmcast(args);
    assert!(
        out.status.success(),
        "swarmcast {args:?} failed: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    String::from_utf8(out.stdout).unwrap()
}

fn fails(args: &[&str]) -> String {
    let out = swarmcast(args);
    assert!(
        !out.status.success(),
        "swarmcast {args:?} unexpectedly succeeded"
    );
    assert!(out.stdout.is_empty(), "data on stdout for a failed run");
    String::from_utf8(out.stderr).unwrap()
}

fn s(path: &Path) -> &str {
    path.to_str().unwrap()
}

/// Short training run on the bundled data, for tests that only need a manifest.
fn quick_train(dir: &Path, column: &str) {
    ok(&[
        "train",
        "--data",
        DATA,
        "--column",
        column,
        "--seed",
        "7",
        "--iters",
        "40",
        "--out",
        s(dir),
    ]);
}

#[test]
fn validate_summarizes_bundled_data() {
    let text = ok(&["validate", DATA]);
    assert!(text.starts_with("43 records, Jun11 to Dec14\n"), "{text}");
    assert!(text.contains("open  min 18691.83 max 27280.44"), "{text}");
}

#[test]
fn validate_missing_file_names_path() {
    let err = fails(&["validate", "/definitely/not/here.csv"]);
    assert!(err.contains("/definitely/not/here.csv"), "{err}");
}

#[test]
fn validate_empty_and_malformed_files() {
    let dir = tempfile::tempdir().unwrap();
    let empty = dir.path().join("empty.csv");
    fs::write(&empty, "").unwrap();
    fails(&["validate", s(&empty)]);

    let header_only = dir.path().join("header.csv");
    fs::write(&header_only, "Month,Open,High,Low,Close\n").unwrap();
    fails(&["validate", s(&header_only)]);

    let bad = dir.path().join("bad.csv");
    fs::write(
        &bad,
        "Month,Open,High,Low,Close\nJan12,1,2,1,1.5\nFeb12,1,oops,1,1\n",
    )
    .unwrap();
    let err = fails(&["validate", s(&bad)]);
    assert!(err.contains("row 2"), "{err}");
}

#[test]
fn validate_reports_band_warnings_on_stderr() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("w.csv");
    fs::write(&path, "Month,Open,High,Low,Close\nJan12,25,20,10,15\n").unwrap();
    let out = swarmcast(&["validate", s(&path)]);
    assert!(out.status.success());
    let err = String::from_utf8(out.stderr).unwrap();
    assert!(
        err.contains("warning: row 1 (Jan12): open 25.00 outside [10.00, 20.00]"),
        "{err}"
    );
}

#[test]
fn train_is_deterministic() {
    let a = tempfile::tempdir().unwrap();
    let b = tempfile::tempdir().unwrap();
    quick_train(a.path(), "close");
    quick_train(b.path(), "close");
    for name in ["manifest_close.json", "history_close.csv"] {
        assert_eq!(
            fs::read(a.path().join(name)).unwrap(),
            fs::read(b.path().join(name)).unwrap(),
            "{name}"
        );
    }
    let history = fs::read_to_string(a.path().join("history_close.csv")).unwrap();
    assert!(history.starts_with("iteration,gbest_fitness\n0,"));
    assert_eq!(history.lines().count(), 1 + 41);
}

#[test]
fn train_all_columns_writes_four_manifests() {
    let dir = tempfile::tempdir().unwrap();
    let text = ok(&[
        "train",
        "--data",
        DATA,
        "--iters",
        "5",
        "--out",
        s(dir.path()),
    ]);
    assert_eq!(text.lines().count(), 4);
    for column in ["open", "high", "low", "close"] {
        assert!(dir.path().join(format!("manifest_{column}.json")).is_file());
        assert!(dir.path().join(format!("history_{column}.csv")).is_file());
    }
    ok(&["forecast", "--out", s(dir.path()), "--horizon", "2"]);
    let forecast = fs::read_to_string(dir.path().join("forecast.csv")).unwrap();
    let last = forecast.lines().last().unwrap();
    assert!(last.starts_with("2015-02,"));
    assert_eq!(
        last.split(',').filter(|f| f.is_empty()).count(),
        0,
        "{last}"
    );
}

#[test]
fn train_rejects_zero_iterations() {
    let dir = tempfile::tempdir().unwrap();
    let err = fails(&[
        "train",
        "--data",
        DATA,
        "--iters",
        "0",
        "--out",
        s(dir.path()),
    ]);
    assert!(err.contains("max_iterations"), "{err}");
    assert!(!dir.path().join("manifest_open.json").exists());
}

#[test]
fn config_file_and_flag_precedence() {
    let dir = tempfile::tempdir().unwrap();
    let config = dir.path().join("run.json");
    let out = dir.path().join("runs");
    fs::write(
        &config,
        format!(
            r#"{{"data": {{"path": "{DATA}", "columns": ["high"]}}, "pso": {{"max_iterations": 3, "swarm_size": 4}}, "seed": 11, "out": "{}"}}"#,
            s(&out)
        ),
    )
    .unwrap();
    ok(&["train", "--config", s(&config), "--particles", "6"]);
    let manifest = Manifest::load(&out.join("manifest_high.json")).unwrap();
    assert_eq!(manifest.seed, 11);
    assert_eq!(manifest.config.pso.swarm_size, 6);
    assert_eq!(manifest.config.pso.max_iterations, 3);

    fs::write(&config, r#"{"pso": {"particles": 3}}"#).unwrap();
    fails(&["train", "--config", s(&config)]);
}

#[test]
fn forecast_horizons() {
    let dir = tempfile::tempdir().unwrap();
    quick_train(dir.path(), "open");

    ok(&["forecast", "--out", s(dir.path()), "--horizon", "1"]);
    let text = fs::read_to_string(dir.path().join("forecast.csv")).unwrap();
    let rows: Vec<&str> = text.lines().filter(|l| l.ends_with(",1")).collect();
    assert_eq!(rows.len(), 1);
    assert!(rows[0].starts_with("2015-01,"));
    assert!(rows[0].ends_with(",,,,1"));
    assert_eq!(text.lines().count(), 1 + 43 + 1);

    ok(&["forecast", "--out", s(dir.path()), "--short-labels"]);
    let text = fs::read_to_string(dir.path().join("forecast.csv")).unwrap();
    let labels: Vec<&str> = text
        .lines()
        .filter(|l| l.ends_with(",1"))
        .map(|l| l.split(',').next().unwrap())
        .collect();
    assert_eq!(labels, ["Jan 15", "Feb 15", "Mar 15", "Apr 15"]);

    let err = fails(&["forecast", "--out", s(dir.path()), "--horizon", "0"]);
    assert!(err.contains("horizon"), "{err}");
}

#[test]
fn forecast_requires_manifests() {
    let dir = tempfile::tempdir().unwrap();
    fails(&["forecast", "--out", s(dir.path())]);
    quick_train(dir.path(), "open");
    let err = fails(&["forecast", "--out", s(dir.path()), "--column", "low"]);
    assert!(err.contains("manifest_low.json"), "{err}");
}

#[test]
fn forecast_rejects_corrupt_manifest() {
    let dir = tempfile::tempdir().unwrap();
    quick_train(dir.path(), "open");
    let path = dir.path().join("manifest_open.json");
    let text = fs::read_to_string(&path).unwrap();
    fs::write(&path, &text[..text.len() / 2]).unwrap();
    let err = fails(&["forecast", "--manifest", s(&path), "--out", s(dir.path())]);
    assert!(err.contains("manifest_open.json"), "{err}");
}

#[test]
fn manifest_replays_bit_exactly() {
    let dir = tempfile::tempdir().unwrap();
    quick_train(dir.path(), "low");
    let manifest = Manifest::load(&dir.path().join("manifest_low.json")).unwrap();
    let run = manifest.replay(&Threaded::new(Some(2)).unwrap()).unwrap();
    assert_eq!(run.model, manifest.model);
    assert_eq!(manifest.stop_rule, "stop once t >= max_iterations");
}

#[test]
fn bench_runs_and_writes_history() {
    let dir = tempfile::tempdir().unwrap();
    let text = ok(&[
        "bench",
        "--function",
        "sphere",
        "--dim",
        "10",
        "--particles",
        "30",
        "--iters",
        "1000",
        "--seed",
        "1",
        "--out",
        s(dir.path()),
    ]);
    let fitness: f64 = text
        .split("final gbest ")
        .nth(1)
        .and_then(|t| t.split_whitespace().next())
        .and_then(|v| v.parse().ok())
        .unwrap();
    assert!(fitness <= 1e-3, "{text}");
    let history = fs::read_to_string(dir.path().join("bench_sphere.csv")).unwrap();
    assert_eq!(history.lines().count(), 1 + 1001);

    ok(&[
        "bench",
        "--function",
        "rosenbrock",
        "--dim",
        "2",
        "--iters",
        "5",
        "--per-dimension",
    ]);
}

#[test]
fn bench_rejects_unknown_function() {
    let err = fails(&["bench", "--function", "ackley"]);
    assert!(err.contains("ackley"), "{err}");
}

#[test]
fn error_table_rows() {
    let dir = tempfile::tempdir().unwrap();
    let base = dir.path().join("open.csv");
    fs::write(&base, "Month,Open\nJan 15,20390.19\n").unwrap();
    let text = ok(&[
        "error-table",
        "--base",
        s(&base),
        "--errors",
        "0.4369,0.3480",
    ]);
    assert_eq!(
        text,
        "Month,value_with_err_1,value_with_err_2,base\nJan 15,20390.62,20390.53,20390.19\n"
    );

    let high = dir.path().join("high.csv");
    fs::write(&high, "Month,High\nJan 15,21379.63\n").unwrap();
    let out: PathBuf = dir.path().join("tables");
    ok(&[
        "error-table",
        "--base",
        s(&high),
        "--errors",
        ".4369,.3480",
        "--out",
        s(&out),
    ]);
    let table = fs::read_to_string(out.join("error_table.csv")).unwrap();
    assert!(table.ends_with("Jan 15,21380.06,21379.97,21379.63\n"));

    let text = ok(&["error-table", "--base", s(&high), "--errors", "0,0"]);
    assert!(text.ends_with("Jan 15,21379.63,21379.63,21379.63\n"));

    fs::write(&base, "Month,Open\nJan 15,x\n").unwrap();
    fails(&["error-table", "--base", s(&base), "--errors", "0.1,0.2"]);
    fails(&["error-table", "--base", s(&base), "--errors", "0.1"]);
}
