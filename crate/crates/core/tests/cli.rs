//! Integration tests of the tdho binary: exit codes, verbs, and the
//! emitted files.

use std::path::Path;
use std::process::{Command, Output};

fn tdho(args: &[&str], dir: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_tdho"))
        .args(args)
        .current_dir(dir)
        .output()
        .expect("binary runs")
}

fn write_config(dir: &Path, name: &str, body: &str) -> String {
    let path = dir.join(name);
    std::fs::write(&path, body).unwrap();
    path.to_str().unwrap().to_string()
}

#[test]
fn list_scenarios_names_all_six() {
    let dir = tempfile::tempdir().unwrap();
    let out = tdho(&["list-scenarios"], dir.path());
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    for name in [
        "constant",
        "driven-constant",
        "chirp",
        "driven-chirp",
        "pulse",
        "ermakov-stationary",
    ] {
        assert!(text.contains(name), "missing {name} in:\n{text}");
    }
}

#[test]
fn run_builtin_scenario_exits_zero_and_writes_files() {
    let dir = tempfile::tempdir().unwrap();
    let out = tdho(&["run", "driven-constant", "--out", "results"], dir.path());
    let text = String::from_utf8_lossy(&out.stdout);
    assert_eq!(out.status.code(), Some(0), "{text}");
    assert!(text.contains("overall: pass"));
    assert!(dir.path().join("results/report.json").exists());
    assert!(dir.path().join("results/series.json").exists());

    let report: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(dir.path().join("results/report.json")).unwrap())
            .unwrap();
    assert_eq!(report["overall_pass"], serde_json::Value::Bool(true));
}

#[test]
fn run_csv_format_emits_csv() {
    let dir = tempfile::tempdir().unwrap();
    let out = tdho(
        &["run", "constant", "--out", "results", "--format", "csv"],
        dir.path(),
    );
    assert_eq!(out.status.code(), Some(0));
    let csv = std::fs::read_to_string(dir.path().join("results/series.csv")).unwrap();
    let header = csv.lines().next().unwrap();
    assert!(header.starts_with("t,"));
    assert!(header.contains("q"));
}

#[test]
fn check_does_not_write_files() {
    let dir = tempfile::tempdir().unwrap();
    let out = tdho(&["check", "constant"], dir.path());
    assert_eq!(out.status.code(), Some(0));
    assert!(!dir.path().join("out").exists());
}

#[test]
fn check_config_file() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(
        dir.path(),
        "run.json",
        r#"{"omega_sq": "1", "force": "sin(t)", "t0": 0, "t1": 10, "samples": 501}"#,
    );
    let out = tdho(&["check", &cfg], dir.path());
    let text = String::from_utf8_lossy(&out.stdout);
    assert_eq!(out.status.code(), Some(0), "{text}");
    assert!(text.contains("PASS"));
}

#[test]
fn failing_check_exits_one() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(
        dir.path(),
        "strict.json",
        r#"{"omega_sq": "1", "force": "0", "t0": 0, "t1": 20,
            "thresholds": {"linear-drift": 1e-30}}"#,
    );
    let out = tdho(&["check", &cfg], dir.path());
    assert_eq!(out.status.code(), Some(1));
    let text = String::from_utf8_lossy(&out.stdout);
    assert!(text.contains("FAIL"));
}

#[test]
fn bad_expression_exits_two() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(
        dir.path(),
        "bad.json",
        r#"{"omega_sq": "1 +", "force": "0", "t0": 0, "t1": 20}"#,
    );
    let out = tdho(&["check", &cfg], dir.path());
    assert_eq!(out.status.code(), Some(2));
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("error"));
}

#[test]
fn missing_config_exits_two() {
    let dir = tempfile::tempdir().unwrap();
    let out = tdho(&["check", "no-such-file.json"], dir.path());
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn unknown_config_key_exits_two() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(
        dir.path(),
        "typo.json",
        r#"{"omega_sq": "1", "force": "0", "t0": 0, "t1": 20, "sample": 100}"#,
    );
    let out = tdho(&["check", &cfg], dir.path());
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn runtime_failure_exits_one_with_stage() {
    // the force blows up mid-run; the run completes with failed_at set
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(
        dir.path(),
        "blowup.json",
        r#"{"omega_sq": "1", "force": "exp(t^2)", "t0": 0, "t1": 20}"#,
    );
    let out = tdho(&["check", &cfg], dir.path());
    assert_eq!(out.status.code(), Some(1));
    let text = String::from_utf8_lossy(&out.stdout);
    assert!(text.contains("FAILED AT"));
}
