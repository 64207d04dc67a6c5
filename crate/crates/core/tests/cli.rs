use std::fs;
use std::path::Path;
use std::process::Command as Process;

use bose1d::cli::{run, Command, EOfGammaSpec, RunConfig, EXIT_CONFIG, EXIT_OK, REPORT_FILE, REPORT_SCHEMA};
use bose1d::functional::TrapExponent;
use bose1d::regimes::GasParams;
use bose1d::transverse3d::TransverseKind;
use serde_json::Value;

const BIN: &str = env!("CARGO_BIN_EXE_bose1d");

fn region_three() -> GasParams {
    GasParams::new(1e4, 1.0, 1e-3, 1e-6, TrapExponent::harmonic(), TransverseKind::Harmonic)
}

fn config(command: Command, out: &Path) -> RunConfig {
    let mut cfg = RunConfig::new(command);
    cfg.params = Some(region_three());
    cfg.out_dir = out.to_path_buf();
    cfg
}

fn read_report(dir: &Path) -> Value {
    serde_json::from_str(&fs::read_to_string(dir.join(REPORT_FILE)).unwrap()).unwrap()
}

fn assert_schema_valid(report: &Value) {
    let schema: Value = serde_json::from_str(REPORT_SCHEMA).unwrap();
    let validator = jsonschema::validator_for(&schema).unwrap();
    let errors: Vec<String> = validator.iter_errors(report).map(|e| e.to_string()).collect();
    assert!(errors.is_empty(), "{errors:#?}");
}

#[test]
fn classify_region_three() {
    let dir = tempfile::tempdir().unwrap();
    let outcome = run(&config(Command::Classify, dir.path())).unwrap();
    assert_eq!(outcome.exit_code, EXIT_OK);
    let report = read_report(dir.path());
    assert_eq!(report["regime_report"]["region"], 3);
    assert_eq!(report["regime_report"]["label"], "1d-tf");
    assert_schema_valid(&report);
}

#[test]
fn reports_are_byte_identical_across_runs() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = config(Command::Solve, dir.path());
    let mut outputs = Vec::new();
    for _ in 0..2 {
        run(&cfg).unwrap();
        outputs.push((
            fs::read(dir.path().join(REPORT_FILE)).unwrap(),
            fs::read(dir.path().join("profile.csv")).unwrap(),
        ));
    }
    assert!(outputs[0] == outputs[1]);
}

#[test]
fn solve_report_matches_schema() {
    let dir = tempfile::tempdir().unwrap();
    let outcome = run(&config(Command::Solve, dir.path())).unwrap();
    assert_eq!(outcome.exit_code, EXIT_OK, "{:?}", outcome.report.failures());
    let report = read_report(dir.path());
    assert_schema_valid(&report);
    assert!(report["energies"]["longitudinal"]["total"].as_f64().unwrap() > 0.0);
    assert!(dir.path().join("profile.csv").exists());
}

#[test]
fn e_of_gamma_is_monotone() {
    let dir = tempfile::tempdir().unwrap();
    let mut cfg = RunConfig::new(Command::EOfGamma);
    cfg.out_dir = dir.path().to_path_buf();
    cfg.e_of_gamma = Some(EOfGammaSpec {
        t_min: 1e-3,
        t_max: 1e4,
        points: 57,
    });
    let outcome = run(&cfg).unwrap();
    assert_eq!(outcome.exit_code, EXIT_OK);
    let csv = fs::read_to_string(dir.path().join("e_of_gamma.csv")).unwrap();
    let mut lines = csv.lines();
    assert_eq!(lines.next(), Some("t,e,e_prime"));
    let rows: Vec<Vec<f64>> = lines
        .map(|l| l.split(',').map(|x| x.parse().unwrap()).collect())
        .collect();
    assert_eq!(rows.len(), 57);
    for w in rows.windows(2) {
        assert!(w[1][0] > w[0][0] && w[1][1] > w[0][1]);
    }
    assert!(rows.iter().all(|r| r[2] > 0.0));
    assert_schema_valid(&read_report(dir.path()));
}

#[test]
fn config_file_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = config(Command::Sweep, &dir.path().join("out"));
    let path = dir.path().join("sweep.json");
    fs::write(&path, cfg.to_json().unwrap()).unwrap();
    assert_eq!(RunConfig::load(&path).unwrap(), cfg);
}

#[test]
fn binary_classify_with_flags() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("cfg.json");
    let cfg = config(Command::Classify, &dir.path().join("ignored"));
    fs::write(&path, cfg.to_json().unwrap()).unwrap();
    let out = dir.path().join("flag-out");
    let status = Process::new(BIN)
        .args(["classify", "--config"])
        .arg(&path)
        .arg("--out")
        .arg(&out)
        .args(["--threads", "1", "--seed", "7"])
        .output()
        .unwrap();
    assert!(status.status.success(), "{}", String::from_utf8_lossy(&status.stderr));
    let report = read_report(&out);
    assert_eq!(report["regime_report"]["region"], 3);
    assert_eq!(report["config_echo"]["seed"], 7);
    assert!(out.join("metadata.json").exists());
    assert!(!dir.path().join("ignored").exists());
}

#[test]
fn binary_rejects_bad_config() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("bad.json");
    fs::write(&path, r#"{"command": "classify", "params": {"N": -1}}"#).unwrap();
    let status = Process::new(BIN)
        .args(["classify", "--config"])
        .arg(&path)
        .status()
        .unwrap();
    assert_eq!(status.code(), Some(EXIT_CONFIG));

    fs::write(&path, r#"{"command": "oracle"}"#).unwrap();
    let status = Process::new(BIN)
        .args(["classify", "--config"])
        .arg(&path)
        .status()
        .unwrap();
    assert_eq!(status.code(), Some(EXIT_CONFIG));

    let status = Process::new(BIN)
        .arg("solve")
        .arg("--out")
        .arg(dir.path().join("o"))
        .status()
        .unwrap();
    assert_eq!(status.code(), Some(EXIT_CONFIG), "solve without params");
}
