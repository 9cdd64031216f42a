use std::fs;
use std::path::Path;
use std::process::Command;

use ri_et_cli::{execute_run, execute_sweep, parse_config, CliError};
use serde_json::Value;

const SMALL: &str = r#""preset": "weakly_coupled", "n_levels": 6, "t_max": 20"#;

fn config(body: &str) -> ri_et_cli::RunConfig {
    parse_config(&format!("{{{SMALL}, {body}}}"), Path::new("inline.json")).unwrap()
}

fn header(path: &Path) -> String {
    fs::read_to_string(path).unwrap().lines().next().unwrap().to_owned()
}

#[test]
fn ri_run_writes_trajectory_and_manifest() {
    let dir = tempfile::tempdir().unwrap();
    let files = execute_run(&config(r#""method": "ri", "tau": 0.1"#), dir.path()).unwrap();
    assert_eq!(files.len(), 2);
    let csv = fs::read_to_string(dir.path().join("trajectory.csv")).unwrap();
    assert_eq!(csv.lines().next().unwrap(), "t,P_D,P_A,trace,purity");
    assert_eq!(csv.lines().count(), 22);
    let m: Value = serde_json::from_str(&fs::read_to_string(dir.path().join("manifest.json")).unwrap()).unwrap();
    let g = m["units"]["gamma_internal"].as_f64().unwrap();
    assert!((g - 0.01 / std::f64::consts::TAU).abs() < 1e-15);
    assert!(m["fit"]["k"].as_f64().unwrap().is_finite());
    assert!(m["wall_time_s"].as_f64().unwrap() >= 0.0);
}

#[test]
fn identical_configs_reproduce_bytes() {
    let cfg = config(r#""method": "lindblad", "dt": 0.002"#);
    let (a, b) = (tempfile::tempdir().unwrap(), tempfile::tempdir().unwrap());
    execute_run(&cfg, a.path()).unwrap();
    execute_run(&cfg, b.path()).unwrap();
    let read = |d: &Path| fs::read(d.join("trajectory.csv")).unwrap();
    assert_eq!(read(a.path()), read(b.path()));
}

#[test]
fn column_layout_follows_the_method_and_model() {
    let dir = tempfile::tempdir().unwrap();
    execute_run(&config(r#""method": "stateprep""#), dir.path()).unwrap();
    assert_eq!(header(&dir.path().join("trajectory.csv")), "t,P_D,P_A,trace,purity,fidelity");

    let dba = parse_config(r#"{"preset": "dba", "n_levels": 4, "t_max": 5, "method": "ri"}"#, Path::new("x")).unwrap();
    execute_run(&dba, dir.path()).unwrap();
    assert_eq!(header(&dir.path().join("trajectory.csv")), "t,P_D,P_B1,P_B2,P_A,trace,purity");

    execute_run(&config(r#""method": "rhp", "record_stride": 500"#), dir.path()).unwrap();
    assert_eq!(header(&dir.path().join("rhp.csv")), "t,concurrence");
    let m: Value = serde_json::from_str(&fs::read_to_string(dir.path().join("manifest.json")).unwrap()).unwrap();
    assert!(m["rhp"]["measure"].as_f64().unwrap() >= 0.0);
}

#[test]
fn sweep_rows_come_back_in_order() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = config(r#""method": "ri", "sweep": {"parameter": "delta_e", "values": [3.0, 1.0, 2.0, 2.5]}"#);
    execute_sweep(&cfg, dir.path(), 2).unwrap();
    let csv = fs::read_to_string(dir.path().join("sweep.csv")).unwrap();
    let mut lines = csv.lines();
    assert_eq!(lines.next().unwrap(), "delta_e,tau,trotter_n,k,p0,r_squared,converged");
    let first: Vec<&str> = lines.map(|l| l.split(',').next().unwrap()).collect();
    assert_eq!(first, ["3", "1", "2", "2.5"]);
}

#[test]
fn failed_points_keep_their_rows() {
    let dir = tempfile::tempdir().unwrap();
    // tau = 50 is longer than the run
    let cfg = config(r#""method": "ri", "sweep": {"parameter": "tau", "values": [0.1, 50]}"#);
    let err = execute_sweep(&cfg, dir.path(), 1).unwrap_err();
    assert!(matches!(err, CliError::SweepFailed { failed: 1, total: 2 }));
    let csv = fs::read_to_string(dir.path().join("sweep.csv")).unwrap();
    let rows: Vec<&str> = csv.lines().skip(1).collect();
    assert_eq!(rows.len(), 2);
    assert!(rows[0].ends_with(",true") || rows[0].ends_with(",false"));
    assert!(rows[1].ends_with("NaN,NaN,NaN,false"));
}

#[test]
fn binary_lists_presets_and_runs_a_config() {
    let bin = env!("CARGO_BIN_EXE_ri-et");
    let out = Command::new(bin).arg("presets").output().unwrap();
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    for name in ["weakly_coupled", "strongly_damped", "strongly_coupled", "high_temperature", "dba"] {
        assert!(text.contains(name));
    }

    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("run.json");
    fs::write(&cfg, format!("{{{SMALL}, \"method\": \"lindblad\", \"dt\": 0.01}}")).unwrap();
    let out_dir = dir.path().join("out");
    let status = Command::new(bin)
        .args(["run", cfg.to_str().unwrap(), "--output-dir", out_dir.to_str().unwrap()])
        .status()
        .unwrap();
    assert!(status.success());
    assert!(out_dir.join("trajectory.csv").exists());

    let status = Command::new(bin).args(["sweep", cfg.to_str().unwrap()]).env("RI_ET_THREADS", "1").status().unwrap();
    assert!(!status.success(), "a config without a sweep block is rejected");
}
