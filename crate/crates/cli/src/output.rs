//! CSV files and the run manifest.

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use ri_et::dynamics::Trajectory;
use ri_et::model::{build, ModelParams};
use ri_et::units::gamma_internal;
use serde_json::{json, Value};

use crate::config::{Method, RunConfig};
use crate::error::{CliError, CliResult};
use crate::runner::{sweep_label, Outcome, SweepPoint};

pub const TRAJECTORY_FILE: &str = "trajectory.csv";
pub const SWEEP_FILE: &str = "sweep.csv";
pub const RHP_FILE: &str = "rhp.csv";
pub const RHP_SWEEP_FILE: &str = "rhp_sweep.csv";
pub const MANIFEST_FILE: &str = "manifest.json";

fn io<T>(path: &Path, r: std::io::Result<T>) -> CliResult<T> {
    r.map_err(|source| CliError::Io { path: path.to_owned(), source })
}

fn write_file(dir: &Path, name: &str, contents: &str) -> CliResult<PathBuf> {
    io(dir, fs::create_dir_all(dir))?;
    let path = dir.join(name);
    io(&path, fs::write(&path, contents))?;
    Ok(path)
}

/// `t` followed by the trajectory columns, floats in shortest round-trip form.
pub fn trajectory_csv(traj: &Trajectory) -> String {
    let mut out = String::from("t");
    for name in traj.column_names() {
        out.push(',');
        out.push_str(name);
    }
    out.push('\n');
    for (i, t) in traj.times.iter().enumerate() {
        write!(out, "{t}").unwrap();
        for (_, col) in traj.columns() {
            write!(out, ",{}", col[i]).unwrap();
        }
        out.push('\n');
    }
    out
}

fn opt(x: Option<f64>) -> String {
    x.map(|v| v.to_string()).unwrap_or_default()
}

/// delta_e,tau,trotter_n,k,p0,r_squared,converged; failed points carry NaN
/// fit values and converged=false.
pub fn sweep_csv(points: &[SweepPoint]) -> String {
    let mut out = String::from("delta_e,tau,trotter_n,k,p0,r_squared,converged\n");
    for p in points {
        let c = &p.config;
        let tau = if matches!(c.method, Method::Lindblad) { None } else { Some(c.tau) };
        let fit = p.outcome.as_ref().ok().and_then(|o| o.fit);
        let (k, p0, r2, conv) = fit.map_or((f64::NAN, f64::NAN, f64::NAN, false), |f| (f.k, f.p0, f.r_squared, f.converged));
        writeln!(out, "{},{},{},{k},{p0},{r2},{conv}", opt(c.params.delta_e), opt(tau), c.trotter_n).unwrap();
    }
    out
}

/// delta_e,tau,measure,reported_measure,delta_entanglement for RHP sweeps.
pub fn rhp_sweep_csv(points: &[SweepPoint]) -> String {
    let mut out = String::from("delta_e,tau,measure,reported_measure,delta_entanglement\n");
    for p in points {
        let c = &p.config;
        let r = p.outcome.as_ref().ok().and_then(|o| o.rhp.as_ref());
        let (m, rep, d) = r.map_or((f64::NAN, f64::NAN, f64::NAN), |r| (r.measure, r.reported_measure(), r.delta_e_entanglement));
        writeln!(out, "{},{},{m},{rep},{d}", opt(c.params.delta_e), c.tau).unwrap();
    }
    out
}

fn physics(params: &ModelParams) -> CliResult<Value> {
    let ops = build(params)?;
    Ok(json!({
        "gamma_cfg_per_period": params.gamma_cfg,
        "gamma_internal": gamma_internal(params.gamma_cfg),
        "nbar": ops.nbar,
        "hilbert_dim": ops.dim(),
    }))
}

fn manifest(cfg: &RunConfig, command: &str, wall: f64, outputs: &[PathBuf], extra: Value) -> CliResult<Value> {
    let mut m = json!({
        "program": env!("CARGO_PKG_NAME"),
        "version": env!("CARGO_PKG_VERSION"),
        "command": command,
        "config": cfg,
        "engine": cfg.propagation(),
        "units": physics(&cfg.params)?,
        "record_every_periods": cfg.record_every(),
        "wall_time_s": wall,
        "outputs": outputs.iter().map(|p| p.file_name().unwrap().to_string_lossy().into_owned()).collect::<Vec<_>>(),
    });
    if let (Value::Object(m), Value::Object(e)) = (&mut m, extra) {
        m.extend(e);
    }
    Ok(m)
}

/// Writes the files of a single run and returns their paths.
pub fn write_run(dir: &Path, cfg: &RunConfig, out: &Outcome, wall: f64) -> CliResult<Vec<PathBuf>> {
    let mut files = Vec::new();
    if let Some(traj) = &out.trajectory {
        files.push(write_file(dir, TRAJECTORY_FILE, &trajectory_csv(traj))?);
    }
    let mut extra = json!({});
    if let Some(fit) = &out.fit {
        extra["fit"] = json!(fit);
    }
    if let Some(e) = &out.fit_error {
        extra["fit_error"] = json!(e);
    }
    if let Some(r) = &out.rhp {
        files.push(write_file(dir, RHP_FILE, &trajectory_csv(&r.concurrence_trace))?);
        extra["rhp"] = json!({
            "measure": r.measure,
            "reported_measure": r.reported_measure(),
            "delta_entanglement": r.delta_e_entanglement,
        });
    }
    let m = manifest(cfg, "run", wall, &files, extra)?;
    files.push(write_file(dir, MANIFEST_FILE, &serde_json::to_string_pretty(&m)?)?);
    Ok(files)
}

/// Writes the sweep table and manifest.
pub fn write_sweep(dir: &Path, cfg: &RunConfig, points: &[SweepPoint], wall: f64) -> CliResult<Vec<PathBuf>> {
    let (name, csv) = if cfg.method == Method::Rhp {
        (RHP_SWEEP_FILE, rhp_sweep_csv(points))
    } else {
        (SWEEP_FILE, sweep_csv(points))
    };
    let mut files = vec![write_file(dir, name, &csv)?];
    let failures: Vec<Value> = points
        .iter()
        .zip(&cfg.sweep.as_ref().expect("sweep config").values)
        .filter_map(|(p, v)| p.outcome.as_ref().err().map(|e| json!({ "value": v, "error": e })))
        .collect();
    let parameter = cfg.sweep.as_ref().map(|s| sweep_label(s.parameter));
    let m = manifest(cfg, "sweep", wall, &files, json!({ "sweep_parameter": parameter, "failures": failures }))?;
    files.push(write_file(dir, MANIFEST_FILE, &serde_json::to_string_pretty(&m)?)?);
    Ok(files)
}

/// Table 1 parameters and the DBA values, one preset per line.
pub fn presets_table() -> String {
    let mut out = String::from("preset            kind  delta_e  V    lambda  kbt  gamma   n_levels  tau\n");
    for p in ri_et::model::Preset::ALL {
        let q = p.params();
        writeln!(
            out,
            "{:<17} {:<5} {:<8} {:<4} {:<7} {:<4} {:<7.4} {:<9} {}",
            p.name(),
            format!("{:?}", q.kind).to_uppercase(),
            opt(q.delta_e),
            q.v,
            opt(q.lambda),
            q.kbt,
            q.gamma_cfg,
            q.n_levels,
            p.converged_tau()
        )
        .unwrap();
    }
    out
}
