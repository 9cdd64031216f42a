//! Run configuration files (JSON).

use std::path::{Path, PathBuf};

use ri_et::analysis::DecayModel;
use ri_et::dynamics::{LindbladMode, Propagation, TrotterSplit};
use ri_et::model::{ModelKind, ModelParams, Preset};
use serde::{Deserialize, Serialize};

use crate::error::{config_err, CliError, CliResult};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Method {
    Lindblad,
    Ri,
    RiTrotter,
    Stateprep,
    Rhp,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SweepParameter {
    DeltaE,
    Tau,
    TrotterN,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Sweep {
    pub parameter: SweepParameter,
    pub values: Vec<f64>,
}

/// Engine used by `method = "rhp"`.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RhpEngineKind {
    #[default]
    Lindblad,
    Ri,
}

/// Oscillator state paired with the Bell state in an RHP run.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RhpOscillator {
    #[default]
    UndisplacedThermal,
    Ground,
}

/// Contents of a config file. Model fields left out come from `preset`.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RawConfig {
    pub preset: Option<Preset>,
    pub kind: Option<ModelKind>,
    pub delta_e: Option<f64>,
    pub v: Option<f64>,
    pub lambda: Option<f64>,
    pub kbt: Option<f64>,
    pub gamma_cfg: Option<f64>,
    pub n_levels: Option<usize>,
    pub dba_site_energies: Option<[f64; 4]>,
    pub dba_positions: Option<[f64; 4]>,

    pub method: Option<Method>,
    pub tau: Option<f64>,
    pub t_max: Option<f64>,
    pub dt: Option<f64>,
    pub lindblad_mode: Option<LindbladMode>,
    pub trotter_n: Option<usize>,
    pub trotter_split: Option<TrotterSplit>,
    /// Elementary steps (RK4 steps or collisions) between records.
    pub record_stride: Option<usize>,
    pub fit_model: Option<DecayModel>,
    pub rhp_engine: Option<RhpEngineKind>,
    pub rhp_oscillator: Option<RhpOscillator>,
    pub sweep: Option<Sweep>,
    pub output_dir: Option<PathBuf>,
}

/// A validated configuration with presets expanded.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RunConfig {
    pub preset: Option<Preset>,
    pub params: ModelParams,
    pub method: Method,
    /// Interaction duration in periods (repeated-interaction methods).
    pub tau: f64,
    pub t_max: f64,
    /// RK4 step in periods.
    pub dt: f64,
    pub lindblad_mode: LindbladMode,
    pub trotter_n: usize,
    pub trotter_split: TrotterSplit,
    pub record_stride: usize,
    pub fit_model: DecayModel,
    pub rhp_engine: RhpEngineKind,
    pub rhp_oscillator: RhpOscillator,
    pub sweep: Option<Sweep>,
    pub output_dir: PathBuf,
}

pub const DEFAULT_T_MAX: f64 = 1000.0;
pub const DEFAULT_DT: f64 = 1e-3;
pub const DEFAULT_OUTPUT_DIR: &str = "output";

pub fn load_config(path: &Path) -> CliResult<RunConfig> {
    let text = std::fs::read_to_string(path).map_err(|source| CliError::Io { path: path.to_owned(), source })?;
    parse_config(&text, path)
}

/// Parses `text`; `path` is only used in error messages.
pub fn parse_config(text: &str, path: &Path) -> CliResult<RunConfig> {
    let raw: RawConfig = serde_json::from_str(text).map_err(|e| CliError::Parse {
        path: path.to_owned(),
        line: e.line(),
        column: e.column(),
        message: e.to_string(),
    })?;
    raw.resolve()
}

impl RawConfig {
    pub fn resolve(self) -> CliResult<RunConfig> {
        let params = self.model_params()?;
        let Some(method) = self.method else {
            return config_err("method", "missing; expected one of lindblad, ri, ri_trotter, stateprep, rhp");
        };
        let tau = self.tau.unwrap_or_else(|| self.preset.map_or(0.1, Preset::converged_tau));
        let t_max = self.t_max.unwrap_or(DEFAULT_T_MAX);
        let dt = self.dt.unwrap_or(DEFAULT_DT);
        for (field, value) in [("tau", tau), ("t_max", t_max), ("dt", dt)] {
            if !(value > 0.0) || !value.is_finite() {
                return config_err(field, format!("must be positive, got {value}"));
            }
        }
        let trotter_n = match (method, self.trotter_n) {
            (Method::RiTrotter, None) => 1,
            (Method::RiTrotter, Some(0)) => return config_err("trotter_n", "must be at least 1 for ri_trotter"),
            (Method::RiTrotter, Some(n)) => n,
            (_, Some(n)) if n > 0 => return config_err("trotter_n", "only used with method ri_trotter"),
            _ => 0,
        };
        if trotter_n > 0 && params.kind == ModelKind::Dba {
            return config_err("method", "Trotterization is available for the DA model only");
        }
        if method == Method::Rhp && params.kind == ModelKind::Dba {
            return config_err("method", "the RHP measure is available for the DA model only");
        }
        let cfg = RunConfig {
            preset: self.preset,
            method,
            tau,
            t_max,
            dt,
            lindblad_mode: self.lindblad_mode.unwrap_or_default(),
            trotter_n,
            trotter_split: self.trotter_split.unwrap_or_default(),
            record_stride: 0,
            fit_model: self.fit_model.unwrap_or_default(),
            rhp_engine: self.rhp_engine.unwrap_or_default(),
            rhp_oscillator: self.rhp_oscillator.unwrap_or_default(),
            sweep: self.sweep,
            output_dir: self.output_dir.unwrap_or_else(|| PathBuf::from(DEFAULT_OUTPUT_DIR)),
            params,
        };
        // one record per period unless set explicitly
        let step = cfg.propagation().step();
        let record_stride = self.record_stride.unwrap_or_else(|| ((1.0 / step).round() as usize).max(1));
        if record_stride == 0 {
            return config_err("record_stride", "must be positive");
        }
        if (record_stride as f64) * step > t_max {
            return config_err("record_stride", "records are further apart than t_max");
        }
        let cfg = RunConfig { record_stride, ..cfg };
        if let Some(sweep) = &cfg.sweep {
            cfg.check_sweep(sweep)?;
        }
        Ok(cfg)
    }

    fn model_params(&self) -> CliResult<ModelParams> {
        let mut p = match (self.preset, self.kind) {
            (Some(preset), kind) => {
                let p = preset.params();
                if kind.is_some_and(|k| k != p.kind) {
                    return config_err("kind", format!("conflicts with preset {preset}"));
                }
                p
            }
            (None, Some(kind)) => {
                let req = |field: &'static str, v: Option<f64>| {
                    v.ok_or(CliError::Config { field, message: "required without a preset".into() })
                };
                let levels = self
                    .n_levels
                    .ok_or(CliError::Config { field: "n_levels", message: "required without a preset".into() })?;
                match kind {
                    ModelKind::Da => ModelParams::da(
                        req("delta_e", self.delta_e)?,
                        req("v", self.v)?,
                        req("lambda", self.lambda)?,
                        req("kbt", self.kbt)?,
                        req("gamma_cfg", self.gamma_cfg)?,
                        levels,
                    )?,
                    ModelKind::Dba => {
                        ModelParams::dba(req("v", self.v)?, req("kbt", self.kbt)?, req("gamma_cfg", self.gamma_cfg)?, levels)?
                    }
                }
            }
            (None, None) => return config_err("preset", "either preset or kind is required"),
        };
        let da_only = [("delta_e", self.delta_e.is_some()), ("lambda", self.lambda.is_some())];
        let dba_only = [("dba_site_energies", self.dba_site_energies.is_some()), ("dba_positions", self.dba_positions.is_some())];
        let wrong = if p.kind == ModelKind::Da { dba_only } else { da_only };
        if let Some((field, _)) = wrong.iter().find(|(_, set)| *set) {
            return config_err(field, format!("not a parameter of the {:?} model", p.kind));
        }
        if let Some(x) = self.delta_e {
            p.delta_e = Some(x);
        }
        if let Some(x) = self.lambda {
            p.lambda = Some(x);
        }
        if let Some(x) = self.v {
            p.v = x;
        }
        if let Some(x) = self.kbt {
            p.kbt = x;
        }
        if let Some(x) = self.gamma_cfg {
            p.gamma_cfg = x;
        }
        if let Some(x) = self.n_levels {
            p.n_levels = x;
        }
        if let Some(x) = self.dba_site_energies {
            p.dba_site_energies = Some(x);
        }
        if let Some(x) = self.dba_positions {
            p.dba_positions = Some(x);
        }
        p.validate()?;
        Ok(p)
    }
}

impl RunConfig {
    /// Engine for the dynamics of this run.
    pub fn propagation(&self) -> Propagation {
        match self.method {
            Method::Lindblad => Propagation::Lindblad { dt: self.dt, mode: self.lindblad_mode },
            Method::Ri | Method::Stateprep => Propagation::ri(self.tau),
            Method::RiTrotter => Propagation::Ri { tau: self.tau, trotter_n: self.trotter_n, split: self.trotter_split },
            Method::Rhp => match self.rhp_engine {
                RhpEngineKind::Lindblad => Propagation::Lindblad { dt: self.dt, mode: self.lindblad_mode },
                RhpEngineKind::Ri => Propagation::ri(self.tau),
            },
        }
    }

    /// Record interval in periods.
    pub fn record_every(&self) -> f64 {
        self.record_stride as f64 * self.propagation().step()
    }

    fn check_sweep(&self, sweep: &Sweep) -> CliResult<()> {
        if sweep.values.is_empty() {
            return config_err("sweep.values", "must not be empty");
        }
        match sweep.parameter {
            SweepParameter::DeltaE if self.params.kind == ModelKind::Dba => {
                config_err("sweep.parameter", "delta_e is not a parameter of the DBA model")
            }
            SweepParameter::Tau if !matches!(self.propagation(), Propagation::Ri { .. }) => {
                config_err("sweep.parameter", "tau sweeps need a repeated-interaction method")
            }
            SweepParameter::TrotterN if self.method != Method::RiTrotter => {
                config_err("sweep.parameter", "trotter_n sweeps need method ri_trotter")
            }
            SweepParameter::TrotterN if sweep.values.iter().any(|v| *v < 1.0 || v.fract() != 0.0) => {
                config_err("sweep.values", "trotter_n values must be positive integers")
            }
            _ if sweep.values.iter().any(|v| !v.is_finite()) => config_err("sweep.values", "must be finite"),
            _ => Ok(()),
        }
    }

    /// The single-point config for one sweep value. Record spacing in
    /// periods is kept when tau changes.
    pub fn at_sweep_value(&self, parameter: SweepParameter, value: f64) -> CliResult<RunConfig> {
        let mut cfg = RunConfig { sweep: None, ..self.clone() };
        match parameter {
            SweepParameter::DeltaE => cfg.params = self.params.with_delta_e(value)?,
            SweepParameter::Tau => {
                if !(value > 0.0) {
                    return config_err("sweep.values", format!("tau must be positive, got {value}"));
                }
                let every = self.record_every();
                cfg.tau = value;
                cfg.record_stride = ((every / value).round() as usize).max(1);
            }
            SweepParameter::TrotterN => cfg.trotter_n = value as usize,
        }
        Ok(cfg)
    }
}
