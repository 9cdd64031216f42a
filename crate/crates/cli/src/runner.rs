//! Executes single runs and sweeps.

use ri_et::analysis::{fit_transfer_rate_with, rhp_measure_from, undisplaced_thermal_state, RateFit, RhpResult};
use ri_et::dynamics::{evolve_ri, integrate_lindblad, run_state_preparation, LindbladConfig, RiConfig, Trajectory};
use ri_et::linops::DensityMatrix;
use ri_et::model::{build, build_initial_state, SystemOperators};
use rayon::prelude::*;

use crate::config::{Method, RhpOscillator, RunConfig, SweepParameter};
use crate::error::{config_err, CliError, CliResult};

/// Result of one simulation.
#[derive(Clone, Debug)]
pub struct Outcome {
    pub trajectory: Option<Trajectory>,
    /// Rate fit of the donor population (not for state preparation or RHP).
    pub fit: Option<RateFit>,
    /// Why no fit was possible (too few records, for instance).
    pub fit_error: Option<String>,
    pub rhp: Option<RhpResult>,
}

pub fn simulate(cfg: &RunConfig) -> CliResult<Outcome> {
    let ops = build(&cfg.params)?;
    let rate = |traj: Trajectory| -> CliResult<Outcome> {
        let (fit, fit_error) = match fit_transfer_rate_with(&traj, cfg.fit_model) {
            Ok(f) => (Some(f), None),
            Err(e) => (None, Some(e.to_string())),
        };
        Ok(Outcome { trajectory: Some(traj), fit, fit_error, rhp: None })
    };
    match cfg.method {
        Method::Lindblad => {
            let rho0 = build_initial_state(&ops, &cfg.params)?;
            let lc = LindbladConfig { t_max: cfg.t_max, dt: cfg.dt, record_stride: cfg.record_stride, mode: cfg.lindblad_mode };
            rate(integrate_lindblad(&rho0, &ops, &lc)?)
        }
        Method::Ri | Method::RiTrotter => {
            let rho0 = build_initial_state(&ops, &cfg.params)?;
            rate(evolve_ri(&rho0, &ops, &ri_config(cfg)?, false)?)
        }
        Method::Stateprep => {
            let traj = run_state_preparation(&ops, &ri_config(cfg)?, &cfg.params)?;
            Ok(Outcome { trajectory: Some(traj), fit: None, fit_error: None, rhp: None })
        }
        Method::Rhp => {
            let osc = rhp_oscillator(cfg, &ops)?;
            let res = rhp_measure_from(&ops, &osc, &cfg.propagation(), cfg.t_max, cfg.record_every())?;
            Ok(Outcome { trajectory: None, fit: None, fit_error: None, rhp: Some(res) })
        }
    }
}

fn ri_config(cfg: &RunConfig) -> CliResult<RiConfig> {
    let steps = (cfg.t_max / cfg.tau).round() as usize;
    if steps == 0 {
        return config_err("tau", "longer than t_max");
    }
    let rc = RiConfig {
        tau: cfg.tau,
        steps,
        trotter_n: cfg.trotter_n,
        trotter_split: cfg.trotter_split,
        record_stride: cfg.record_stride,
    };
    rc.validate()?;
    Ok(rc)
}

fn rhp_oscillator(cfg: &RunConfig, ops: &SystemOperators) -> CliResult<DensityMatrix> {
    Ok(match cfg.rhp_oscillator {
        RhpOscillator::UndisplacedThermal => undisplaced_thermal_state(ops.n_levels, cfg.params.kbt)?,
        RhpOscillator::Ground => DensityMatrix::basis(0, &[ops.n_levels])?,
    })
}

/// One sweep point; `outcome` holds the error message when the engine failed.
#[derive(Clone, Debug)]
pub struct SweepPoint {
    pub config: RunConfig,
    pub outcome: Result<Outcome, String>,
}

/// Runs every sweep value on the current rayon pool. Points come back in
/// sweep order; a failing point does not stop the others.
pub fn run_sweep(cfg: &RunConfig) -> CliResult<Vec<SweepPoint>> {
    let Some(sweep) = &cfg.sweep else {
        return config_err("sweep", "missing");
    };
    let configs: Vec<RunConfig> = sweep
        .values
        .iter()
        .map(|&v| cfg.at_sweep_value(sweep.parameter, v))
        .collect::<CliResult<_>>()?;
    Ok(configs
        .into_par_iter()
        .map(|c| {
            let outcome = simulate(&c).map_err(|e| e.to_string());
            SweepPoint { config: c, outcome }
        })
        .collect())
}

/// Builds a pool with `threads` workers (0 = rayon default).
pub fn thread_pool(threads: usize) -> CliResult<rayon::ThreadPool> {
    rayon::ThreadPoolBuilder::new().num_threads(threads).build().map_err(|e| CliError::Threads(e.to_string()))
}

pub(crate) fn sweep_label(p: SweepParameter) -> &'static str {
    match p {
        SweepParameter::DeltaE => "delta_e",
        SweepParameter::Tau => "tau",
        SweepParameter::TrotterN => "trotter_n",
    }
}
