//! Batch driver: JSON run configurations, single runs, parameter sweeps and
//! CSV output.

// `!(x > 0.0)` is used on purpose so that NaN is rejected too.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod config;
mod error;
pub mod output;
pub mod runner;

use std::path::{Path, PathBuf};
use std::time::Instant;

pub use config::{load_config, parse_config, Method, RunConfig, Sweep, SweepParameter};
pub use error::{CliError, CliResult};

/// Runs a single config and writes its files into `dir`.
pub fn execute_run(cfg: &RunConfig, dir: &Path) -> CliResult<Vec<PathBuf>> {
    if cfg.sweep.is_some() {
        return Err(CliError::Config { field: "sweep", message: "use the sweep subcommand for sweeps".into() });
    }
    let start = Instant::now();
    let out = runner::simulate(cfg)?;
    output::write_run(dir, cfg, &out, start.elapsed().as_secs_f64())
}

/// Runs the sweep of `cfg` on `threads` workers (0 = all cores). The table
/// is written even when points fail; the error then reports how many.
pub fn execute_sweep(cfg: &RunConfig, dir: &Path, threads: usize) -> CliResult<Vec<PathBuf>> {
    let start = Instant::now();
    let pool = runner::thread_pool(threads)?;
    let points = pool.install(|| runner::run_sweep(cfg))?;
    let files = output::write_sweep(dir, cfg, &points, start.elapsed().as_secs_f64())?;
    let failed = points.iter().filter(|p| p.outcome.is_err()).count();
    if failed > 0 {
        return Err(CliError::SweepFailed { failed, total: points.len() });
    }
    Ok(files)
}
