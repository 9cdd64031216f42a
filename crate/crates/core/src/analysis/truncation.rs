use serde::{Deserialize, Serialize};

use super::fit::fit_transfer_rate;
use crate::dynamics::{integrate_lindblad, LindbladConfig};
use crate::error::{arg_err, Result};
use crate::model::{build, build_initial_state, mean_position, ModelParams};

/// One row of a truncation study.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct TruncationRow {
    pub n_levels: usize,
    /// Fitted Lindblad transfer rate (per period).
    pub k: f64,
    /// ⟨q̂⟩ of the initial state.
    pub mean_position: f64,
    pub converged: bool,
}

/// Lindblad rate and initial mean position for each oscillator truncation.
pub fn truncation_study(
    params: &ModelParams,
    levels: &[usize],
    delta_e: Option<f64>,
    cfg: &LindbladConfig,
) -> Result<Vec<TruncationRow>> {
    if let Some(&bad) = levels.iter().find(|&&n| n < 2) {
        return arg_err(format!("truncation levels must be at least 2, got {bad}"));
    }
    let base = match delta_e {
        Some(de) => params.with_delta_e(de)?,
        None => params.clone(),
    };
    levels
        .iter()
        .map(|&n| {
            let p = base.with_n_levels(n)?;
            let ops = build(&p)?;
            let rho0 = build_initial_state(&ops, &p)?;
            let traj = integrate_lindblad(&rho0, &ops, cfg)?;
            let fit = fit_transfer_rate(&traj)?;
            Ok(TruncationRow { n_levels: n, k: fit.k, mean_position: mean_position(&rho0, &ops)?, converged: fit.converged })
        })
        .collect()
}
