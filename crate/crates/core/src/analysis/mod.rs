//! Post-processing: transfer-rate fits, the RHP measure and truncation
//! studies.

mod fit;
mod rhp;
mod truncation;

pub use fit::{fit_exponential, fit_transfer_rate, fit_transfer_rate_with, DecayModel, RateFit};
pub use rhp::{
    build_rhp_system, rhp_from_trace, rhp_measure, rhp_measure_from, undisplaced_thermal_state, RhpEngine,
    RhpResult, RHP_ZERO_THRESHOLD,
};
pub use truncation::{truncation_study, TruncationRow};
