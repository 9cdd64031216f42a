//! Open-system simulation of electron transfer through a reaction coordinate.
//!
//! The crate provides a dense complex linear-algebra layer ([`linops`]), the
//! donor-acceptor and donor-bridge-acceptor model construction ([`model`]),
//! the time-evolution engines ([`dynamics`]: a Lindblad reference integrator,
//! exact and Trotterized repeated-interaction propagation, and
//! repeated-interaction state preparation) and the post-processing used to
//! extract transfer rates and entanglement-based non-Markovianity
//! ([`analysis`]).
//!
//! Units: ħ = ω = 1 internally. Energies are in ħω. Every time exposed by the
//! public API is in oscillator periods (2π/ω) and every damping rate `gamma`
//! is given per period (units of ω/2π); conversions to internal time happen
//! inside the engines (see [`units`]).

// `!(x > 0.0)` is used on purpose so that NaN is rejected too.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod analysis;
pub mod dynamics;
mod error;
pub mod linops;
pub mod model;
pub mod units;

pub use error::{Error, Result};

pub use analysis::{fit_transfer_rate, rhp_measure, truncation_study, RateFit, RhpEngine, RhpResult};
pub use dynamics::{
    evolve_ri, integrate_lindblad, run_state_preparation, LindbladConfig, Propagation, RiConfig,
    Trajectory, TrotterSplit,
};
pub use linops::{DensityMatrix, EigenDecomposition, Operator};
pub use model::{ModelKind, ModelParams, Preset, SystemOperators};
