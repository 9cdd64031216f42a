//! Physical operators and states of the donor-acceptor (DA) and
//! donor-bridge-acceptor (DBA) models.
//!
//! Factor order is always (electronic, oscillator) for the system and
//! (electronic, oscillator, ancilla) for the collision unitary.

mod build;
mod oscillator;
mod params;

pub use build::{
    ancilla_sigma_minus, ancilla_sigma_plus, build, build_ancilla_state, build_da, build_dba,
    build_initial_state, donor_block, equilibrium_donor_state, donor_thermal_state, mean_position, thermal_occupation,
    SystemOperators,
};
pub use oscillator::{oscillator_ops, OscillatorOps};
pub use params::{ModelKind, ModelParams, Preset, DEFAULT_DBA_POSITIONS, DEFAULT_DBA_SITE_ENERGIES};
