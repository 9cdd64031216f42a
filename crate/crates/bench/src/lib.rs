//! Shared fixtures for the benchmarks.

use ri_et::linops::DensityMatrix;
use ri_et::model::{build, build_initial_state, Preset, SystemOperators};

/// Operators and initial state of a preset at its peak ΔE.
pub fn fixture(preset: Preset) -> (SystemOperators, DensityMatrix) {
    let p = preset.params();
    let ops = build(&p).expect("preset builds");
    let rho = build_initial_state(&ops, &p).expect("initial state");
    (ops, rho)
}
