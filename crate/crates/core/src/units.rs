//! Conversions between the user-facing units and the internal ħ = ω = 1 units.

use std::f64::consts::TAU;

/// Time in oscillator periods (2π/ω) to internal time (1/ω).
pub fn periods_to_internal(t_periods: f64) -> f64 {
    TAU * t_periods
}

/// Internal time to oscillator periods.
pub fn internal_to_periods(t_internal: f64) -> f64 {
    t_internal / TAU
}

/// Damping rate given per period (ω/2π) to the internal rate (ω).
pub fn gamma_internal(gamma_cfg: f64) -> f64 {
    gamma_cfg / TAU
}
