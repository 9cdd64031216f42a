//! Exponential decay fits P(t) = P₀ e^{−kt} by Levenberg-Marquardt.
//!
//! By default the amplitude is pinned to the first sample, P₀ = P(t₀), and
//! only k is fitted. Letting P₀ float makes k follow the slow approach to
//! the long-time plateau instead of the transfer itself, which smears out
//! the resonance structure of the rate.

use serde::{Deserialize, Serialize};

use crate::dynamics::Trajectory;
use crate::error::{arg_err, Result};

/// Which parameters of P₀ e^{−kt} are free.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DecayModel {
    /// P₀ fixed to the first sample; k fitted.
    #[default]
    FixedAmplitude,
    /// P₀ and k fitted together.
    FreeAmplitude,
}

/// Result of a decay fit; `k` is per period when times are in periods.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct RateFit {
    pub k: f64,
    pub p0: f64,
    pub r_squared: f64,
    /// Euclidean norm of the residual vector.
    pub residual_norm: f64,
    pub converged: bool,
}

const MAX_ITER: usize = 200;
const REL_TOL: f64 = 1e-10;
/// Only points above this population seed the log-linear initial guess.
const INIT_FLOOR: f64 = 0.05;

/// Fits the donor population column of a trajectory with the default model.
pub fn fit_transfer_rate(traj: &Trajectory) -> Result<RateFit> {
    fit_transfer_rate_with(traj, DecayModel::default())
}

pub fn fit_transfer_rate_with(traj: &Trajectory, model: DecayModel) -> Result<RateFit> {
    let Some(pd) = traj.donor_population() else {
        return arg_err("trajectory has no donor population column");
    };
    fit_exponential(&traj.times, pd, model)
}

/// Least-squares fit of y = P₀ e^{−kt}.
///
/// Data that do not decay (non-positive log-linear slope with R² < 0.1)
/// give `converged = false` rather than an error.
pub fn fit_exponential(t: &[f64], y: &[f64], model: DecayModel) -> Result<RateFit> {
    let free = model == DecayModel::FreeAmplitude;
    if t.len() != y.len() {
        return arg_err("time and value series differ in length");
    }
    if t.len() < 10 {
        return arg_err(format!("need at least 10 points to fit a rate, got {}", t.len()));
    }
    if t.iter().chain(y).any(|x| !x.is_finite()) {
        return arg_err("series contains non-finite values");
    }

    let (k0, r2_log) = log_linear_slope(t, y);
    let p0_init = y[0];
    if k0 <= 0.0 && r2_log < 0.1 {
        let (res, r2) = residuals(t, y, p0_init, k0.max(0.0));
        return Ok(RateFit { k: k0.max(0.0), p0: p0_init, r_squared: r2, residual_norm: res, converged: false });
    }

    let mut p = [p0_init, k0];
    let mut cost = cost_of(t, y, p);
    let mut mu = 1e-3;
    let mut converged = false;
    for _ in 0..MAX_ITER {
        // J^T J and J^T r for the two parameters
        let (mut a00, mut a01, mut a11, mut g0, mut g1) = (0.0, 0.0, 0.0, 0.0, 0.0);
        for (&ti, &yi) in t.iter().zip(y) {
            let e = (-p[1] * ti).exp();
            let r = yi - p[0] * e;
            let j0 = e;
            let j1 = -ti * p[0] * e;
            a00 += j0 * j0;
            a01 += j0 * j1;
            a11 += j1 * j1;
            g0 += j0 * r;
            g1 += j1 * r;
        }
        let mut accepted = false;
        let mut small = false;
        while mu < 1e20 {
            let (b00, b11) = (a00 * (1.0 + mu), a11 * (1.0 + mu));
            let (d0, d1) = if free {
                let det = b00 * b11 - a01 * a01;
                if det == 0.0 || !det.is_finite() {
                    mu *= 10.0;
                    continue;
                }
                ((b11 * g0 - a01 * g1) / det, (b00 * g1 - a01 * g0) / det)
            } else {
                if b11 == 0.0 || !b11.is_finite() {
                    mu *= 10.0;
                    continue;
                }
                (0.0, g1 / b11)
            };
            small = rel(d0, p[0]) < REL_TOL && rel(d1, p[1]) < REL_TOL;
            let trial = [p[0] + d0, p[1] + d1];
            let c = cost_of(t, y, trial);
            if c <= cost {
                p = trial;
                cost = c;
                mu = (mu / 10.0).max(1e-12);
                accepted = true;
                break;
            }
            if small {
                break;
            }
            mu *= 10.0;
        }
        if small {
            converged = true;
            break;
        }
        if !accepted {
            break;
        }
    }

    let (res, r2) = residuals(t, y, p[0], p[1]);
    let converged = converged && p[1].is_finite() && r2 >= 0.0;
    Ok(RateFit { k: p[1], p0: p[0], r_squared: r2, residual_norm: res, converged })
}

fn rel(delta: f64, value: f64) -> f64 {
    delta.abs() / value.abs().max(1e-300)
}

fn cost_of(t: &[f64], y: &[f64], p: [f64; 2]) -> f64 {
    let c: f64 = t.iter().zip(y).map(|(&ti, &yi)| (yi - p[0] * (-p[1] * ti).exp()).powi(2)).sum();
    if c.is_finite() { c } else { f64::INFINITY }
}

/// Residual norm and coefficient of determination of a parameter pair.
fn residuals(t: &[f64], y: &[f64], p0: f64, k: f64) -> (f64, f64) {
    let ss_res = cost_of(t, y, [p0, k]);
    let mean = y.iter().sum::<f64>() / y.len() as f64;
    let ss_tot: f64 = y.iter().map(|v| (v - mean).powi(2)).sum();
    let r2 = if ss_tot > 0.0 { 1.0 - ss_res / ss_tot } else { 0.0 };
    (ss_res.sqrt(), r2)
}

/// Slope −k of ln y against t over points with y > 0.05, and the R² of that
/// regression.
fn log_linear_slope(t: &[f64], y: &[f64]) -> (f64, f64) {
    let pts: Vec<(f64, f64)> = t.iter().zip(y).filter(|(_, &v)| v > INIT_FLOOR).map(|(&a, &b)| (a, b.ln())).collect();
    if pts.len() < 2 {
        // Everything has already decayed; start from the first two samples.
        let k = if y[0] > 0.0 && y[1] > 0.0 { (y[0] / y[1]).ln() / (t[1] - t[0]) } else { 1.0 / t[t.len() - 1] };
        return (k, 1.0);
    }
    let n = pts.len() as f64;
    let mt = pts.iter().map(|p| p.0).sum::<f64>() / n;
    let ml = pts.iter().map(|p| p.1).sum::<f64>() / n;
    let stt: f64 = pts.iter().map(|p| (p.0 - mt).powi(2)).sum();
    let stl: f64 = pts.iter().map(|p| (p.0 - mt) * (p.1 - ml)).sum();
    let sll: f64 = pts.iter().map(|p| (p.1 - ml).powi(2)).sum();
    if stt == 0.0 {
        return (0.0, 0.0);
    }
    let slope = stl / stt;
    let r2 = if sll > 0.0 { stl * stl / (stt * sll) } else { 0.0 };
    (-slope, r2)
}

#[cfg(test)]
mod tests {
    use super::*;

    const MODELS: [DecayModel; 2] = [DecayModel::FixedAmplitude, DecayModel::FreeAmplitude];

    fn grid(n: usize, t_max: f64) -> Vec<f64> {
        (0..n).map(|i| t_max * i as f64 / (n - 1) as f64).collect()
    }

    #[test]
    fn exact_recovery() {
        let t = grid(1000, 1000.0);
        let y: Vec<f64> = t.iter().map(|&x| (-0.01 * x).exp()).collect();
        for model in MODELS {
            let f = fit_exponential(&t, &y, model).unwrap();
            assert!(f.converged);
            assert!((f.k - 0.01).abs() < 1e-8, "{f:?}");
            assert!((f.p0 - 1.0).abs() < 1e-8);
        }
    }

    #[test]
    fn robust_to_oscillation() {
        let t = grid(1000, 1000.0);
        let k = 0.004;
        let y: Vec<f64> = t.iter().map(|&x| (-k * x).exp() * (1.0 + 0.05 * (10.0 * x).sin())).collect();
        for model in MODELS {
            let f = fit_exponential(&t, &y, model).unwrap();
            assert!(f.converged);
            assert!((f.k - k).abs() / k < 0.02, "{f:?}");
        }
    }

    #[test]
    fn scale_equivariance() {
        let t = grid(500, 300.0);
        let y: Vec<f64> = t.iter().map(|&x| 0.9 * (-0.013 * x).exp() + 0.01 * (0.7 * x).cos()).collect();
        let y2: Vec<f64> = y.iter().map(|v| v * 3.7).collect();
        for model in MODELS {
            let a = fit_exponential(&t, &y, model).unwrap();
            let b = fit_exponential(&t, &y2, model).unwrap();
            assert!((a.k - b.k).abs() < 1e-10, "{} vs {}", a.k, b.k);
        }
    }

    #[test]
    fn fixed_amplitude_follows_the_initial_decay() {
        // fast transfer to a plateau: only the pinned fit sees the fast rate
        let t = grid(1001, 1000.0);
        let y: Vec<f64> = t.iter().map(|&x| 0.9 * (-0.05 * x).exp() + 0.1).collect();
        let pinned = fit_exponential(&t, &y, DecayModel::FixedAmplitude).unwrap();
        let free = fit_exponential(&t, &y, DecayModel::FreeAmplitude).unwrap();
        assert_eq!(pinned.p0, 1.0);
        assert!(pinned.k > 5.0 * free.k);
    }

    #[test]
    fn flat_population_is_not_converged() {
        let t = grid(100, 100.0);
        let y = vec![1.0; 100];
        for model in MODELS {
            let f = fit_exponential(&t, &y, model).unwrap();
            assert!(!f.converged);
            assert!(f.k.is_finite());
        }
    }

    #[test]
    fn oscillating_data_is_not_an_error() {
        let t = grid(50, 50.0);
        let y: Vec<f64> = t.iter().map(|&x| 0.5 + 0.1 * (3.0 * x).sin()).collect();
        for model in MODELS {
            assert!(fit_exponential(&t, &y, model).unwrap().k.is_finite());
        }
    }

    #[test]
    fn input_checks() {
        let m = DecayModel::default();
        assert!(fit_exponential(&[0.0, 1.0], &[1.0, 0.5], m).is_err());
        let t = grid(20, 1.0);
        let mut y = vec![1.0; 20];
        y[3] = f64::NAN;
        assert!(fit_exponential(&t, &y, m).is_err());
        assert!(fit_exponential(&t, &y[..19], m).is_err());
    }
}
