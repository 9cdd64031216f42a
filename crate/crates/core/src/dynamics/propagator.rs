use ndarray::Array2;
use num_complex::Complex64 as C64;
use serde::{Deserialize, Serialize};

use super::kraus::KrausMap;
use super::lindblad::{choose_compiled, CompiledRk4, DirectRk4, Generator, LindbladMode};
use super::ri::build_ri_unitary;
use super::trajectory::Trajectory;
use super::trotter::{build_trotter_unitary_with, TrotterSplit};
use crate::error::{arg_err, Error, Result};
use crate::linops::{DensityMatrix, FidelityTarget, Operator};
use crate::model::SystemOperators;

/// Trace deviation from 1 that aborts a trace-preserving run.
pub const TRACE_TOLERANCE: f64 = 1e-6;

/// Advances batches of Hermitian operators under a fixed linear map.
pub(crate) trait Evolver {
    /// Applies `n` elementary steps to every state.
    fn advance(&mut self, states: &mut [Array2<C64>], n: usize);
    /// Duration of one elementary step in periods.
    fn step_periods(&self) -> f64;
}

/// Repeated-interaction stepping with a precomputed Kraus map.
pub(crate) struct RiEvolver {
    kraus: KrausMap,
    tau: f64,
}

impl RiEvolver {
    pub fn new(u: &Operator, ops: &SystemOperators, tau: f64) -> Self {
        Self { kraus: KrausMap::new(u, &ops.ancilla_state()), tau }
    }
}

impl Evolver for RiEvolver {
    fn advance(&mut self, states: &mut [Array2<C64>], n: usize) {
        for s in states.iter_mut() {
            for _ in 0..n {
                self.kraus.apply(s);
            }
        }
    }

    fn step_periods(&self) -> f64 {
        self.tau
    }
}

/// Choice of dynamics engine.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Propagation {
    /// Lindblad master equation integrated with RK4 at step `dt` (periods).
    Lindblad {
        dt: f64,
        #[serde(default)]
        mode: LindbladMode,
    },
    /// Repeated interaction with duration `tau` (periods); `trotter_n = 0`
    /// uses the exact collision unitary.
    Ri {
        tau: f64,
        trotter_n: usize,
        #[serde(default)]
        split: TrotterSplit,
    },
}

impl Propagation {
    pub fn lindblad(dt: f64) -> Self {
        Propagation::Lindblad { dt, mode: LindbladMode::Auto }
    }

    pub fn ri(tau: f64) -> Self {
        Propagation::Ri { tau, trotter_n: 0, split: TrotterSplit::default() }
    }

    /// Elementary step in periods.
    pub fn step(&self) -> f64 {
        match *self {
            Propagation::Lindblad { dt, .. } => dt,
            Propagation::Ri { tau, .. } => tau,
        }
    }

    /// Whether the run is expected to conserve the trace.
    pub fn trace_preserving(&self) -> bool {
        !matches!(self, Propagation::Ri { trotter_n, .. } if *trotter_n > 0)
    }

    pub fn validate(&self) -> Result<()> {
        let s = self.step();
        if !(s > 0.0) || !s.is_finite() {
            return arg_err(format!("step must be positive, got {s}"));
        }
        Ok(())
    }

    /// Number of elementary steps covering `duration` periods.
    pub fn steps_for(&self, duration: f64) -> usize {
        (duration / self.step()).round() as usize
    }

    pub(crate) fn evolver(
        &self,
        ops: &SystemOperators,
        state_prep: bool,
        steps: usize,
        stride: usize,
    ) -> Result<Box<dyn Evolver>> {
        self.validate()?;
        match *self {
            Propagation::Lindblad { dt, mode } => {
                let h = if state_prep { &ops.h0_et } else { &ops.h_et };
                let gen = Generator::new(ops, h);
                if choose_compiled(mode, ops.dim(), steps, stride) {
                    Ok(Box::new(CompiledRk4::new(gen, dt)))
                } else {
                    Ok(Box::new(DirectRk4::new(gen, dt)))
                }
            }
            Propagation::Ri { tau, trotter_n, split } => {
                let u = if trotter_n == 0 {
                    build_ri_unitary(ops, tau, state_prep)?
                } else {
                    if state_prep {
                        return Err(Error::UnsupportedModel(
                            "Trotterized state preparation is not available".into(),
                        ));
                    }
                    build_trotter_unitary_with(ops, tau, trotter_n, split)?
                };
                Ok(Box::new(RiEvolver::new(&u, ops, tau)))
            }
        }
    }
}

/// Column names of a system trajectory.
pub(crate) fn system_columns(n_sites: usize, fidelity: bool) -> Vec<&'static str> {
    let mut names: Vec<&'static str> = if n_sites == 4 {
        vec!["P_D", "P_B1", "P_B2", "P_A"]
    } else {
        vec!["P_D", "P_A"]
    };
    names.push("trace");
    names.push("purity");
    if fidelity {
        names.push("fidelity");
    }
    names
}

/// Site populations from the diagonal of a (site, oscillator) state.
pub(crate) fn site_populations(rho: &Array2<C64>, n_sites: usize) -> Vec<f64> {
    let n = rho.nrows() / n_sites;
    (0..n_sites).map(|s| (0..n).map(|k| rho[[s * n + k, s * n + k]].re).sum()).collect()
}

pub(crate) fn check_trace(trace: f64, step: usize) -> Result<()> {
    let deviation = (trace - 1.0).abs();
    if !(deviation <= TRACE_TOLERANCE) {
        return Err(Error::IntegrationDiverged { step, deviation });
    }
    Ok(())
}

/// Evolves one system state and records populations, trace, purity and,
/// when a target is given, fidelity.
pub(crate) fn run_system(
    evolver: &mut dyn Evolver,
    rho0: &DensityMatrix,
    n_sites: usize,
    records: usize,
    stride: usize,
    target: Option<&FidelityTarget>,
    check: bool,
) -> Result<Trajectory> {
    let names = system_columns(n_sites, target.is_some());
    let mut traj = Trajectory::new(&names, stride);
    let mut states = vec![rho0.matrix().clone()];
    let dt = evolver.step_periods();
    for r in 0..=records {
        if r > 0 {
            evolver.advance(&mut states, stride);
        }
        let step = r * stride;
        let rho = &states[0];
        let trace: f64 = rho.diag().iter().map(|z| z.re).sum();
        if check {
            check_trace(trace, step)?;
        }
        let mut row = site_populations(rho, n_sites);
        row.push(trace);
        row.push(rho.iter().map(|z| z.norm_sqr()).sum());
        if let Some(t) = target {
            let op = Operator::new(rho.clone(), rho0.dims().to_vec())?;
            row.push(t.fidelity_operator(&op)?);
        }
        traj.push(step as f64 * dt, &row);
    }
    Ok(traj)
}
