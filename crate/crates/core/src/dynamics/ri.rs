//! Exact repeated-interaction (collision model) propagation.

use serde::{Deserialize, Serialize};

use super::kraus::KrausMap;
use super::propagator::{run_system, Propagation};
use super::trajectory::Trajectory;
use super::trotter::TrotterSplit;
use crate::error::{arg_err, Result};
use crate::linops::{expm_i_herm, kron, partial_trace_operator, symmetrize_in_place, DensityMatrix, FidelityTarget, Operator};
use crate::model::{equilibrium_donor_state, SystemOperators};
use crate::units::periods_to_internal;

/// Settings of a repeated-interaction run. `tau` is in periods.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RiConfig {
    pub tau: f64,
    /// Number of collisions.
    pub steps: usize,
    /// Trotter steps per collision; 0 selects the exact unitary.
    pub trotter_n: usize,
    #[serde(default)]
    pub trotter_split: TrotterSplit,
    /// Collisions between records.
    pub record_stride: usize,
}

impl RiConfig {
    /// Covers `t_max` periods and records every `record_every` periods.
    pub fn for_duration(tau: f64, t_max: f64, record_every: f64) -> Result<Self> {
        if !(tau > 0.0) {
            return arg_err(format!("tau must be positive, got {tau}"));
        }
        let steps = (t_max / tau).round() as usize;
        let stride = ((record_every / tau).round() as usize).max(1);
        let cfg = Self { tau, steps, trotter_n: 0, trotter_split: TrotterSplit::default(), record_stride: stride };
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn with_trotter(mut self, n: usize) -> Self {
        self.trotter_n = n;
        self
    }

    pub fn with_split(mut self, split: TrotterSplit) -> Self {
        self.trotter_split = split;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.tau > 0.0) || !self.tau.is_finite() {
            return arg_err(format!("tau must be positive, got {}", self.tau));
        }
        if self.steps == 0 {
            return arg_err("steps must be at least 1");
        }
        if self.record_stride == 0 {
            return arg_err("record_stride must be positive");
        }
        Ok(())
    }

    pub fn propagation(&self) -> Propagation {
        Propagation::Ri { tau: self.tau, trotter_n: self.trotter_n, split: self.trotter_split }
    }
}

/// U = exp(−iτ(H ⊗ I + H_int/√τ)) with τ converted to internal time;
/// H is the state-preparation Hamiltonian when `state_prep` is set.
pub fn build_ri_unitary(ops: &SystemOperators, tau: f64, state_prep: bool) -> Result<Operator> {
    if !(tau > 0.0) || !tau.is_finite() {
        return arg_err(format!("tau must be positive, got {tau}"));
    }
    let t = periods_to_internal(tau);
    let h = if state_prep { &ops.h0_et } else { &ops.h_et };
    let joint = &kron(h, &Operator::identity(&[2])) + &ops.h_int.scale_real(1.0 / t.sqrt());
    expm_i_herm(&joint, t)
}

/// One collision: Tr_a{U (ρ ⊗ η) U†}.
pub fn ri_step(rho: &DensityMatrix, u: &Operator, eta: &DensityMatrix) -> Result<DensityMatrix> {
    if u.dim() != rho.dim() * eta.dim() {
        return arg_err(format!(
            "unitary dimension {} does not match state {} times ancilla {}",
            u.dim(),
            rho.dim(),
            eta.dim()
        ));
    }
    let e = eta.matrix();
    let diagonal = (0..eta.dim()).all(|i| (0..eta.dim()).all(|j| i == j || e[[i, j]].norm() == 0.0));
    let out = if diagonal {
        let mut m = rho.matrix().clone();
        KrausMap::new(u, eta).apply(&mut m);
        m
    } else {
        let joint = kron(rho.operator(), eta.operator());
        let u = u.clone().with_dims(joint.dims().to_vec())?;
        let evolved = u.sandwich(&joint);
        let keep: Vec<usize> = (0..rho.dims().len()).collect();
        let mut m = partial_trace_operator(&evolved, &keep)?.into_matrix();
        symmetrize_in_place(&mut m);
        m
    };
    Ok(DensityMatrix::new_unchecked(Operator::new(out, rho.dims().to_vec())?))
}

/// Applies `cfg.steps` collisions to `rho0`, recording every
/// `cfg.record_stride`. With `state_prep` the state-preparation unitary is
/// used and the fidelity with the equilibrated donor state is recorded.
pub fn evolve_ri(
    rho0: &DensityMatrix,
    ops: &SystemOperators,
    cfg: &RiConfig,
    state_prep: bool,
) -> Result<Trajectory> {
    cfg.validate()?;
    if rho0.dim() != ops.dim() {
        return arg_err("initial state does not live on the system space");
    }
    let prop = cfg.propagation();
    let mut ev = prop.evolver(ops, state_prep, cfg.steps, cfg.record_stride)?;
    let target = if state_prep { Some(FidelityTarget::new(&equilibrium_donor_state(ops)?)?) } else { None };
    let records = cfg.steps / cfg.record_stride;
    run_system(ev.as_mut(), rho0, ops.n_sites(), records, cfg.record_stride, target.as_ref(), prop.trace_preserving())
}
