use super::ri::{evolve_ri, RiConfig};
use super::trajectory::Trajectory;
use crate::error::{arg_err, Result};
use crate::linops::{kron, DensityMatrix};
use crate::model::{ModelParams, SystemOperators};

/// Repeated-interaction state preparation from |D⟩⟨D| ⊗ |0⟩⟨0|.
///
/// The electronic coupling out of the donor is removed, so the electron stays
/// on the donor while the oscillator relaxes towards the donor-displaced
/// thermal state. The fidelity with that state is recorded.
pub fn run_state_preparation(ops: &SystemOperators, cfg: &RiConfig, params: &ModelParams) -> Result<Trajectory> {
    if params.kind != ops.kind || params.n_levels != ops.n_levels || params.kbt != ops.kbt {
        return arg_err("parameters do not match the operators");
    }
    let rho0 = ground_donor_state(ops)?;
    evolve_ri(&rho0, ops, cfg, true)
}

/// |D⟩⟨D| ⊗ |0⟩⟨0|.
pub fn ground_donor_state(ops: &SystemOperators) -> Result<DensityMatrix> {
    let donor = DensityMatrix::basis(0, &[ops.n_sites()])?;
    let ground = DensityMatrix::basis(0, &[ops.n_levels])?;
    Ok(DensityMatrix::new_unchecked(kron(donor.operator(), ground.operator())))
}
