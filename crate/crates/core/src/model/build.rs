use ndarray::{s, Array2};
use num_complex::Complex64 as C64;

use super::oscillator::oscillator_ops;
use super::params::{ModelKind, ModelParams};
use crate::error::{arg_err, Error, Result};
use crate::linops::{herm_eig, kron, DensityMatrix, Operator};
use crate::units::gamma_internal;

/// Ancilla raising operator |0⟩⟨1|.
///
/// With the ancilla state diag(n̄, n̄+1)/(2n̄+1) this choice makes the
/// collision map reproduce the damped-oscillator dissipator (L at rate
/// γ(1+n̄), L† at rate γn̄).
pub fn ancilla_sigma_plus() -> Operator {
    Operator::from_real_rows(&[&[0.0, 1.0], &[0.0, 0.0]]).expect("2x2 matrix")
}

pub fn ancilla_sigma_minus() -> Operator {
    ancilla_sigma_plus().dagger()
}

/// Individual DA Hamiltonian terms on the system space, kept for Trotter
/// factorization. Each operator is paired with its scalar prefactor.
#[derive(Clone, Debug)]
pub(crate) struct DaTerms {
    pub sz: (f64, Operator),
    pub sx: (f64, Operator),
    pub number: (f64, Operator),
    pub szq: (f64, Operator),
}

/// Every operator needed to propagate one model.
///
/// System operators act on (electronic, oscillator); `h_int` acts on
/// (electronic, oscillator, ancilla).
#[derive(Clone, Debug)]
pub struct SystemOperators {
    pub kind: ModelKind,
    pub n_levels: usize,
    pub h_et: Operator,
    /// Hamiltonian used for state preparation: no coupling out of the donor.
    pub h0_et: Operator,
    pub jump: Operator,
    pub jump_dag: Operator,
    /// √(γ(2n̄+1)) (L⊗σ₊ + L†⊗σ₋)
    pub h_int: Operator,
    pub nbar: f64,
    pub kbt: f64,
    /// γ in internal units (1/ω).
    pub gamma_internal: f64,
    /// |φ⟩⟨φ| ⊗ I for every electronic site, donor first.
    pub site_projectors: Vec<Operator>,
    pub(crate) da_terms: Option<DaTerms>,
}

impl SystemOperators {
    pub fn dims(&self) -> &[usize] {
        self.h_et.dims()
    }

    pub fn dim(&self) -> usize {
        self.h_et.dim()
    }

    pub fn n_sites(&self) -> usize {
        self.kind.n_sites()
    }

    /// Rate of the L channel, γ(1+n̄).
    pub fn rate_down(&self) -> f64 {
        self.gamma_internal * (1.0 + self.nbar)
    }

    /// Rate of the L† channel, γn̄.
    pub fn rate_up(&self) -> f64 {
        self.gamma_internal * self.nbar
    }

    /// Coupling √(γ(2n̄+1)) of the interaction Hamiltonian.
    pub fn interaction_strength(&self) -> f64 {
        (self.gamma_internal * (2.0 * self.nbar + 1.0)).sqrt()
    }

    pub fn ancilla_state(&self) -> DensityMatrix {
        build_ancilla_state(self.nbar).expect("nbar of built operators is valid")
    }

    /// The same physics with a non-interacting factor of dimension `extra`
    /// appended to the system (before the collision ancilla).
    pub fn with_spectator(&self, extra: usize) -> Result<SystemOperators> {
        if extra == 0 {
            return arg_err("spectator dimension must be positive");
        }
        let id = Operator::identity(&[extra]);
        let ext = |op: &Operator| kron(op, &id);
        let jump = ext(&self.jump);
        let jump_dag = jump.dagger();
        let h_int = interaction_hamiltonian(&jump, self.interaction_strength());
        Ok(SystemOperators {
            kind: self.kind,
            n_levels: self.n_levels,
            h_et: ext(&self.h_et),
            h0_et: ext(&self.h0_et),
            jump,
            jump_dag,
            h_int,
            nbar: self.nbar,
            kbt: self.kbt,
            gamma_internal: self.gamma_internal,
            site_projectors: self.site_projectors.iter().map(ext).collect(),
            da_terms: self.da_terms.as_ref().map(|t| DaTerms {
                sz: (t.sz.0, ext(&t.sz.1)),
                sx: (t.sx.0, ext(&t.sx.1)),
                number: (t.number.0, ext(&t.number.1)),
                szq: (t.szq.0, ext(&t.szq.1)),
            }),
        })
    }
}

/// Bose-Einstein occupation 1/(e^{1/kbt} − 1) with ħω = 1.
pub fn thermal_occupation(kbt: f64) -> Result<f64> {
    if !(kbt > 0.0) || !kbt.is_finite() {
        return arg_err(format!("kbt must be positive and finite, got {kbt}"));
    }
    Ok(1.0 / (1.0 / kbt).exp_m1())
}

/// diag(n̄, n̄+1)/(2n̄+1) in the basis (|0⟩, |1⟩).
pub fn build_ancilla_state(nbar: f64) -> Result<DensityMatrix> {
    if !(nbar >= 0.0) || !nbar.is_finite() {
        return arg_err(format!("nbar must be non-negative and finite, got {nbar}"));
    }
    let z = 2.0 * nbar + 1.0;
    let op = Operator::from_real_diagonal(&[nbar / z, (nbar + 1.0) / z], &[2])?;
    Ok(DensityMatrix::new_unchecked(op))
}

fn interaction_hamiltonian(jump: &Operator, strength: f64) -> Operator {
    let a = kron(jump, &ancilla_sigma_plus());
    let b = kron(&jump.dagger(), &ancilla_sigma_minus());
    (&a + &b).scale_real(strength)
}

fn site_projector(site: usize, n_sites: usize) -> Operator {
    let mut diag = vec![0.0; n_sites];
    diag[site] = 1.0;
    Operator::from_real_diagonal(&diag, &[n_sites]).expect("valid diagonal")
}

fn assemble(
    params: &ModelParams,
    h_et: Operator,
    h0_et: Operator,
    jump: Operator,
    da_terms: Option<DaTerms>,
) -> Result<SystemOperators> {
    let nbar = thermal_occupation(params.kbt)?;
    let gamma = gamma_internal(params.gamma_cfg);
    let strength = (gamma * (2.0 * nbar + 1.0)).sqrt();
    let jump_dag = jump.dagger();
    let h_int = interaction_hamiltonian(&jump, strength);
    let n_sites = params.kind.n_sites();
    let id_osc = Operator::identity(&[params.n_levels]);
    let site_projectors = (0..n_sites).map(|s| kron(&site_projector(s, n_sites), &id_osc)).collect();
    Ok(SystemOperators {
        kind: params.kind,
        n_levels: params.n_levels,
        h_et,
        h0_et,
        jump,
        jump_dag,
        h_int,
        nbar,
        kbt: params.kbt,
        gamma_internal: gamma,
        site_projectors,
        da_terms,
    })
}

/// Donor-acceptor model.
pub fn build_da(params: &ModelParams) -> Result<SystemOperators> {
    params.validate()?;
    if params.kind != ModelKind::Da {
        return arg_err("build_da needs a DA parameter set");
    }
    let delta_e = params.delta_e()?;
    let sqrt_lambda = params.lambda.unwrap_or(0.0).sqrt();
    let osc = oscillator_ops(params.n_levels)?;
    let id_el = Operator::identity(&[2]);
    let id_osc = Operator::identity(&[params.n_levels]);
    let sz = Operator::from_real_diagonal(&[1.0, -1.0], &[2])?;
    let sx = Operator::from_real_rows(&[&[0.0, 1.0], &[1.0, 0.0]])?;

    let terms = DaTerms {
        sz: (delta_e / 2.0, kron(&sz, &id_osc)),
        sx: (params.v, kron(&sx, &id_osc)),
        number: (1.0, kron(&id_el, &osc.number())),
        szq: (sqrt_lambda, kron(&sz, &osc.q)),
    };
    let h0 = &(&terms.sz.1 * terms.sz.0) + &(&(&terms.number.1 * terms.number.0) + &(&terms.szq.1 * terms.szq.0));
    let h = &h0 + &(&terms.sx.1 * terms.sx.0);
    // L = a − δ with δ = −(√λ/2) σz
    let jump = &kron(&id_el, &osc.a) + &kron(&sz, &id_osc).scale_real(0.5 * sqrt_lambda);
    assemble(params, h, h0, jump, Some(terms))
}

/// Donor-bridge-acceptor model with sites (D, B1, B2, A).
pub fn build_dba(params: &ModelParams) -> Result<SystemOperators> {
    params.validate()?;
    if params.kind != ModelKind::Dba {
        return arg_err("build_dba needs a DBA parameter set");
    }
    let (eps, pos) = match (params.dba_site_energies, params.dba_positions) {
        (Some(e), Some(p)) => (e, p),
        _ => return arg_err("DBA model needs dba_site_energies and dba_positions"),
    };
    let n = params.n_levels;
    let osc = oscillator_ops(n)?;
    let id_osc = Operator::identity(&[n]);
    let p2 = osc.p.dot(&osc.p);

    let mut h0 = kron(&Operator::identity(&[4]), &p2);
    for site in 0..4 {
        let shifted = &osc.q - &id_osc.scale_real(pos[site]);
        let block = &shifted.dot(&shifted) + &id_osc.scale_real(eps[site]);
        h0 = &h0 + &kron(&site_projector(site, 4), &block);
    }
    let hop = |i: usize, j: usize| {
        let mut m = Array2::<C64>::zeros((4, 4));
        m[[i, j]] = C64::new(params.v, 0.0);
        m[[j, i]] = C64::new(params.v, 0.0);
        kron(&Operator::new(m, vec![4]).expect("4x4"), &id_osc)
    };
    let bridge = &hop(1, 2) + &hop(2, 3);
    let h0 = &h0 + &bridge;
    let h = &h0 + &hop(0, 1);
    let shift = Operator::from_real_diagonal(&pos, &[4])?;
    let jump = &kron(&Operator::identity(&[4]), &osc.a) - &kron(&shift, &id_osc);
    assemble(params, h, h0, jump, None)
}

/// Dispatches on the model kind.
pub fn build(params: &ModelParams) -> Result<SystemOperators> {
    match params.kind {
        ModelKind::Da => build_da(params),
        ModelKind::Dba => build_dba(params),
    }
}

/// Oscillator block ⟨D| H_ET |D⟩.
pub fn donor_block(ops: &SystemOperators) -> Operator {
    let n = ops.n_levels;
    let block = ops.h_et.matrix().slice(s![0..n, 0..n]).to_owned();
    Operator::new(block, vec![n]).expect("square block")
}

/// Thermal oscillator state of the donor block, e^{−βH_D}/Z.
pub fn donor_thermal_state(ops: &SystemOperators, kbt: f64) -> Result<DensityMatrix> {
    if !(kbt > 0.0) {
        return arg_err(format!("kbt must be positive, got {kbt}"));
    }
    let eig = herm_eig(&donor_block(ops))?;
    let e0 = eig.eigenvalues[0];
    let z: f64 = eig.eigenvalues.iter().map(|&e| (-(e - e0) / kbt).exp()).sum();
    let m = eig.map_real(|e| (-(e - e0) / kbt).exp() / z);
    let mut op = Operator::new(m, vec![ops.n_levels])?;
    op.symmetrize();
    Ok(DensityMatrix::new_unchecked(op))
}

/// |D⟩⟨D| ⊗ e^{−βH_D}/Z.
pub fn build_initial_state(ops: &SystemOperators, params: &ModelParams) -> Result<DensityMatrix> {
    if params.n_levels != ops.n_levels || params.kind != ops.kind {
        return Err(Error::Argument("parameters do not match the operators".into()));
    }
    if params.kbt != ops.kbt {
        return Err(Error::Argument("parameters do not match the operators".into()));
    }
    equilibrium_donor_state(ops)
}

/// |D⟩⟨D| ⊗ e^{−βH_D}/Z at the temperature the operators were built for.
pub fn equilibrium_donor_state(ops: &SystemOperators) -> Result<DensityMatrix> {
    let thermal = donor_thermal_state(ops, ops.kbt)?;
    let donor = site_projector(0, ops.n_sites());
    Ok(DensityMatrix::new_unchecked(kron(&donor, thermal.operator())))
}

/// Mean reaction-coordinate position ⟨I⊗q̂⟩ of a system state.
pub fn mean_position(rho: &DensityMatrix, ops: &SystemOperators) -> Result<f64> {
    let osc = oscillator_ops(ops.n_levels)?;
    let q = kron(&Operator::identity(&[ops.n_sites()]), &osc.q);
    if q.dim() != rho.dim() {
        return arg_err("state does not live on the system space");
    }
    Ok(rho.expectation(&q).re)
}
