//! Second-order Trotter factorization of the collision unitary (DA model).

use num_complex::Complex64 as C64;
use serde::{Deserialize, Serialize};

use crate::error::{arg_err, Error, Result};
use crate::linops::{expm_i_herm, expm_nilpotent2, kron, Operator};
use crate::model::{ancilla_sigma_minus, ancilla_sigma_plus, oscillator_ops, ModelKind, SystemOperators};
use crate::units::periods_to_internal;

/// How the interaction Hamiltonian is split into two Trotter terms.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TrotterSplit {
    /// c·L⊗σ₊ and c·L†⊗σ₋, each exponentiated exactly as I + θX. The
    /// factors are not unitary, so the map loses trace.
    #[default]
    Nilpotent,
    /// c·(a⊗σ₊ + a†⊗σ₋) and −c·δ⊗σx: the oscillator and shift parts of
    /// L = a − δ, each Hermitian, so every factor is unitary.
    Hermitian,
}

enum Term {
    Hermitian(Operator),
    Nilpotent(Operator),
}

/// The six terms with their scalar prefactors, sorted by descending
/// |prefactor|; ties keep the order
/// (ΔE/2)σz, Vσx, a†a, √λσz q, then the two interaction terms.
fn terms(ops: &SystemOperators, tau_internal: f64, split: TrotterSplit) -> Result<Vec<(f64, Term)>> {
    let t = match (&ops.da_terms, ops.kind) {
        (Some(t), ModelKind::Da) => t,
        _ => return Err(Error::UnsupportedModel("Trotter factorization is implemented for the DA model only".into())),
    };
    let id_a = Operator::identity(&[2]);
    let c = (ops.gamma_internal * (2.0 * ops.nbar + 1.0) / tau_internal).sqrt();
    let mut out = vec![
        (t.sz.0, Term::Hermitian(kron(&t.sz.1, &id_a))),
        (t.sx.0, Term::Hermitian(kron(&t.sx.1, &id_a))),
        (t.number.0, Term::Hermitian(kron(&t.number.1, &id_a))),
        (t.szq.0, Term::Hermitian(kron(&t.szq.1, &id_a))),
    ];
    let (sp, sm) = (ancilla_sigma_plus(), ancilla_sigma_minus());
    match split {
        TrotterSplit::Nilpotent => {
            out.push((c, Term::Nilpotent(kron(&ops.jump, &sp))));
            out.push((c, Term::Nilpotent(kron(&ops.jump_dag, &sm))));
        }
        TrotterSplit::Hermitian => {
            // a on the system, with any spectator factors carried along
            let osc = oscillator_ops(ops.n_levels)?;
            let before = Operator::identity(&[ops.n_sites()]);
            let mut a = kron(&before, &osc.a);
            let rest: usize = ops.dims()[2..].iter().product();
            if rest > 1 {
                a = kron(&a, &Operator::identity(&ops.dims()[2..]));
            }
            let shift = &ops.jump - &a;
            let ladder = &kron(&a, &sp) + &kron(&a.dagger(), &sm);
            let displaced = &kron(&shift, &sp) + &kron(&shift.dagger(), &sm);
            out.push((c, Term::Hermitian(ladder)));
            out.push((c, Term::Hermitian(displaced)));
        }
    }
    out.sort_by(|a, b| b.0.abs().total_cmp(&a.0.abs()));
    Ok(out)
}

/// (F₁⋯F₆ F₆⋯F₁)ⁿ with Fₖ = exp(−i τ/(2n) c_k H_k), using the default
/// [`TrotterSplit`].
pub fn build_trotter_unitary(ops: &SystemOperators, tau: f64, n: usize) -> Result<Operator> {
    build_trotter_unitary_with(ops, tau, n, TrotterSplit::default())
}

pub fn build_trotter_unitary_with(ops: &SystemOperators, tau: f64, n: usize, split: TrotterSplit) -> Result<Operator> {
    if n == 0 {
        return arg_err("Trotter step count must be at least 1");
    }
    if !(tau > 0.0) || !tau.is_finite() {
        return arg_err(format!("tau must be positive, got {tau}"));
    }
    let t = periods_to_internal(tau);
    let half = t / (2.0 * n as f64);
    let mut factors = Vec::new();
    for (coeff, term) in terms(ops, t, split)? {
        let f = match term {
            Term::Hermitian(h) => expm_i_herm(&h, half * coeff)?,
            Term::Nilpotent(x) => expm_nilpotent2(&x, C64::new(0.0, -half * coeff))?,
        };
        factors.push(f);
    }
    let forward = factors.iter().skip(1).fold(factors[0].clone(), |acc, f| acc.dot(f));
    let backward = factors.iter().rev().skip(1).fold(factors[5].clone(), |acc, f| acc.dot(f));
    let step = forward.dot(&backward);
    Ok(power(&step, n))
}

fn power(a: &Operator, mut e: usize) -> Operator {
    let mut result: Option<Operator> = None;
    let mut base = a.clone();
    while e > 0 {
        if e & 1 == 1 {
            result = Some(match result {
                None => base.clone(),
                Some(r) => r.dot(&base),
            });
        }
        e >>= 1;
        if e > 0 {
            base = base.dot(&base);
        }
    }
    result.unwrap_or_else(|| Operator::identity(a.dims()))
}
