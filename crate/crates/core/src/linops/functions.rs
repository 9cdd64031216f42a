use num_complex::Complex64 as C64;

use super::density::DensityMatrix;
use super::eigen::herm_eig;
use super::operator::Operator;
use crate::error::{arg_err, Result};

/// Eigenvalues below this are treated as zero by the matrix square root.
pub const PSD_CLIP: f64 = 1e-10;

/// exp(-i θ h) for Hermitian `h`.
pub fn expm_i_herm(h: &Operator, theta: f64) -> Result<Operator> {
    let eig = herm_eig(h)?;
    let m = eig.map(|lam| C64::from_polar(1.0, -theta * lam));
    Operator::new(m, h.dims().to_vec())
}

/// exp(θ x) = I + θ x for `x` with x² = 0.
pub fn expm_nilpotent2(x: &Operator, theta: C64) -> Result<Operator> {
    let sq = x.dot(x).max_abs();
    if sq > 1e-12 {
        return arg_err(format!("operator is not nilpotent of order 2 (max |x²| = {sq:.3e})"));
    }
    Ok(&Operator::identity(x.dims()) + &x.scale(theta))
}

/// Principal square root of a state; eigenvalues below [`PSD_CLIP`] become 0.
pub fn sqrt_psd(rho: &DensityMatrix) -> Result<Operator> {
    sqrt_psd_operator(rho.operator())
}

pub(crate) fn sqrt_psd_operator(op: &Operator) -> Result<Operator> {
    let eig = herm_eig(op)?;
    let m = eig.map_real(|lam| if lam > PSD_CLIP { lam.sqrt() } else { 0.0 });
    Operator::new(m, op.dims().to_vec())
}

/// Tr √(√ρ σ √ρ).
pub fn fidelity(rho: &DensityMatrix, sigma: &DensityMatrix) -> Result<f64> {
    FidelityTarget::new(rho)?.fidelity(sigma)
}

/// Caches √σ of a fixed state so repeated fidelity evaluations against it
/// need one eigendecomposition each.
#[derive(Clone, Debug)]
pub struct FidelityTarget {
    sqrt: Operator,
}

impl FidelityTarget {
    pub fn new(target: &DensityMatrix) -> Result<Self> {
        Ok(Self { sqrt: sqrt_psd(target)? })
    }

    pub fn dim(&self) -> usize {
        self.sqrt.dim()
    }

    pub fn fidelity(&self, rho: &DensityMatrix) -> Result<f64> {
        self.fidelity_operator(rho.operator())
    }

    pub(crate) fn fidelity_operator(&self, rho: &Operator) -> Result<f64> {
        if rho.dim() != self.sqrt.dim() {
            return arg_err(format!(
                "fidelity between states of dimension {} and {}",
                self.sqrt.dim(),
                rho.dim()
            ));
        }
        let mut inner = self.sqrt.sandwich(rho);
        inner.symmetrize();
        let eig = herm_eig(&inner)?;
        Ok(eig.eigenvalues.iter().map(|&l| if l > 0.0 { l.sqrt() } else { 0.0 }).sum())
    }
}

/// Wootters concurrence of a two-qubit state with factor dimensions (2, 2).
pub fn concurrence(rho: &DensityMatrix) -> Result<f64> {
    concurrence_operator(rho.operator())
}

pub(crate) fn concurrence_operator(rho: &Operator) -> Result<f64> {
    if rho.dims() != [2, 2] {
        return arg_err(format!("concurrence needs factor dimensions [2, 2], got {:?}", rho.dims()));
    }
    // σy⊗σy ρ* σy⊗σy flips the sign of entries whose row and column parities differ.
    let m = rho.matrix();
    let parity = |i: usize| (i.count_ones() & 1) as i32;
    let tilde = ndarray::Array2::from_shape_fn((4, 4), |(i, j)| {
        let z = m[[3 - i, 3 - j]].conj();
        if parity(i) == parity(j) { z } else { -z }
    });
    let tilde = Operator::new(tilde, vec![2, 2])?;
    let root = sqrt_psd_operator(rho)?;
    let mut r = root.sandwich(&tilde);
    r.symmetrize();
    let eig = herm_eig(&r)?;
    let mut lam: Vec<f64> = eig.eigenvalues.iter().map(|&l| l.max(0.0).sqrt()).collect();
    lam.sort_by(|a, b| b.total_cmp(a));
    Ok((lam[0] - lam[1] - lam[2] - lam[3]).max(0.0))
}
