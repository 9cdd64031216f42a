use std::ops::Deref;

use num_complex::Complex64 as C64;

use super::eigen::herm_eig;
use super::operator::Operator;
use crate::error::{arg_err, Result};

/// A Hermitian, positive semidefinite, unit-trace [`Operator`].
#[derive(Clone, Debug, PartialEq)]
pub struct DensityMatrix(Operator);

impl DensityMatrix {
    /// Tolerance used by [`DensityMatrix::new`] for every invariant.
    pub const TOLERANCE: f64 = 1e-10;

    /// Validates Hermiticity, unit trace and positivity.
    pub fn new(op: Operator) -> Result<Self> {
        let herm = op.hermiticity_error();
        if herm > Self::TOLERANCE {
            return arg_err(format!("density matrix is not Hermitian (error {herm:.3e})"));
        }
        let tr = op.trace();
        if (tr - C64::new(1.0, 0.0)).norm() > Self::TOLERANCE {
            return arg_err(format!("density matrix trace is {tr}, expected 1"));
        }
        let min = herm_eig(&op.hermitian_part())?.eigenvalues[0];
        if min < -Self::TOLERANCE {
            return arg_err(format!("density matrix has negative eigenvalue {min:.3e}"));
        }
        Ok(Self(op))
    }

    /// Wraps an operator the caller already knows to be a valid state.
    pub fn new_unchecked(op: Operator) -> Self {
        Self(op)
    }

    /// |ψ⟩⟨ψ| for a normalized vector.
    pub fn pure(psi: &[C64], dims: &[usize]) -> Result<Self> {
        let norm: f64 = psi.iter().map(|z| z.norm_sqr()).sum();
        if (norm - 1.0).abs() > Self::TOLERANCE {
            return arg_err(format!("state vector has squared norm {norm}, expected 1"));
        }
        let op = Operator::outer(psi, psi)?.with_dims(dims.to_vec())?;
        Ok(Self(op))
    }

    /// The projector onto basis state `index`.
    pub fn basis(index: usize, dims: &[usize]) -> Result<Self> {
        let n: usize = dims.iter().product();
        if index >= n {
            return arg_err(format!("basis index {index} out of range for dimension {n}"));
        }
        let mut psi = vec![C64::new(0.0, 0.0); n];
        psi[index] = C64::new(1.0, 0.0);
        Self::pure(&psi, dims)
    }

    /// I/d.
    pub fn maximally_mixed(dims: &[usize]) -> Self {
        let id = Operator::identity(dims);
        let d = id.dim() as f64;
        Self(id.scale_real(1.0 / d))
    }

    pub fn operator(&self) -> &Operator {
        &self.0
    }

    pub fn into_operator(self) -> Operator {
        self.0
    }

    /// Real part of the trace.
    pub fn trace_real(&self) -> f64 {
        self.0.trace().re
    }

    /// Tr ρ², computed without forming the product.
    pub fn purity(&self) -> f64 {
        self.0.matrix().iter().map(|z| z.norm_sqr()).sum()
    }

    /// Tr(ρ A).
    pub fn expectation(&self, a: &Operator) -> C64 {
        assert_eq!(self.dim(), a.dim(), "dimension mismatch in expectation value");
        let (r, m) = (self.0.matrix(), a.matrix());
        let n = self.dim();
        let mut acc = C64::new(0.0, 0.0);
        for i in 0..n {
            for k in 0..n {
                acc += r[[i, k]] * m[[k, i]];
            }
        }
        acc
    }

    pub fn min_eigenvalue(&self) -> Result<f64> {
        Ok(herm_eig(&self.0.hermitian_part())?.eigenvalues[0])
    }
}

impl Deref for DensityMatrix {
    type Target = Operator;
    fn deref(&self) -> &Operator {
        &self.0
    }
}

impl AsRef<Operator> for DensityMatrix {
    fn as_ref(&self) -> &Operator {
        &self.0
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn validation() {
        assert!(DensityMatrix::new(Operator::identity(&[2]).scale_real(0.5)).is_ok());
        // wrong trace
        assert!(DensityMatrix::new(Operator::identity(&[2])).is_err());
        // negative eigenvalue
        let bad = Operator::from_real_diagonal(&[1.5, -0.5], &[2]).unwrap();
        assert!(DensityMatrix::new(bad).is_err());
        // non-Hermitian
        let nh = Operator::from_real_rows(&[&[0.5, 0.1], &[0.0, 0.5]]).unwrap();
        assert!(DensityMatrix::new(nh).is_err());
    }

    #[test]
    fn purity_of_pure_and_mixed() {
        let s = 0.5_f64.sqrt();
        let psi = [C64::new(s, 0.0), C64::new(0.0, s)];
        let rho = DensityMatrix::pure(&psi, &[2]).unwrap();
        assert!((rho.purity() - 1.0).abs() < 1e-14);
        assert!((DensityMatrix::maximally_mixed(&[2, 2]).purity() - 0.25).abs() < 1e-14);
    }
}
