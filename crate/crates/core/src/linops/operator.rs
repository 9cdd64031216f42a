use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use ndarray::Array2;
use num_complex::Complex64 as C64;

use super::gemm;
use crate::error::{arg_err, Result};

/// A dense complex square matrix acting on a tensor-product space.
///
/// `dims` lists the dimension of every tensor factor, slowest index first;
/// their product equals the matrix dimension.
#[derive(Clone, PartialEq)]
pub struct Operator {
    data: Array2<C64>,
    dims: Vec<usize>,
}

fn check_dims(n: usize, dims: &[usize]) -> Result<()> {
    if dims.is_empty() {
        return arg_err("factor dimension list is empty");
    }
    if dims.contains(&0) {
        return arg_err(format!("factor dimensions must be positive, got {dims:?}"));
    }
    let prod: usize = dims.iter().product();
    if prod != n {
        return arg_err(format!(
            "factor dimensions {dims:?} multiply to {prod}, matrix dimension is {n}"
        ));
    }
    Ok(())
}

impl Operator {
    pub fn new(data: Array2<C64>, dims: Vec<usize>) -> Result<Self> {
        if data.nrows() != data.ncols() {
            return arg_err(format!("operator must be square, got {:?}", data.dim()));
        }
        check_dims(data.nrows(), &dims)?;
        let data = if data.is_standard_layout() { data } else { data.as_standard_layout().into_owned() };
        Ok(Self { data, dims })
    }

    /// Single-factor operator.
    pub fn from_matrix(data: Array2<C64>) -> Result<Self> {
        let n = data.nrows();
        Self::new(data, vec![n])
    }

    /// Builds a single-factor operator from real row-major entries.
    pub fn from_real_rows(rows: &[&[f64]]) -> Result<Self> {
        let n = rows.len();
        if rows.iter().any(|r| r.len() != n) {
            return arg_err("rows do not form a square matrix");
        }
        Self::from_matrix(Array2::from_shape_fn((n, n), |(i, j)| C64::new(rows[i][j], 0.0)))
    }

    /// Panics if `dims` is empty or contains a zero.
    pub fn identity(dims: &[usize]) -> Self {
        let n: usize = dims.iter().product();
        Self::new(Array2::eye(n), dims.to_vec()).expect("identity dims must be non-empty and positive")
    }

    /// Panics if `dims` is empty or contains a zero.
    pub fn zeros(dims: &[usize]) -> Self {
        let n: usize = dims.iter().product();
        Self::new(Array2::zeros((n, n)), dims.to_vec()).expect("zero dims must be non-empty and positive")
    }

    pub fn from_real_diagonal(diag: &[f64], dims: &[usize]) -> Result<Self> {
        let n = diag.len();
        let mut m = Array2::zeros((n, n));
        for (i, &d) in diag.iter().enumerate() {
            m[[i, i]] = C64::new(d, 0.0);
        }
        Self::new(m, dims.to_vec())
    }

    /// |ψ⟩⟨φ| on a single factor.
    pub fn outer(psi: &[C64], phi: &[C64]) -> Result<Self> {
        if psi.len() != phi.len() {
            return arg_err("outer product of vectors with different lengths");
        }
        let n = psi.len();
        Self::from_matrix(Array2::from_shape_fn((n, n), |(i, j)| psi[i] * phi[j].conj()))
    }

    pub fn dim(&self) -> usize {
        self.data.nrows()
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn matrix(&self) -> &Array2<C64> {
        &self.data
    }

    pub fn into_matrix(self) -> Array2<C64> {
        self.data
    }

    /// Reinterprets the factor structure without touching the entries.
    pub fn with_dims(self, dims: Vec<usize>) -> Result<Self> {
        check_dims(self.dim(), &dims)?;
        Ok(Self { data: self.data, dims })
    }

    pub fn dagger(&self) -> Self {
        let data = self.data.t().mapv(|z| z.conj()).as_standard_layout().into_owned();
        Self { data, dims: self.dims.clone() }
    }

    /// Matrix product; the factor structure of `self` is kept.
    ///
    /// Panics when the dimensions differ.
    pub fn dot(&self, rhs: &Operator) -> Operator {
        assert_eq!(self.dim(), rhs.dim(), "dimension mismatch in operator product");
        Self { data: gemm::matmul(&self.data, &rhs.data), dims: self.dims.clone() }
    }

    /// `self * x * self†`.
    pub fn sandwich(&self, x: &Operator) -> Operator {
        assert_eq!(self.dim(), x.dim(), "dimension mismatch in operator product");
        Self { data: gemm::sandwich(&self.data, &x.data), dims: x.dims.clone() }
    }

    pub fn commutator(&self, rhs: &Operator) -> Operator {
        &self.dot(rhs) - &rhs.dot(self)
    }

    pub fn anticommutator(&self, rhs: &Operator) -> Operator {
        &self.dot(rhs) + &rhs.dot(self)
    }

    pub fn trace(&self) -> C64 {
        self.data.diag().sum()
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.data.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().fold(0.0, |m, z| m.max(z.norm()))
    }

    /// Largest elementwise modulus of `self - other`.
    pub fn max_abs_diff(&self, other: &Operator) -> f64 {
        assert_eq!(self.dim(), other.dim(), "dimension mismatch");
        self.data.iter().zip(other.data.iter()).fold(0.0, |m, (a, b)| m.max((a - b).norm()))
    }

    /// Largest elementwise modulus of `self - self†`.
    pub fn hermiticity_error(&self) -> f64 {
        let n = self.dim();
        let mut err: f64 = 0.0;
        for i in 0..n {
            for j in i..n {
                err = err.max((self.data[[i, j]] - self.data[[j, i]].conj()).norm());
            }
        }
        err
    }

    pub fn is_hermitian(&self, tol: f64) -> bool {
        self.hermiticity_error() <= tol
    }

    /// (A + A†) / 2
    pub fn hermitian_part(&self) -> Operator {
        let mut out = self.clone();
        out.symmetrize();
        out
    }

    pub(crate) fn symmetrize(&mut self) {
        symmetrize_in_place(&mut self.data);
    }

    pub fn scale(&self, factor: C64) -> Operator {
        Self { data: &self.data * factor, dims: self.dims.clone() }
    }

    pub fn scale_real(&self, factor: f64) -> Operator {
        self.scale(C64::new(factor, 0.0))
    }
}

pub(crate) fn symmetrize_in_place(m: &mut Array2<C64>) {
    let n = m.nrows();
    for i in 0..n {
        m[[i, i]].im = 0.0;
        for j in (i + 1)..n {
            let avg = (m[[i, j]] + m[[j, i]].conj()) * 0.5;
            m[[i, j]] = avg;
            m[[j, i]] = avg.conj();
        }
    }
}

impl fmt::Debug for Operator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Operator").field("dims", &self.dims).field("data", &self.data).finish()
    }
}

impl Add for &Operator {
    type Output = Operator;
    fn add(self, rhs: &Operator) -> Operator {
        assert_eq!(self.dim(), rhs.dim(), "dimension mismatch in operator sum");
        Operator { data: &self.data + &rhs.data, dims: self.dims.clone() }
    }
}

impl Sub for &Operator {
    type Output = Operator;
    fn sub(self, rhs: &Operator) -> Operator {
        assert_eq!(self.dim(), rhs.dim(), "dimension mismatch in operator difference");
        Operator { data: &self.data - &rhs.data, dims: self.dims.clone() }
    }
}

impl Neg for &Operator {
    type Output = Operator;
    fn neg(self) -> Operator {
        self.scale_real(-1.0)
    }
}

impl Mul<f64> for &Operator {
    type Output = Operator;
    fn mul(self, rhs: f64) -> Operator {
        self.scale_real(rhs)
    }
}

impl Mul<C64> for &Operator {
    type Output = Operator;
    fn mul(self, rhs: C64) -> Operator {
        self.scale(rhs)
    }
}

impl Mul<&Operator> for f64 {
    type Output = Operator;
    fn mul(self, rhs: &Operator) -> Operator {
        rhs.scale_real(self)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_inconsistent_dims() {
        let m = Array2::<C64>::eye(6);
        assert!(Operator::new(m.clone(), vec![2, 3]).is_ok());
        assert!(Operator::new(m.clone(), vec![2, 2]).is_err());
        assert!(Operator::new(m.clone(), vec![]).is_err());
        assert!(Operator::new(m, vec![6, 1]).is_ok());
        assert!(Operator::new(Array2::zeros((2, 3)), vec![2]).is_err());
        assert!(Operator::new(Array2::eye(4), vec![0, 4]).is_err());
    }

    #[test]
    fn dagger_and_hermiticity() {
        let a = Operator::from_matrix(ndarray::array![
            [C64::new(1.0, 0.0), C64::new(0.0, 2.0)],
            [C64::new(0.0, 2.0), C64::new(3.0, 0.0)]
        ])
        .unwrap();
        assert!(a.hermiticity_error() > 1.0);
        let h = a.hermitian_part();
        assert!(h.is_hermitian(0.0));
        assert_eq!(a.dagger().dagger(), a);
    }

    #[test]
    fn product_matches_naive_loop() {
        let n = 5;
        let a = Array2::from_shape_fn((n, n), |(i, j)| C64::new(i as f64 - j as f64, (i * j) as f64 * 0.1));
        let b = Array2::from_shape_fn((n, n), |(i, j)| C64::new((i + 2 * j) as f64, -(i as f64)));
        let prod = Operator::from_matrix(a.clone()).unwrap().dot(&Operator::from_matrix(b.clone()).unwrap());
        for i in 0..n {
            for j in 0..n {
                let mut s = C64::new(0.0, 0.0);
                for k in 0..n {
                    s += a[[i, k]] * b[[k, j]];
                }
                assert!((prod.matrix()[[i, j]] - s).norm() < 1e-12);
            }
        }
    }
}
