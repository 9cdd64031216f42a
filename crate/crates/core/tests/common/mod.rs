#![allow(dead_code)]

use ndarray::Array2;
use num_complex::Complex64 as C64;
use proptest::prelude::*;
use ri_et::linops::{DensityMatrix, Operator};

/// n×n complex matrix from 2n² reals in [-1, 1].
pub fn matrix_from(n: usize, raw: &[f64]) -> Array2<C64> {
    Array2::from_shape_fn((n, n), |(i, j)| C64::new(raw[2 * (i * n + j)], raw[2 * (i * n + j) + 1]))
}

pub fn hermitian_from(n: usize, raw: &[f64]) -> Operator {
    let m = matrix_from(n, raw);
    let h = (&m + &m.t().mapv(|z| z.conj())).mapv(|z| z * 0.5);
    Operator::from_matrix(h).unwrap()
}

/// A A† / Tr, a generic full-rank state.
pub fn state_from(dims: &[usize], raw: &[f64]) -> DensityMatrix {
    let n: usize = dims.iter().product();
    let a = Operator::new(matrix_from(n, raw), dims.to_vec()).unwrap();
    let p = a.dot(&a.dagger());
    let tr = p.trace().re;
    DensityMatrix::new(p.scale_real(1.0 / tr)).unwrap()
}

pub fn reals(n: usize) -> impl Strategy<Value = Vec<f64>> {
    prop::collection::vec(-1.0..1.0f64, 2 * n * n)
}

/// exp(−iθH) by a plain Taylor series with scaling and squaring.
pub fn taylor_expm(h: &Operator, theta: f64) -> Array2<C64> {
    let n = h.dim();
    let norm = h.frobenius_norm() * theta.abs();
    let squarings = (norm.max(1.0).log2().ceil() as i32 + 4).max(0);
    let s = theta / 2f64.powi(squarings);
    let x = h.matrix().mapv(|z| z * C64::new(0.0, -s));
    let mut term = Array2::<C64>::eye(n);
    let mut sum = term.clone();
    for k in 1..40 {
        term = term.dot(&x).mapv(|z| z / k as f64);
        sum = &sum + &term;
    }
    for _ in 0..squarings {
        sum = sum.dot(&sum);
    }
    sum
}

pub fn max_diff(a: &Array2<C64>, b: &Array2<C64>) -> f64 {
    a.iter().zip(b.iter()).map(|(x, y)| (x - y).norm()).fold(0.0, f64::max)
}
