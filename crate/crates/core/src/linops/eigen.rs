//! Hermitian eigensolver: Householder reduction to a real symmetric
//! tridiagonal matrix followed by implicit QL iteration.

use ndarray::Array2;
use num_complex::Complex64 as C64;

use super::gemm;
use super::operator::Operator;
use crate::error::{arg_err, Result};

/// Eigenpairs of a Hermitian operator.
#[derive(Clone, Debug, PartialEq)]
pub struct EigenDecomposition {
    /// Ascending.
    pub eigenvalues: Vec<f64>,
    /// Unitary; column `j` belongs to `eigenvalues[j]`.
    pub eigenvectors: Array2<C64>,
}

impl EigenDecomposition {
    /// V f(Λ) V† for a real function applied to the eigenvalues.
    pub fn map_real(&self, f: impl Fn(f64) -> f64) -> Array2<C64> {
        self.map(|x| C64::new(f(x), 0.0))
    }

    /// V f(Λ) V†.
    pub fn map(&self, f: impl Fn(f64) -> C64) -> Array2<C64> {
        let v = &self.eigenvectors;
        let mut scaled = v.clone();
        for (j, &lam) in self.eigenvalues.iter().enumerate() {
            let fj = f(lam);
            scaled.column_mut(j).mapv_inplace(|z| z * fj);
        }
        let mut out = Array2::zeros(v.dim());
        gemm::gemm_into(&mut out, C64::new(1.0, 0.0), &scaled, gemm::Op::None, v, gemm::Op::Adjoint, false);
        out
    }

    pub fn reconstruct(&self) -> Array2<C64> {
        self.map_real(|x| x)
    }
}

/// Relative Hermiticity tolerance accepted by [`herm_eig`].
pub const HERMITIAN_TOLERANCE: f64 = 1e-10;

/// Eigendecomposition of a Hermitian operator.
///
/// Inputs whose largest |h - h†| entry exceeds `1e-10 · max(1, max|h|)` are
/// rejected; the Hermitian part is decomposed otherwise.
pub fn herm_eig(h: &Operator) -> Result<EigenDecomposition> {
    let err = h.hermiticity_error();
    let scale = h.max_abs().max(1.0);
    if err > HERMITIAN_TOLERANCE * scale || !err.is_finite() {
        return arg_err(format!("operator is not Hermitian (max |h - h†| = {err:.3e})"));
    }
    let mut a = h.matrix().clone();
    super::operator::symmetrize_in_place(&mut a);
    Ok(decompose(a))
}

fn decompose(a: Array2<C64>) -> EigenDecomposition {
    let n = a.nrows();
    let mut a = a.into_raw_vec_and_offset().0;
    let (d, e, q) = tridiagonalize(&mut a, n);
    let (evals, zt) = tql2(d, e, n);
    // V = Q Z, with Z stored transposed.
    let z = Array2::from_shape_fn((n, n), |(i, j)| C64::new(zt[j * n + i], 0.0));
    let q = Array2::from_shape_vec((n, n), q).expect("shape is consistent");
    let eigenvectors = gemm::matmul(&q, &z);
    EigenDecomposition { eigenvalues: evals, eigenvectors }
}

/// Reduces the row-major Hermitian matrix `a` to T = Q† A Q with T real
/// symmetric tridiagonal. Returns the diagonal, the subdiagonal (last entry
/// zero) and Q.
fn tridiagonalize(a: &mut [C64], n: usize) -> (Vec<f64>, Vec<f64>, Vec<C64>) {
    let zero = C64::new(0.0, 0.0);
    let mut q = vec![zero; n * n];
    for i in 0..n {
        q[i * n + i] = C64::new(1.0, 0.0);
    }
    let mut v = vec![zero; n];
    let mut p = vec![zero; n];
    let mut qv = vec![zero; n];

    for k in 0..n.saturating_sub(2) {
        let m = n - k - 1;
        let off = k + 1;
        let alpha = (off..n).map(|i| a[i * n + k].norm_sqr()).sum::<f64>().sqrt();
        let x0 = a[off * n + k];
        let tail = alpha * alpha - x0.norm_sqr();
        if alpha == 0.0 || tail <= f64::MIN_POSITIVE {
            // Column already reduced; any leftover phase is fixed below.
            continue;
        }
        let phase = if x0.norm() > 0.0 { x0 / x0.norm() } else { C64::new(1.0, 0.0) };
        for (t, i) in (off..n).enumerate() {
            v[t] = a[i * n + k];
        }
        v[0] += phase * alpha;
        let tau = 1.0 / (alpha * (alpha + x0.norm()));

        // p = tau B v over the trailing block B = a[off.., off..]
        for t in 0..m {
            let row = &a[(off + t) * n + off..(off + t) * n + n];
            let mut s = zero;
            for (b, vv) in row.iter().zip(&v[..m]) {
                s += b * vv;
            }
            p[t] = s * tau;
        }
        // w = p - K v with K = tau (v† p) / 2
        let vp: C64 = v[..m].iter().zip(&p[..m]).map(|(x, y)| x.conj() * y).sum();
        let kk = vp.re * tau * 0.5;
        for t in 0..m {
            p[t] -= v[t] * kk;
        }
        // B -= v w† + w v†
        for r in 0..m {
            let (vr, wr) = (v[r], p[r]);
            let row = &mut a[(off + r) * n + off..(off + r) * n + n];
            for ((b, vc), wc) in row.iter_mut().zip(&v[..m]).zip(&p[..m]) {
                *b -= vr * wc.conj() + wr * vc.conj();
            }
        }
        a[off * n + k] = -phase * alpha;
        a[k * n + off] = (-phase * alpha).conj();
        for i in (off + 1)..n {
            a[i * n + k] = zero;
            a[k * n + i] = zero;
        }
        // Q <- Q H on columns off..
        for r in 0..n {
            let row = &q[r * n + off..r * n + n];
            qv[r] = row.iter().zip(&v[..m]).map(|(x, y)| x * y).sum::<C64>() * tau;
        }
        for r in 0..n {
            let s = qv[r];
            let row = &mut q[r * n + off..r * n + n];
            for (x, vc) in row.iter_mut().zip(&v[..m]) {
                *x -= s * vc.conj();
            }
        }
    }

    // Rotate the basis so the subdiagonal becomes real and non-negative.
    let mut d = vec![0.0; n];
    let mut e = vec![0.0; n];
    let mut delta = C64::new(1.0, 0.0);
    for i in 0..n {
        d[i] = a[i * n + i].re;
        if i > 0 {
            for r in 0..n {
                q[r * n + i] *= delta;
            }
        }
        if i + 1 < n {
            let sub = a[(i + 1) * n + i];
            let mag = sub.norm();
            e[i] = mag;
            if mag > 0.0 {
                delta *= sub / mag;
            }
        }
    }
    (d, e, q)
}

/// Implicit QL on a real symmetric tridiagonal matrix with diagonal `d` and
/// subdiagonal `e` (`e[i]` couples `i` and `i + 1`). Returns ascending
/// eigenvalues and the transposed eigenvector matrix.
fn tql2(mut d: Vec<f64>, mut e: Vec<f64>, n: usize) -> (Vec<f64>, Vec<f64>) {
    let mut zt = vec![0.0; n * n];
    for i in 0..n {
        zt[i * n + i] = 1.0;
    }
    if n == 0 {
        return (d, zt);
    }
    e[n - 1] = 0.0;

    let mut f = 0.0;
    let mut tst1: f64 = 0.0;
    let eps = f64::EPSILON;
    for l in 0..n {
        tst1 = tst1.max(d[l].abs() + e[l].abs());
        let mut m = l;
        while m < n - 1 && e[m].abs() > eps * tst1 {
            m += 1;
        }
        if m > l {
            let mut iter = 0;
            loop {
                iter += 1;
                let mut g = d[l];
                let mut p = (d[l + 1] - g) / (2.0 * e[l]);
                let mut r = p.hypot(1.0);
                if p < 0.0 {
                    r = -r;
                }
                d[l] = e[l] / (p + r);
                d[l + 1] = e[l] * (p + r);
                let dl1 = d[l + 1];
                let mut h = g - d[l];
                for di in d.iter_mut().skip(l + 2) {
                    *di -= h;
                }
                f += h;

                p = d[m];
                let mut c = 1.0;
                let mut c2 = c;
                let mut c3 = c;
                let el1 = e[l + 1];
                let mut s = 0.0;
                let mut s2 = 0.0;
                for i in (l..m).rev() {
                    c3 = c2;
                    c2 = c;
                    s2 = s;
                    g = c * e[i];
                    h = c * p;
                    r = p.hypot(e[i]);
                    e[i + 1] = s * r;
                    s = e[i] / r;
                    c = p / r;
                    p = c * d[i] - s * g;
                    d[i + 1] = h + s * (c * g + s * d[i]);

                    let (lo, hi) = zt.split_at_mut((i + 1) * n);
                    let zi = &mut lo[i * n..];
                    let zi1 = &mut hi[..n];
                    for (a, b) in zi.iter_mut().zip(zi1.iter_mut()) {
                        let t = *b;
                        *b = s * *a + c * t;
                        *a = c * *a - s * t;
                    }
                }
                p = -s * s2 * c3 * el1 * e[l] / dl1;
                e[l] = s * p;
                d[l] = c * p;
                if e[l].abs() <= eps * tst1 || iter > 60 {
                    break;
                }
            }
        }
        d[l] += f;
        e[l] = 0.0;
    }

    // Selection sort keeps the pairing with the rows of zt.
    for i in 0..n.saturating_sub(1) {
        let mut k = i;
        for j in (i + 1)..n {
            if d[j] < d[k] {
                k = j;
            }
        }
        if k != i {
            d.swap(i, k);
            for c in 0..n {
                zt.swap(i * n + c, k * n + c);
            }
        }
    }
    (d, zt)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn random_hermitian(n: usize, seed: u64) -> Operator {
        // Small LCG keeps the tests free of an RNG dependency.
        let mut state = seed;
        let mut next = move || {
            state = state.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            ((state >> 11) as f64 / (1u64 << 53) as f64) - 0.5
        };
        let a = Array2::from_shape_fn((n, n), |_| C64::new(next(), next()));
        let h = &a + &a.t().mapv(|z| z.conj());
        Operator::from_matrix(h).unwrap()
    }

    fn check(h: &Operator) {
        let eig = herm_eig(h).unwrap();
        let n = h.dim();
        let recon = Operator::from_matrix(eig.reconstruct()).unwrap();
        let rel = (&recon - h).frobenius_norm() / h.frobenius_norm().max(1e-300);
        assert!(rel < 1e-10, "reconstruction error {rel}");
        let v = Operator::from_matrix(eig.eigenvectors.clone()).unwrap();
        let vv = v.dagger().dot(&v);
        assert!(vv.max_abs_diff(&Operator::identity(&[n])) < 1e-10);
        assert!(eig.eigenvalues.windows(2).all(|w| w[0] <= w[1]));
    }

    #[test]
    fn pauli_spectra() {
        let sz = Operator::from_real_diagonal(&[1.0, -1.0], &[2]).unwrap();
        assert_eq!(herm_eig(&sz).unwrap().eigenvalues, vec![-1.0, 1.0]);
        let sx = Operator::from_real_rows(&[&[0.0, 1.0], &[1.0, 0.0]]).unwrap();
        let eig = herm_eig(&sx).unwrap();
        assert!((eig.eigenvalues[0] + 1.0).abs() < 1e-14 && (eig.eigenvalues[1] - 1.0).abs() < 1e-14);
        let s = 0.5_f64.sqrt();
        let v = &eig.eigenvectors;
        // |0> - |1> for -1 and |0> + |1> for +1, up to a phase
        assert!(((v[[0, 0]] * v[[1, 0]].conj()).re + 0.5).abs() < 1e-14);
        assert!(((v[[0, 1]] * v[[1, 1]].conj()).re - 0.5).abs() < 1e-14);
        assert!((v[[0, 0]].norm() - s).abs() < 1e-14);
    }

    #[test]
    fn number_operator() {
        let diag: Vec<f64> = (0..16).rev().map(|k| k as f64).collect();
        let eig = herm_eig(&Operator::from_real_diagonal(&diag, &[16]).unwrap()).unwrap();
        for (k, &lam) in eig.eigenvalues.iter().enumerate() {
            assert!((lam - k as f64).abs() < 1e-13);
        }
    }

    #[test]
    fn random_matrices_reconstruct() {
        for (n, seed) in [(1, 1), (2, 2), (3, 3), (5, 4), (17, 5), (64, 6), (128, 7)] {
            check(&random_hermitian(n, seed));
        }
    }

    #[test]
    fn degenerate_and_zero() {
        check(&Operator::identity(&[7]));
        let z = Operator::zeros(&[4]);
        assert_eq!(herm_eig(&z).unwrap().eigenvalues, vec![0.0; 4]);
        let block = Operator::from_real_diagonal(&[2.0, 2.0, -1.0, 2.0, -1.0], &[5]).unwrap();
        check(&block);
    }

    #[test]
    fn rejects_non_hermitian() {
        let a = Operator::from_real_rows(&[&[0.0, 1.0], &[0.0, 0.0]]).unwrap();
        assert!(herm_eig(&a).is_err());
    }
}
