use ndarray::Array2;
use num_complex::Complex64 as C64;

use super::density::DensityMatrix;
use super::operator::Operator;
use crate::error::{arg_err, Result};

/// Kronecker product with `a` as the slow index.
pub fn kron(a: &Operator, b: &Operator) -> Operator {
    let (na, nb) = (a.dim(), b.dim());
    let (ma, mb) = (a.matrix(), b.matrix());
    let mut out = Array2::<C64>::zeros((na * nb, na * nb));
    for ia in 0..na {
        for ja in 0..na {
            let x = ma[[ia, ja]];
            if x == C64::new(0.0, 0.0) {
                continue;
            }
            for ib in 0..nb {
                for jb in 0..nb {
                    out[[ia * nb + ib, ja * nb + jb]] = x * mb[[ib, jb]];
                }
            }
        }
    }
    let dims = a.dims().iter().chain(b.dims()).copied().collect();
    Operator::new(out, dims).expect("kron of valid operators is valid")
}

/// Kronecker product of a list, left to right.
pub fn kron_all(ops: &[&Operator]) -> Operator {
    let (first, rest) = ops.split_first().expect("kron_all needs at least one operator");
    rest.iter().fold((*first).clone(), |acc, op| kron(&acc, op))
}

/// Offsets of every multi-index over `factors` into the full row-major index.
fn offsets(dims: &[usize], strides: &[usize], factors: &[usize]) -> Vec<usize> {
    let mut out = vec![0usize];
    for &f in factors {
        let mut next = Vec::with_capacity(out.len() * dims[f]);
        for &base in &out {
            for k in 0..dims[f] {
                next.push(base + k * strides[f]);
            }
        }
        out = next;
    }
    out
}

/// Traces out every factor not in `keep`; works for any operator, not only states.
///
/// `keep` is treated as a set: duplicates are rejected and the kept factors
/// appear in their original order.
pub fn partial_trace_operator(op: &Operator, keep: &[usize]) -> Result<Operator> {
    let dims = op.dims();
    if keep.is_empty() {
        return arg_err("partial trace needs at least one kept factor");
    }
    let mut kept = keep.to_vec();
    kept.sort_unstable();
    if kept.windows(2).any(|w| w[0] == w[1]) {
        return arg_err(format!("duplicate factor index in {keep:?}"));
    }
    if let Some(&bad) = kept.iter().find(|&&k| k >= dims.len()) {
        return arg_err(format!("factor index {bad} out of range for {} factors", dims.len()));
    }
    let traced: Vec<usize> = (0..dims.len()).filter(|i| !kept.contains(i)).collect();

    let mut strides = vec![1usize; dims.len()];
    for i in (0..dims.len().saturating_sub(1)).rev() {
        strides[i] = strides[i + 1] * dims[i + 1];
    }
    let keep_off = offsets(dims, &strides, &kept);
    let trace_off = offsets(dims, &strides, &traced);

    let m = op.matrix();
    let nk = keep_off.len();
    let out = Array2::from_shape_fn((nk, nk), |(i, j)| {
        let (ri, cj) = (keep_off[i], keep_off[j]);
        trace_off.iter().map(|&t| m[[ri + t, cj + t]]).sum()
    });
    Operator::new(out, kept.iter().map(|&k| dims[k]).collect())
}

/// Reduced state on the factors listed in `keep`.
pub fn partial_trace(rho: &DensityMatrix, keep: &[usize]) -> Result<DensityMatrix> {
    Ok(DensityMatrix::new_unchecked(partial_trace_operator(rho.operator(), keep)?))
}
