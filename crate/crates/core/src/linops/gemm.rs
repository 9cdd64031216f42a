//! Bridge from ndarray storage to faer's matrix multiplication kernels.

use faer::{Accum, MatMut, MatRef, Par};
use ndarray::Array2;
use num_complex::Complex64 as C64;

fn view(a: &Array2<C64>) -> MatRef<'_, C64> {
    let (r, c) = a.dim();
    let slice = a.as_slice().expect("operator storage is always in standard layout");
    MatRef::from_row_major_slice(slice, r, c)
}

fn view_mut(a: &mut Array2<C64>) -> MatMut<'_, C64> {
    let (r, c) = a.dim();
    let slice = a.as_slice_mut().expect("operator storage is always in standard layout");
    MatMut::from_row_major_slice_mut(slice, r, c)
}

/// Operand transformation applied before multiplying.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub(crate) enum Op {
    None,
    Adjoint,
}

/// `dst = alpha * op(a) * op(b) (+ dst if accumulate)`.
pub(crate) fn gemm_into(
    dst: &mut Array2<C64>,
    alpha: C64,
    a: &Array2<C64>,
    op_a: Op,
    b: &Array2<C64>,
    op_b: Op,
    accumulate: bool,
) {
    let accum = if accumulate { Accum::Add } else { Accum::Replace };
    let (va, vb) = (view(a), view(b));
    let dst = view_mut(dst);
    match (op_a, op_b) {
        (Op::None, Op::None) => faer::linalg::matmul::matmul(dst, accum, va, vb, alpha, Par::Seq),
        (Op::Adjoint, Op::None) => {
            faer::linalg::matmul::matmul(dst, accum, va.adjoint(), vb, alpha, Par::Seq)
        }
        (Op::None, Op::Adjoint) => {
            faer::linalg::matmul::matmul(dst, accum, va, vb.adjoint(), alpha, Par::Seq)
        }
        (Op::Adjoint, Op::Adjoint) => faer::linalg::matmul::matmul(
            dst,
            accum,
            va.adjoint(),
            vb.adjoint(),
            alpha,
            Par::Seq,
        ),
    }
}

pub(crate) fn matmul(a: &Array2<C64>, b: &Array2<C64>) -> Array2<C64> {
    let mut out = Array2::zeros((a.nrows(), b.ncols()));
    gemm_into(&mut out, C64::new(1.0, 0.0), a, Op::None, b, Op::None, false);
    out
}

/// `a * b * a†`.
pub(crate) fn sandwich(a: &Array2<C64>, b: &Array2<C64>) -> Array2<C64> {
    let ab = matmul(a, b);
    let mut out = Array2::zeros((a.nrows(), a.nrows()));
    gemm_into(&mut out, C64::new(1.0, 0.0), &ab, Op::None, a, Op::Adjoint, false);
    out
}
