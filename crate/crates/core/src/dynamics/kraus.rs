use ndarray::Array2;
use num_complex::Complex64 as C64;

use crate::linops::gemm::{gemm_into, Op};
use crate::linops::{symmetrize_in_place, DensityMatrix, Operator};

/// The reduced collision map ρ ↦ Tr_a{U (ρ ⊗ η) U†} as a Kraus sum.
///
/// With the ancilla as the last factor, the block U_ab = ⟨a|U|b⟩ acts on the
/// system and the map is Σ_ab η_b U_ab ρ U_ab† for diagonal η.
#[derive(Clone, Debug)]
pub(crate) struct KrausMap {
    ks: Vec<Array2<C64>>,
    tmp: Array2<C64>,
    out: Array2<C64>,
}

impl KrausMap {
    pub fn new(u: &Operator, eta: &DensityMatrix) -> Self {
        let da = eta.dim();
        let d = u.dim() / da;
        let m = u.matrix();
        let e = eta.matrix();
        let mut ks = Vec::new();
        for b in 0..da {
            let pb = e[[b, b]].re;
            if pb <= 0.0 {
                continue;
            }
            let w = pb.sqrt();
            for a in 0..da {
                let k = Array2::from_shape_fn((d, d), |(i, j)| m[[i * da + a, j * da + b]] * w);
                ks.push(k);
            }
        }
        Self { ks, tmp: Array2::zeros((d, d)), out: Array2::zeros((d, d)) }
    }

    /// Applies the map in place and re-symmetrizes.
    pub fn apply(&mut self, rho: &mut Array2<C64>) {
        let one = C64::new(1.0, 0.0);
        for (n, k) in self.ks.iter().enumerate() {
            gemm_into(&mut self.tmp, one, k, Op::None, rho, Op::None, false);
            gemm_into(&mut self.out, one, &self.tmp, Op::None, k, Op::Adjoint, n > 0);
        }
        std::mem::swap(rho, &mut self.out);
        symmetrize_in_place(rho);
    }
}
