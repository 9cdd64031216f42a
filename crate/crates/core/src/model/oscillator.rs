use ndarray::Array2;
use num_complex::Complex64 as C64;

use crate::error::{arg_err, Result};
use crate::linops::Operator;

/// Truncated ladder and quadrature operators of one oscillator mode.
#[derive(Clone, Debug)]
pub struct OscillatorOps {
    pub a: Operator,
    pub adag: Operator,
    /// (a + a†) / 2
    pub q: Operator,
    /// i (a† − a) / 2
    pub p: Operator,
}

impl OscillatorOps {
    pub fn number(&self) -> Operator {
        self.adag.dot(&self.a)
    }
}

/// Ladder operators on the lowest `n_levels` Fock states.
pub fn oscillator_ops(n_levels: usize) -> Result<OscillatorOps> {
    if n_levels < 2 {
        return arg_err(format!("n_levels must be at least 2, got {n_levels}"));
    }
    let mut a = Array2::<C64>::zeros((n_levels, n_levels));
    for k in 1..n_levels {
        a[[k - 1, k]] = C64::new((k as f64).sqrt(), 0.0);
    }
    let a = Operator::from_matrix(a)?;
    let adag = a.dagger();
    let q = (&a + &adag).scale_real(0.5);
    let p = (&adag - &a).scale(C64::new(0.0, 0.5));
    Ok(OscillatorOps { a, adag, q, p })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ladder_action() {
        let ops = oscillator_ops(5).unwrap();
        let a = ops.a.matrix();
        // a|1> = |0>
        assert_eq!(a[[0, 1]], C64::new(1.0, 0.0));
        // a|0> = 0
        assert!(a.column(0).iter().all(|z| *z == C64::new(0.0, 0.0)));
        assert!(oscillator_ops(1).is_err());
    }

    #[test]
    fn truncated_commutator() {
        let n = 6;
        let ops = oscillator_ops(n).unwrap();
        let comm = ops.a.commutator(&ops.adag);
        for i in 0..n {
            let expect = if i == n - 1 { 1.0 - n as f64 } else { 1.0 };
            assert!((comm.matrix()[[i, i]].re - expect).abs() < 1e-13);
        }
    }

    #[test]
    fn quadratures_reproduce_number_operator_away_from_the_corner() {
        let n = 8;
        let ops = oscillator_ops(n).unwrap();
        let lhs = &ops.q.dot(&ops.q) + &ops.p.dot(&ops.p);
        let rhs = &ops.number() + &Operator::identity(&[n]).scale_real(0.5);
        for i in 0..n - 1 {
            for j in 0..n - 1 {
                assert!((lhs.matrix()[[i, j]] - rhs.matrix()[[i, j]]).norm() < 1e-13);
            }
        }
    }
}
