mod common;

use approx::assert_abs_diff_eq;
use common::*;
use num_complex::Complex64 as C64;
use proptest::prelude::*;
use ri_et::linops::{
    concurrence, expm_i_herm, fidelity, herm_eig, kron, kron_all, partial_trace, partial_trace_operator, sqrt_psd,
    DensityMatrix, Operator,
};

fn c(re: f64) -> C64 {
    C64::new(re, 0.0)
}

#[test]
fn kron_matches_index_formula() {
    let a = Operator::new(matrix_from(2, &(0..8).map(|x| x as f64 * 0.1).collect::<Vec<_>>()), vec![2]).unwrap();
    let b = Operator::new(matrix_from(3, &(0..18).map(|x| 1.0 - x as f64 * 0.05).collect::<Vec<_>>()), vec![3]).unwrap();
    let k = kron(&a, &b);
    assert_eq!(k.dims(), &[2, 3]);
    for i in 0..6 {
        for j in 0..6 {
            let want = a.matrix()[[i / 3, j / 3]] * b.matrix()[[i % 3, j % 3]];
            assert!((k.matrix()[[i, j]] - want).norm() < 1e-15);
        }
    }
}

#[test]
fn kron_all_is_associative() {
    let x = Operator::from_real_rows(&[&[0.0, 1.0], &[1.0, 0.0]]).unwrap();
    let z = Operator::from_real_rows(&[&[1.0, 0.0], &[0.0, -1.0]]).unwrap();
    let id3 = Operator::identity(&[3]);
    let left = kron(&kron(&x, &z), &id3);
    let right = kron(&x, &kron(&z, &id3));
    let all = kron_all(&[&x, &z, &id3]);
    assert!(left.max_abs_diff(&all) < 1e-15);
    assert!(right.max_abs_diff(&all) < 1e-15);
    assert_eq!(all.dims(), &[2, 2, 3]);
}

#[test]
fn series_exponential_agrees_on_eight_levels() {
    let raw: Vec<f64> = (0..128).map(|k| ((k * 37 % 101) as f64 / 50.0) - 1.0).collect();
    let h = hermitian_from(8, &raw);
    for theta in [0.01, 0.7, 3.0] {
        let u = expm_i_herm(&h, theta).unwrap();
        assert!(max_diff(u.matrix(), &taylor_expm(&h, theta)) < 1e-10, "theta {theta}");
    }
}

#[test]
fn werner_state_concurrence() {
    // p|Φ+⟩⟨Φ+| + (1−p)I/4 has C = max(0, (3p − 1)/2)
    let s = 0.5f64.sqrt();
    let phi = [c(s), c(0.0), c(0.0), c(s)];
    let bell = Operator::outer(&phi, &phi).unwrap().with_dims(vec![2, 2]).unwrap();
    let mixed = Operator::identity(&[2, 2]).scale_real(0.25);
    for p in [0.0, 0.2, 1.0 / 3.0, 0.5, 0.8, 1.0] {
        let rho = DensityMatrix::new(&bell.scale_real(p) + &mixed.scale_real(1.0 - p)).unwrap();
        let want = ((3.0 * p - 1.0) / 2.0).max(0.0);
        assert_abs_diff_eq!(concurrence(&rho).unwrap(), want, epsilon = 1e-8);
    }
}

#[test]
fn product_states_have_no_concurrence() {
    let a = state_from(&[2], &[0.3, 0.1, -0.4, 0.2, 0.5, -0.6, 0.7, 0.0]);
    let b = state_from(&[2], &[-0.2, 0.5, 0.1, 0.9, -0.3, 0.3, 0.4, 0.1]);
    let rho = DensityMatrix::new(kron(&a, &b)).unwrap();
    assert!(concurrence(&rho).unwrap() < 1e-7);
}

#[test]
fn fidelity_of_commuting_states_is_the_classical_overlap() {
    let p = [0.5, 0.3, 0.2];
    let q = [0.1, 0.6, 0.3];
    let rho = DensityMatrix::new(Operator::from_real_diagonal(&p, &[3]).unwrap()).unwrap();
    let sigma = DensityMatrix::new(Operator::from_real_diagonal(&q, &[3]).unwrap()).unwrap();
    let want: f64 = p.iter().zip(q).map(|(a, b)| (a * b).sqrt()).sum();
    assert_abs_diff_eq!(fidelity(&rho, &sigma).unwrap(), want, epsilon = 1e-10);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn exponential_is_unitary_and_inverts(raw in reals(6), theta in -3.0..3.0f64) {
        let h = hermitian_from(6, &raw);
        let u = expm_i_herm(&h, theta).unwrap();
        let back = expm_i_herm(&h, -theta).unwrap();
        prop_assert!(u.dot(&u.dagger()).max_abs_diff(&Operator::identity(&[6])) < 1e-12);
        prop_assert!(u.dot(&back).max_abs_diff(&Operator::identity(&[6])) < 1e-12);
    }

    #[test]
    fn eigendecomposition_reconstructs(raw in reals(7)) {
        let h = hermitian_from(7, &raw);
        let eig = herm_eig(&h).unwrap();
        prop_assert!(max_diff(&eig.reconstruct(), h.matrix()) < 1e-12);
        prop_assert!(eig.eigenvalues.windows(2).all(|w| w[0] <= w[1]));
    }

    #[test]
    fn partial_trace_of_a_product_recovers_the_factor(ra in reals(2), rb in reals(3)) {
        let a = state_from(&[2], &ra);
        let b = state_from(&[3], &rb);
        let ab = DensityMatrix::new(kron(&a, &b)).unwrap();
        prop_assert!(partial_trace(&ab, &[0]).unwrap().max_abs_diff(&a) < 1e-13);
        prop_assert!(partial_trace(&ab, &[1]).unwrap().max_abs_diff(&b) < 1e-13);
    }

    #[test]
    fn partial_trace_preserves_trace_and_positivity(raw in reals(12)) {
        let rho = state_from(&[2, 3, 2], &raw);
        for keep in [vec![0], vec![1], vec![2], vec![0, 2], vec![1, 2]] {
            let r = partial_trace(&rho, &keep).unwrap();
            prop_assert!((r.trace_real() - 1.0).abs() < 1e-12);
            prop_assert!(r.min_eigenvalue().unwrap() > -1e-12);
        }
    }

    #[test]
    fn partial_trace_is_dual_to_kron_with_identity(raw in reals(6), rx in reals(2)) {
        // Tr[(X ⊗ I) ρ] = Tr[X Tr_B ρ]
        let rho = state_from(&[2, 3], &raw);
        let x = hermitian_from(2, &rx);
        let lhs = kron(&x, &Operator::identity(&[3])).dot(&rho).trace();
        let rhs = x.dot(&partial_trace_operator(&rho, &[0]).unwrap()).trace();
        prop_assert!((lhs - rhs).norm() < 1e-12);
    }

    #[test]
    fn square_root_squares_back(raw in reals(5)) {
        let rho = state_from(&[5], &raw);
        let s = sqrt_psd(&rho).unwrap();
        prop_assert!(s.dot(&s).max_abs_diff(&rho) < 1e-11);
    }

    #[test]
    fn fidelity_bounds(ra in reals(4), rb in reals(4)) {
        let a = state_from(&[4], &ra);
        let b = state_from(&[4], &rb);
        let f = fidelity(&a, &b).unwrap();
        prop_assert!(f > -1e-12 && f < 1.0 + 1e-9);
        prop_assert!((fidelity(&a, &a).unwrap() - 1.0).abs() < 1e-8);
        prop_assert!((f - fidelity(&b, &a).unwrap()).abs() < 1e-8);
    }

    #[test]
    fn concurrence_is_in_unit_interval_and_local_unitary_invariant(raw in reals(4), rh in reals(2)) {
        let rho = state_from(&[2, 2], &raw);
        let u = kron(&expm_i_herm(&hermitian_from(2, &rh), 0.9).unwrap(), &Operator::identity(&[2]));
        let rotated = DensityMatrix::new(u.sandwich(&rho)).unwrap();
        let c0 = concurrence(&rho).unwrap();
        prop_assert!((0.0..=1.0 + 1e-9).contains(&c0));
        prop_assert!((c0 - concurrence(&rotated).unwrap()).abs() < 1e-8);
    }
}

#[test]
fn identity_partial_trace_scales_with_the_traced_dimension() {
    let id = Operator::identity(&[2, 5]);
    let r = partial_trace_operator(&id, &[0]).unwrap();
    assert!(r.max_abs_diff(&Operator::identity(&[2]).scale_real(5.0)) < 1e-15);
}
