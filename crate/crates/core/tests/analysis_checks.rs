use ri_et::analysis::{
    build_rhp_system, fit_transfer_rate, rhp_from_trace, rhp_measure, truncation_study, RHP_ZERO_THRESHOLD,
};
use ri_et::dynamics::{build_ri_unitary, integrate_lindblad, ri_step, LindbladConfig, Propagation};
use ri_et::linops::{concurrence, herm_eig, partial_trace, DensityMatrix};
use ri_et::model::{build, build_initial_state, ModelParams, Preset, DEFAULT_DBA_POSITIONS};
use ri_et::Error;

#[test]
fn rhp_of_monotone_and_revived_traces() {
    assert_eq!(rhp_from_trace(&[1.0, 0.8, 0.5, 0.1]), 0.0);
    // one revival of 0.3 on the way down
    let m = rhp_from_trace(&[1.0, 0.4, 0.7, 0.2]);
    assert!((m - 0.6).abs() < 1e-15);
    assert_eq!(rhp_from_trace(&[0.5]), 0.0);
}

#[test]
fn block_propagation_matches_the_extended_system() {
    let p = Preset::WeaklyCoupled.params().with_n_levels(6).unwrap();
    let ops = build(&p).unwrap();
    let tau = 0.1;
    let res = rhp_measure(&ops, &p, &Propagation::ri(tau), 3.0, 0.5).unwrap();

    let (ext, mut rho) = build_rhp_system(&ops, &p).unwrap();
    let u = build_ri_unitary(&ext, tau, false).unwrap();
    let eta = ext.ancilla_state();
    let c = res.concurrence_trace.column("concurrence").unwrap();
    for (k, want) in c.iter().enumerate() {
        if k > 0 {
            for _ in 0..5 {
                rho = ri_step(&rho, &u, &eta).unwrap();
            }
        }
        let reduced = partial_trace(&rho, &[0, 2]).unwrap();
        assert!((concurrence(&reduced).unwrap() - want).abs() < 1e-9, "record {k}");
    }
    assert!((c[0] - 1.0).abs() < 1e-10, "starts maximally entangled");
}

#[test]
fn rhp_is_limited_to_the_da_model() {
    let p = Preset::Dba.params().with_n_levels(4).unwrap();
    let ops = build(&p).unwrap();
    assert!(matches!(rhp_measure(&ops, &p, &Propagation::ri(0.1), 1.0, 0.1), Err(Error::UnsupportedModel(_))));
}

#[test]
fn rhp_measure_is_nonnegative_and_thresholded() {
    let p = Preset::StronglyDamped.params().with_n_levels(8).unwrap();
    let ops = build(&p).unwrap();
    let res = rhp_measure(&ops, &p, &Propagation::lindblad(1e-3), 5.0, 0.05).unwrap();
    assert!(res.measure >= -1e-9);
    let r = res.reported_measure();
    assert!(r == 0.0 || r >= RHP_ZERO_THRESHOLD);
}

#[test]
fn dba_spectrum_is_invariant_under_a_uniform_shift() {
    // A displacement gauge: exact without truncation. 24 levels keep the
    // low-lying states of the outer wells well inside the basis.
    let base = Preset::Dba.params().with_n_levels(24).unwrap();
    let low = |shift: f64| {
        let mut p = base.clone();
        p.dba_positions = Some(DEFAULT_DBA_POSITIONS.map(|q| q + shift));
        let ops = build(&p).unwrap();
        herm_eig(&ops.h_et).unwrap().eigenvalues[..5].to_vec()
    };
    let reference = low(0.0);
    for shift in [-0.25, 0.1, 0.25] {
        let shifted = low(shift);
        let worst = reference.iter().zip(&shifted).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
        assert!(worst < 1e-6, "shift {shift}: {worst:.3e}");
    }
}

#[test]
fn lindblad_rate_is_converged_in_the_time_step() {
    let p = Preset::WeaklyCoupled.params();
    let ops = build(&p).unwrap();
    let rho0 = build_initial_state(&ops, &p).unwrap();
    let rate = |dt: f64| {
        let cfg = LindbladConfig::with_record_interval(1000.0, dt, 1.0).unwrap();
        fit_transfer_rate(&integrate_lindblad(&rho0, &ops, &cfg).unwrap()).unwrap().k
    };
    let (k1, k2) = (rate(1e-3), rate(5e-4));
    assert!((k1 / k2 - 1.0).abs() < 1e-3, "{k1} vs {k2}");
}

#[test]
fn truncation_rows_follow_the_requested_levels() {
    let p = ModelParams::da(3.0, 0.1, 1.0, 1.0, 0.01, 8).unwrap();
    let cfg = LindbladConfig::with_record_interval(20.0, 1e-2, 1.0).unwrap();
    let rows = truncation_study(&p, &[6, 10], None, &cfg).unwrap();
    assert_eq!(rows.iter().map(|r| r.n_levels).collect::<Vec<_>>(), vec![6, 10]);
    assert!((rows[1].mean_position + 0.5).abs() < 1e-2);
    assert!(truncation_study(&p, &[1], None, &cfg).is_err());
}

#[test]
fn initial_state_is_a_valid_density_matrix() {
    for preset in [Preset::WeaklyCoupled, Preset::HighTemperature, Preset::Dba] {
        let p = preset.params();
        let ops = build(&p).unwrap();
        let rho = build_initial_state(&ops, &p).unwrap();
        assert!(DensityMatrix::new(rho.into_operator()).is_ok(), "{preset}");
    }
}
