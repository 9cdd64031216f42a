//! Entanglement-based (RHP) non-Markovianity of the electronic dynamics.

use ndarray::Array2;
use num_complex::Complex64 as C64;

use crate::dynamics::{check_trace, Propagation, Trajectory};
use crate::error::{arg_err, Error, Result};
use crate::linops::{concurrence_operator, kron, DensityMatrix, Operator};
use crate::model::{ModelKind, ModelParams, SystemOperators};

/// Engine used for the RHP evolution.
pub type RhpEngine = Propagation;

/// Measures below this are reported as zero in summaries.
pub const RHP_ZERO_THRESHOLD: f64 = 1e-4;

#[derive(Clone, Debug, PartialEq)]
pub struct RhpResult {
    /// Total variation of the concurrence minus its net decrease.
    pub measure: f64,
    /// Single `concurrence` column over time.
    pub concurrence_trace: Trajectory,
    /// Concurrence at the start minus concurrence at the end.
    pub delta_e_entanglement: f64,
}

impl RhpResult {
    /// The measure with values below [`RHP_ZERO_THRESHOLD`] set to zero.
    pub fn reported_measure(&self) -> f64 {
        if self.measure < RHP_ZERO_THRESHOLD { 0.0 } else { self.measure }
    }
}

/// Σ|E_{i+1} − E_i| − (E_0 − E_last) for a sampled entanglement trace.
pub fn rhp_from_trace(values: &[f64]) -> f64 {
    if values.len() < 2 {
        return 0.0;
    }
    let variation: f64 = values.windows(2).map(|w| (w[1] - w[0]).abs()).sum();
    let drop = values[0] - values[values.len() - 1];
    (variation - drop).max(0.0)
}

/// Undisplaced thermal oscillator state diag ∝ e^{−n/kbt}.
pub fn undisplaced_thermal_state(n_levels: usize, kbt: f64) -> Result<DensityMatrix> {
    if !(kbt > 0.0) {
        return arg_err(format!("kbt must be positive, got {kbt}"));
    }
    let w: Vec<f64> = (0..n_levels).map(|n| (-(n as f64) / kbt).exp()).collect();
    let z: f64 = w.iter().sum();
    let p: Vec<f64> = w.iter().map(|x| x / z).collect();
    Ok(DensityMatrix::new_unchecked(Operator::from_real_diagonal(&p, &[n_levels])?))
}

fn bell_projector() -> Operator {
    let s = 0.5_f64.sqrt();
    let z = C64::new(0.0, 0.0);
    // (|D⟩|0̃⟩ + |A⟩|1̃⟩)/√2 in (electronic, spectator) order
    let psi = [C64::new(s, 0.0), z, z, C64::new(s, 0.0)];
    Operator::outer(&psi, &psi).expect("4 entries").with_dims(vec![2, 2]).expect("2x2 factors")
}

fn require_da(ops: &SystemOperators) -> Result<()> {
    if ops.kind != ModelKind::Da {
        return Err(Error::UnsupportedModel("the RHP measure is defined for the DA model only".into()));
    }
    Ok(())
}

/// The DA system extended by a non-interacting qubit, with factor order
/// (electronic, oscillator, spectator), and its initial state
/// |Φ⟩⟨Φ| ⊗ ρ_RC with ρ_RC the undisplaced thermal oscillator state.
pub fn build_rhp_system(ops: &SystemOperators, params: &ModelParams) -> Result<(SystemOperators, DensityMatrix)> {
    require_da(ops)?;
    let rc = undisplaced_thermal_state(ops.n_levels, params.kbt)?;
    let ext = ops.with_spectator(2)?;
    // |Φ⟩⟨Φ| lives on (electronic, spectator); reorder to (electronic, oscillator, spectator).
    let bell = bell_projector();
    let (n, b) = (ops.n_levels, bell.matrix());
    let r = rc.matrix();
    let d = 4 * n;
    let m = Array2::from_shape_fn((d, d), |(i, j)| {
        let (ei, oi, si) = (i / (2 * n), (i / 2) % n, i % 2);
        let (ej, oj, sj) = (j / (2 * n), (j / 2) % n, j % 2);
        b[[ei * 2 + si, ej * 2 + sj]] * r[[oi, oj]]
    });
    let rho = DensityMatrix::new_unchecked(Operator::new(m, vec![2, n, 2])?);
    Ok((ext, rho))
}

/// Evolves the entangled electronic state and returns the RHP measure.
///
/// The spectator qubit does not interact, so the extended state is split into
/// its four spectator blocks B_jk and each is propagated by the system map.
/// `record_every` (periods) sets the concurrence sampling.
pub fn rhp_measure(
    ops: &SystemOperators,
    params: &ModelParams,
    engine: &RhpEngine,
    t_max: f64,
    record_every: f64,
) -> Result<RhpResult> {
    require_da(ops)?;
    let rc = undisplaced_thermal_state(ops.n_levels, params.kbt)?;
    rhp_measure_from(ops, &rc, engine, t_max, record_every)
}

/// As [`rhp_measure`] with an explicit initial oscillator state.
pub fn rhp_measure_from(
    ops: &SystemOperators,
    oscillator_state: &DensityMatrix,
    engine: &RhpEngine,
    t_max: f64,
    record_every: f64,
) -> Result<RhpResult> {
    require_da(ops)?;
    engine.validate()?;
    if oscillator_state.dim() != ops.n_levels {
        return arg_err("oscillator state has the wrong dimension");
    }
    let stride = engine.steps_for(record_every).max(1);
    let steps = engine.steps_for(t_max);
    if steps < stride {
        return arg_err("t_max must cover at least one record interval");
    }
    let records = steps / stride;
    let mut ev = engine.evolver(ops, false, steps, stride)?;

    // Blocks of ½|e⟩⟨e'| ⊗ ρ_RC: B00 = ½|D⟩⟨D|, B11 = ½|A⟩⟨A|, B01 = ½|D⟩⟨A| = X + iY.
    let unit = |e: usize, f: usize, z: C64| {
        let mut m = Array2::<C64>::zeros((2, 2));
        m[[e, f]] += z * 0.5;
        m
    };
    let i = C64::new(0.0, 1.0);
    let one = C64::new(1.0, 0.0);
    let el = [
        unit(0, 0, one),
        unit(1, 1, one),
        &unit(0, 1, one * 0.5) + &unit(1, 0, one * 0.5),
        &unit(0, 1, -i * 0.5) + &unit(1, 0, i * 0.5),
    ];
    let mut states: Vec<Array2<C64>> = el
        .iter()
        .map(|m| kron(&Operator::from_matrix(m.clone()).expect("2x2"), oscillator_state.operator()).into_matrix())
        .collect();

    let mut traj = Trajectory::new(&["concurrence"], stride);
    let dt = ev.step_periods();
    let check = engine.trace_preserving();
    for r in 0..=records {
        if r > 0 {
            ev.advance(&mut states, stride);
        }
        let (reduced, trace) = electron_spectator_state(&states, ops.n_levels);
        if check {
            check_trace(trace, r * stride)?;
        }
        traj.push((r * stride) as f64 * dt, &[concurrence_operator(&reduced)?]);
    }
    let c = traj.column("concurrence").expect("column exists");
    let measure = rhp_from_trace(c);
    let delta = c[0] - c[c.len() - 1];
    Ok(RhpResult { measure, concurrence_trace: traj, delta_e_entanglement: delta })
}

/// Reduced (electronic, spectator) state from the propagated blocks
/// [B00, B11, X, Y], and its trace.
fn electron_spectator_state(states: &[Array2<C64>], n: usize) -> (Operator, f64) {
    let tr_osc = |m: &Array2<C64>| {
        Array2::from_shape_fn((2, 2), |(e, f)| (0..n).map(|k| m[[e * n + k, f * n + k]]).sum::<C64>())
    };
    let b00 = tr_osc(&states[0]);
    let b11 = tr_osc(&states[1]);
    let x = tr_osc(&states[2]);
    let y = tr_osc(&states[3]);
    let i = C64::new(0.0, 1.0);
    let b01 = &x + &y.mapv(|z| z * i);
    let b10 = &x - &y.mapv(|z| z * i);
    let blocks = [[&b00, &b01], [&b10, &b11]];
    let out = Array2::from_shape_fn((4, 4), |(r, c)| {
        let (e, j) = (r / 2, r % 2);
        let (f, k) = (c / 2, c % 2);
        blocks[j][k][[e, f]]
    });
    let trace = (0..4).map(|k| out[[k, k]].re).sum();
    let mut op = Operator::new(out, vec![2, 2]).expect("4x4");
    op.symmetrize();
    (op, trace)
}
