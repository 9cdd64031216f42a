use criterion::{black_box, criterion_group, criterion_main, BenchmarkId, Criterion};
use ri_et::linops::{concurrence, expm_i_herm, fidelity, herm_eig, kron, partial_trace, DensityMatrix};
use ri_et::model::Preset;
use ri_et_bench::fixture;

fn linear_algebra(c: &mut Criterion) {
    let mut g = c.benchmark_group("herm_eig");
    for preset in [Preset::WeaklyCoupled, Preset::HighTemperature] {
        let (ops, _) = fixture(preset);
        g.bench_with_input(BenchmarkId::from_parameter(ops.dim()), &ops.h_et, |b, h| b.iter(|| herm_eig(black_box(h))));
    }
    g.finish();

    let (ops, rho) = fixture(Preset::WeaklyCoupled);
    let joint = kron(&ops.h_et, &ri_et::linops::Operator::identity(&[2]));
    c.bench_function("expm_i_herm/64", |b| b.iter(|| expm_i_herm(black_box(&joint), 0.6)));
    let sigma = DensityMatrix::maximally_mixed(ops.dims());
    c.bench_function("fidelity/32", |b| b.iter(|| fidelity(black_box(&rho), black_box(&sigma))));
    let bell_like = partial_trace(&rho, &[0]).unwrap();
    let two = DensityMatrix::new(kron(&bell_like, &bell_like)).unwrap();
    c.bench_function("concurrence", |b| b.iter(|| concurrence(black_box(&two))));
}

criterion_group!(benches, linear_algebra);
criterion_main!(benches);
