use criterion::{criterion_group, criterion_main, Criterion};
use dcqd_bench::{dcqd_model, zoo_chi};
use dcqd_core::estimation::{mle_qpt, MleOptions};
use dcqd_core::labsim::{simulate_run, RunSpec, Scheme};
use dcqd_core::{chi_to_choi, jamiolkowski_fidelity};
use std::hint::black_box;

fn bench(c: &mut Criterion) {
    let model = dcqd_model("fig3d", 1e4);
    let options = MleOptions::default();
    c.bench_function("mle_dcqd_fig3d", |b| b.iter(|| mle_qpt(black_box(&model), &options).unwrap()));

    let chi = zoo_chi("fig3e");
    c.bench_function("choi", |b| b.iter(|| chi_to_choi(black_box(&chi))));
    c.bench_function("jamiolkowski_fidelity", |b| b.iter(|| jamiolkowski_fidelity(black_box(&chi), &chi).unwrap()));

    let spec = RunSpec::new(dcqd_core::channels::find_preset("fig3c").unwrap().spec, Scheme::Calibration, 100_000, 7);
    c.bench_function("simulate_calibration", |b| b.iter(|| simulate_run(black_box(&spec)).unwrap()));
}

criterion_group!(benches, bench);
criterion_main!(benches);
