//! Parallel vs sequential throughput of the three data-parallel hot paths:
//! Monte Carlo replicates, per-configuration quadrature and the simplex
//! scan. With the default `parallel` feature, `ExecMode::Parallel` runs on
//! rayon; `ExecMode::Sequential` is the fallback used when the feature is
//! disabled.

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use tricell::analytic::scan_simplex;
use tricell::quadrature::pmf_by_quadrature_with;
use tricell::{estimate_pmf_with, ExecMode, Rat, SimConfig, Weights, Window};

fn modes() -> [(&'static str, ExecMode); 2] {
    [("parallel", ExecMode::Parallel), ("sequential", ExecMode::Sequential)]
}

fn bench_estimator(c: &mut Criterion) {
    let mut group = c.benchmark_group("estimate_pmf");
    group.sample_size(10);
    let weights = Weights::from_fractions(1, 3, 1, 3).unwrap();
    let window = Window::new(30.0).unwrap();
    for (name, mode) in modes() {
        let cfg = SimConfig::new(weights.clone(), window, 64, 42);
        group.bench_with_input(BenchmarkId::from_parameter(name), &cfg, |b, cfg| {
            b.iter(|| estimate_pmf_with(cfg, mode).unwrap());
        });
    }
    group.finish();
}

fn bench_quadrature(c: &mut Criterion) {
    let mut group = c.benchmark_group("pmf_by_quadrature");
    group.sample_size(10);
    let weights = Weights::from_fractions(1, 5, 2, 5).unwrap();
    for (name, mode) in modes() {
        group.bench_with_input(BenchmarkId::from_parameter(name), &weights, |b, w| {
            b.iter(|| pmf_by_quadrature_with(w, mode).unwrap());
        });
    }
    group.finish();
}

fn bench_scan(c: &mut Criterion) {
    let mut group = c.benchmark_group("scan_simplex");
    group.sample_size(10);
    let step = Rat::new(1.into(), 40.into());
    for (name, mode) in modes() {
        group.bench_with_input(BenchmarkId::from_parameter(name), &step, |b, step| {
            b.iter(|| scan_simplex(step, mode).unwrap());
        });
    }
    group.finish();
}

criterion_group!(benches, bench_estimator, bench_quadrature, bench_scan);
criterion_main!(benches);
