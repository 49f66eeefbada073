use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use lrt_core::cluster::{rssc, RsscConfig};
use lrt_core::data::{generate_synthetic, Orientation, SyntheticSpec};
use lrt_core::decomp::{rpca, RpcaConfig};
use lrt_core::learn::{learn_global, LearnConfig};
use lrt_core::linalg::{nuclear_subdifferential_rel, svd};
use lrt_core::rng::{gaussian_matrix, seeded};

fn bench_svd(c: &mut Criterion) {
    let mut g = c.benchmark_group("svd");
    for n in [20, 50, 100] {
        let a = gaussian_matrix(n, n, &mut seeded(n as u64));
        g.bench_with_input(BenchmarkId::new("full", n), &a, |b, a| {
            b.iter(|| svd(black_box(a)).unwrap())
        });
        g.bench_with_input(BenchmarkId::new("subdifferential", n), &a, |b, a| {
            b.iter(|| nuclear_subdifferential_rel(black_box(a), 1e-6, 0).unwrap())
        });
    }
    g.finish();
}

fn bench_learn(c: &mut Criterion) {
    let spec = SyntheticSpec {
        ambient_dim: 10,
        subspace_dims: vec![2, 2, 2],
        points_per_subspace: 100,
        noise_sigma: 0.01,
        outlier_fraction: 0.0,
        orientation: Orientation::Random,
    };
    let data = generate_synthetic(&spec, 1).unwrap().dataset;
    let cfg = LearnConfig {
        iterations: 10,
        ..LearnConfig::default()
    };
    c.bench_function("learn_global/10_steps", |b| {
        b.iter(|| learn_global(black_box(&data), &cfg, None).unwrap())
    });
}

fn bench_rpca(c: &mut Criterion) {
    let mut rng = seeded(3);
    let m = gaussian_matrix(100, 2, &mut rng) * gaussian_matrix(2, 100, &mut rng);
    c.bench_function("rpca/100x100_rank2", |b| {
        b.iter(|| rpca(black_box(&m), &RpcaConfig::default()).unwrap())
    });
}

fn bench_rssc(c: &mut Criterion) {
    let data = generate_synthetic(&SyntheticSpec::three_lines(50, 0.01), 4)
        .unwrap()
        .dataset;
    let cfg = RsscConfig::default();
    c.bench_function("rssc/three_lines_150", |b| {
        b.iter(|| rssc(black_box(data.points()), 3, &cfg, 0).unwrap())
    });
}

criterion_group!(benches, bench_svd, bench_learn, bench_rpca, bench_rssc);
criterion_main!(benches);
