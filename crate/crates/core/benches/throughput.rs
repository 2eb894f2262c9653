//! Throughput benches for the batch entry points.
//!
//! Each group pairs the library call (parallel when the default `parallel`
//! feature is on) with a hand-rolled sequential map over the same per-item
//! work, so one run shows the speedup directly. Running again with
//! `--no-default-features` benches the sequential fallback under the same
//! bench IDs, which lets criterion report the delta between the two modes.

use std::hint::black_box;

use criterion::{criterion_group, criterion_main, Criterion};
use nalgebra::{DMatrix, DVector};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use ctrlqual::frames::{build_basis, generate_frame};
use ctrlqual::gramian::finite_horizon_gramian;
use ctrlqual::moq::{full_report, horizon_sweep, select_actuators};
use ctrlqual::{Horizon, LtiSystem, TimeMode};

fn stable_system(n: usize, m: usize, seed: u64) -> LtiSystem {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let raw = DMatrix::from_fn(n, n, |_, _| rng.random_range(-1.0..1.0));
    let max_re = raw
        .complex_eigenvalues()
        .iter()
        .map(|e| e.re)
        .fold(f64::NEG_INFINITY, f64::max);
    let a = raw - DMatrix::<f64>::identity(n, n) * (max_re + 0.5);
    let b = DMatrix::from_fn(n, m, |_, _| rng.random_range(-1.0..1.0));
    LtiSystem::new(a, b, TimeMode::Continuous).unwrap()
}

fn bench_sweep(c: &mut Criterion) {
    let sys = stable_system(12, 2, 1);
    let horizons: Vec<f64> = (1..=64).map(|k| 0.25 + 0.1 * k as f64).collect();

    let mut group = c.benchmark_group("sweep_64_horizons_n12");
    group.sample_size(20);
    group.bench_function("library", |bench| {
        bench.iter(|| horizon_sweep(black_box(&sys), black_box(&horizons)).unwrap())
    });
    group.bench_function("sequential_map", |bench| {
        bench.iter(|| {
            horizons
                .iter()
                .map(|&t| full_report(black_box(&sys), Horizon::Finite(t)).unwrap())
                .collect::<Vec<_>>()
        })
    });
    group.finish();
}

fn bench_select(c: &mut Criterion) {
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let n = 10;
    let a = {
        let sys = stable_system(n, 1, 3);
        sys.a().clone()
    };
    let candidates: Vec<DVector<f64>> = (0..24)
        .map(|_| DVector::from_fn(n, |_, _| rng.random_range(-1.0..1.0)))
        .collect();

    let mut group = c.benchmark_group("select_4_of_24_n10");
    group.sample_size(20);
    group.bench_function("library", |bench| {
        bench.iter(|| {
            select_actuators(
                black_box(&a),
                black_box(&candidates),
                4,
                Horizon::Finite(1.0),
            )
            .unwrap()
        })
    });
    group.bench_function("sequential_column_gramians", |bench| {
        bench.iter(|| {
            candidates
                .iter()
                .map(|col| {
                    let b = DMatrix::from_column_slice(n, 1, col.as_slice());
                    let sys = LtiSystem::new(a.clone(), b, TimeMode::Continuous).unwrap();
                    finite_horizon_gramian(&sys, 1.0).unwrap()
                })
                .collect::<Vec<_>>()
        })
    });
    group.finish();
}

fn bench_frame(c: &mut Criterion) {
    let sys = stable_system(8, 2, 4);
    let basis = build_basis(1.0, 2, 32).unwrap();

    let mut group = c.benchmark_group("frame_d32_n8");
    group.sample_size(20);
    group.bench_function("library", |bench| {
        bench.iter(|| generate_frame(black_box(&sys), 1.0, black_box(&basis)).unwrap())
    });
    group.finish();
}

fn bench_gramian(c: &mut Criterion) {
    let sys = stable_system(50, 3, 5);

    let mut group = c.benchmark_group("gramian_n50");
    group.sample_size(30);
    group.bench_function("exponential_formula", |bench| {
        bench.iter(|| finite_horizon_gramian(black_box(&sys), 5.0).unwrap())
    });
    group.finish();
}

criterion_group!(benches, bench_sweep, bench_select, bench_frame, bench_gramian);
criterion_main!(benches);
