//! Single-thread pool against the default pool on the data-parallel kernels.
//!
//! Build with `--no-default-features` to time the sequential fallback; both
//! labels then run the same sequential code.

use std::hint::black_box;
use std::time::Duration;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use quasirandom::group::matrix::MatrixKind;
use quasirandom::product::product_set;
use quasirandom::spectral::build_operator;
use quasirandom::words::{parse_word, word_value_set, ValueMode};
use quasirandom::{par, seed, Family, Limits, SubsetMask};

const POOLS: [(&str, usize); 2] = [("one_thread", 1), ("default_pool", 0)];

fn product_sets(c: &mut Criterion) {
    let g = Family::linear(MatrixKind::PSL, 2, 13).construct(&Limits::default()).unwrap();
    let b = SubsetMask::random(g.order(), 960, &mut seed::rng(1)).unwrap();
    let mut group = c.benchmark_group("product_set_psl2_13");
    group.measurement_time(Duration::from_secs(5));
    for (label, workers) in POOLS {
        group.bench_with_input(BenchmarkId::from_parameter(label), &workers, |bench, &w| {
            bench.iter(|| par::with_workers(w, || black_box(product_set(&g, &b, &b).unwrap())))
        });
    }
    group.finish();
}

fn commutator_values(c: &mut Criterion) {
    let g = Family::linear(MatrixKind::PSL, 2, 11).construct(&Limits::default()).unwrap();
    let w = [parse_word("[x1,x2]").unwrap()];
    let mut group = c.benchmark_group("commutator_values_psl2_11");
    group.sample_size(10);
    for (label, workers) in POOLS {
        group.bench_with_input(BenchmarkId::from_parameter(label), &workers, |bench, &wk| {
            bench.iter(|| par::with_workers(wk, || black_box(word_value_set(&g, &w, ValueMode::Exact, &Limits::default()).unwrap())))
        });
    }
    group.finish();
}

fn operator_apply(c: &mut Criterion) {
    let g = Family::linear(MatrixKind::PSL, 2, 13).construct(&Limits::default()).unwrap();
    let b = SubsetMask::random_symmetric(&g, 200, &mut seed::rng(2)).unwrap();
    let op = build_operator(&g, &b, &Limits::default()).unwrap();
    let v: Vec<f64> = (0..g.order()).map(|i| (i as f64).sin()).collect();
    let mut group = c.benchmark_group("operator_apply_psl2_13");
    for (label, workers) in POOLS {
        group.bench_with_input(BenchmarkId::from_parameter(label), &workers, |bench, &w| {
            bench.iter(|| par::with_workers(w, || black_box(op.apply(&v))))
        });
    }
    group.finish();
}

criterion_group!(benches, product_sets, commutator_values, operator_apply);
criterion_main!(benches);
