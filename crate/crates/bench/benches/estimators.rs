use criterion::{black_box, criterion_group, criterion_main, BenchmarkId, Criterion};

use lattice_lab_bench::{bench_function, bench_plan, plane};
use lattice_lab_core::counterexamples::{blowup_witnesses, fiber_counterexample};
use lattice_lab_core::transforms::{compress, round_trip_error};
use lattice_lab_core::{estimate_lip, RealFunction, Space};

fn bench_estimate_lip(c: &mut Criterion) {
    let space = plane();
    let f = bench_function(&space);
    let mut group = c.benchmark_group("estimate_lip");
    for pairs in [10_000u64, 100_000] {
        let plan = bench_plan(pairs);
        group.bench_with_input(BenchmarkId::from_parameter(pairs), &plan, |b, plan| {
            b.iter(|| black_box(estimate_lip(&f, &space, plan).unwrap()));
        });
    }
    group.finish();
}

fn bench_compress_eval(c: &mut Criterion) {
    let space = plane();
    let f = bench_function(&space);
    let compressed = compress(&space, &f).unwrap();
    let plan = bench_plan(1);
    let (x, _) = plan.pair(&space, 0).unwrap();
    c.bench_function("compress_eval", |b| {
        b.iter(|| black_box(compressed.eval(&x).unwrap()));
    });
}

fn bench_round_trip(c: &mut Criterion) {
    let space = plane();
    let f = bench_function(&space);
    let plan = bench_plan(5_000);
    c.bench_function("round_trip_5k_pairs", |b| {
        b.iter(|| black_box(round_trip_error(&space, &f, &plan).unwrap()));
    });
}

fn bench_searches(c: &mut Criterion) {
    c.bench_function("blowup_witnesses_3_radii", |b| {
        let radii: Vec<f64> = [2.0f64, 4.0, 6.0].iter().map(|e| e.exp() - 1.0).collect();
        b.iter(|| black_box(blowup_witnesses(&radii).unwrap()));
    });
    c.bench_function("fiber_counterexample_64", |b| {
        let u = RealFunction::base_weight(&Space::interval_fibers());
        b.iter(|| black_box(fiber_counterexample(&u, 64).unwrap()));
    });
}

criterion_group!(
    benches,
    bench_estimate_lip,
    bench_compress_eval,
    bench_round_trip,
    bench_searches
);
criterion_main!(benches);
