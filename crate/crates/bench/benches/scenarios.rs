use std::hint::black_box;

use criterion::{criterion_group, criterion_main, Criterion};
use qswitch_cli::scenario::scenario_bell;
use qswitch_cli::{design, run_comparison_with};

fn bell(c: &mut Criterion) {
    let spec = scenario_bell();
    let d = design(&spec).unwrap();
    let mut group = c.benchmark_group("bell");
    group.sample_size(10);
    group.bench_function("design", |b| b.iter(|| design(black_box(&spec))));
    group.bench_function("comparison", |b| b.iter(|| run_comparison_with(black_box(&spec), &d)));
    group.finish();
}

criterion_group!(benches, bell);
criterion_main!(benches);
