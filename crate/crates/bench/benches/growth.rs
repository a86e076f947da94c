use criterion::{black_box, criterion_group, criterion_main, BenchmarkId, Criterion};

use isogrow::bjorling::sample_initial_strip;
use isogrow::growth::grow;
use isogrow::quantities::extract;
use isogrow::smooth::{solve_gc_cauchy, CkConfig};
use isogrow::DomainSpec;
use isogrow_bench::{sphere_data, sphere_strip};

fn strip(c: &mut Criterion) {
    let cd = sphere_data();
    let mut g = c.benchmark_group("strip");
    for eps in [0.1, 0.05, 0.025] {
        g.bench_with_input(BenchmarkId::from_parameter(eps), &eps, |b, &eps| {
            b.iter(|| sample_initial_strip(&cd, black_box(eps)).unwrap())
        });
    }
    g.finish();
}

fn growth(c: &mut Criterion) {
    let mut g = c.benchmark_group("grow");
    g.sample_size(20);
    for eps in [0.1, 0.05, 0.025] {
        let s = sphere_strip(eps);
        g.bench_with_input(BenchmarkId::from_parameter(eps), &s, |b, s| b.iter(|| grow(s, black_box(0.3))));
    }
    g.finish();
}

fn quantities(c: &mut Criterion) {
    let surface = grow(&sphere_strip(0.05), 0.3).surface;
    c.bench_function("extract/0.05", |b| b.iter(|| extract(black_box(&surface)).unwrap()));
}

fn smooth(c: &mut Criterion) {
    let cd = sphere_data();
    let spec = DomainSpec::new(1.0, 0.3, 0.05).unwrap();
    let mut g = c.benchmark_group("gc_cauchy");
    g.sample_size(10);
    g.bench_function("64x16", |b| b.iter(|| solve_gc_cauchy(&cd, &spec, 64, 16, &CkConfig::default()).unwrap()));
    g.finish();
}

criterion_group!(benches, strip, growth, quantities, smooth);
criterion_main!(benches);
