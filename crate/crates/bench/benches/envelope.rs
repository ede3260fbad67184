use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion, Throughput};
use rayvex::geometry::ray_intersect;
use rayvex::verify::{certify, oracle_build, oracle_eval};
use rayvex::Sense;
use rayvex_bench::{models, queries};

fn evaluation(c: &mut Criterion) {
    let mut group = c.benchmark_group("eval");
    for (name, m) in models() {
        let pts = queries(&m, 256);
        group.throughput(Throughput::Elements(pts.len() as u64));
        group.bench_function(BenchmarkId::new("value", name), |b| {
            b.iter(|| pts.iter().map(|x| m.value(black_box(x)).unwrap()).sum::<f64>())
        });
        group.bench_function(BenchmarkId::new("gradient", name), |b| {
            b.iter(|| pts.iter().filter_map(|x| m.gradient(black_box(x)).ok()).count())
        });
    }
    group.finish();
}

fn tracing(c: &mut Criterion) {
    let mut group = c.benchmark_group("ray_intersect");
    for (name, m) in models() {
        let dirs: Vec<_> = queries(&m, 256)
            .into_iter()
            .map(|x| m.to_working(&x).unwrap())
            .filter(|v| v.iter().any(|c| *c != 0.0))
            .collect();
        group.throughput(Throughput::Elements(dirs.len() as u64));
        group.bench_function(name, |b| {
            b.iter(|| dirs.iter().map(|v| ray_intersect(m.polytope(), black_box(v)).unwrap().alpha_v).sum::<f64>())
        });
    }
    group.finish();
}

fn certification(c: &mut Criterion) {
    let mut group = c.benchmark_group("certify");
    group.sample_size(10);
    for (name, m) in models() {
        group.bench_function(name, |b| b.iter(|| certify(&m, black_box(2000), 0).unwrap()));
    }
    group.finish();
}

fn oracle(c: &mut Criterion) {
    let mut group = c.benchmark_group("oracle");
    group.sample_size(10);
    let all = models();
    let (_, m) = all.iter().find(|(n, _)| *n == "reliability").expect("reliability model");
    let f = match m.sense() {
        Sense::Convex => m.original_field().clone(),
        Sense::Concave => m.original_field().negated(),
    };
    let pts = queries(m, 16);
    for density in [10, 20, 40] {
        let o = oracle_build(&f, m.original_polytope(), density, 0).unwrap();
        group.bench_with_input(BenchmarkId::new("eval", density), &o, |b, o| {
            b.iter(|| pts.iter().map(|x| oracle_eval(o, black_box(x)).unwrap()).sum::<f64>())
        });
    }
    group.finish();
}

criterion_group!(benches, evaluation, tracing, certification, oracle);
criterion_main!(benches);
