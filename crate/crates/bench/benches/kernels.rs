//! Latency of the kernel evaluators, the periodization series, Gram
//! positivity checks and the appendix verification suite.

use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion, Throughput};
use num_complex::Complex64;
use reflpos::kernels::{self, KernelKind};
use reflpos::{periodize, verify, BoundaryPoint, Domain, Suite};

const BETA: f64 = 1.0;

fn strip_points(n: usize) -> Vec<Complex64> {
    (0..n)
        .map(|k| {
            let t = k as f64 / n as f64;
            Complex64::new(4.0 * t - 2.0, BETA * (0.1 + 0.8 * (7.0 * t).fract()))
        })
        .collect()
}

fn bench_kernel_eval(c: &mut Criterion) {
    let strip = Domain::strip(BETA).unwrap();
    let z = Complex64::new(0.3, 0.4);
    let w = Complex64::new(-0.2, 0.7);
    let x = BoundaryPoint::lower(BETA, 0.25);

    let mut group = c.benchmark_group("kernel_eval");
    group.bench_function("szego_strip", |b| {
        b.iter(|| kernels::szego(black_box(strip), black_box(z), black_box(w)).unwrap())
    });
    group.bench_function("poisson_strip", |b| {
        b.iter(|| kernels::poisson(black_box(strip), black_box(z), black_box(&x)).unwrap())
    });
    group.bench_function("bergman_strip", |b| {
        b.iter(|| kernels::bergman_strip(black_box(BETA), black_box(z), black_box(w)).unwrap())
    });
    group.bench_function("szego_disc", |b| {
        let (z, w) = (Complex64::new(0.3, 0.2), Complex64::new(-0.1, 0.5));
        b.iter(|| kernels::szego(black_box(Domain::Disc), black_box(z), black_box(w)).unwrap())
    });
    group.finish();
}

fn bench_series(c: &mut Criterion) {
    let z = Complex64::new(0.3, 0.4);
    let w = Complex64::new(-0.2, 0.7);
    let mut group = c.benchmark_group("periodization");
    for &n in &[100u64, 10_000] {
        group.throughput(Throughput::Elements(2 * n + 1));
        group.bench_with_input(BenchmarkId::new("szego_series", n), &n, |b, &n| {
            b.iter(|| periodize::szego_series(BETA, black_box(z), black_box(w), n).unwrap())
        });
        group.bench_with_input(BenchmarkId::new("bergman_series", n), &n, |b, &n| {
            b.iter(|| periodize::bergman_series(BETA, black_box(z), black_box(w), n).unwrap())
        });
    }
    group.finish();
}

fn bench_gram(c: &mut Criterion) {
    let strip = Domain::strip(BETA).unwrap();
    let mut group = c.benchmark_group("gram_psd");
    for &n in &[16usize, 64, 200] {
        let points = strip_points(n);
        group.bench_with_input(BenchmarkId::new("szego_strip", n), &points, |b, pts| {
            b.iter(|| kernels::gram_psd(black_box(pts), KernelKind::Szego, strip).unwrap())
        });
    }
    group.finish();
}

fn bench_verify(c: &mut Criterion) {
    let mut group = c.benchmark_group("verify");
    group.sample_size(10);
    group.bench_function("appendix", |b| b.iter(|| verify::run_suite(black_box(Suite::Appendix))));
    group.finish();
}

criterion_group!(benches, bench_kernel_eval, bench_series, bench_gram, bench_verify);
criterion_main!(benches);
