use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use expsub_bench::{descriptor, root_isolation_inputs, system};
use expsub_core::algebraic::roots::isolate_roots;
use expsub_core::{grid, omega_samples, Convention};
use expsub_core::subdynamics::{circle_directions, sphere_directions};

fn count_grid(c: &mut Criterion) {
    let mut g = c.benchmark_group("count_grid");
    for name in ["times2times3", "ledrappier", "sqrt2sqrt3"] {
        let d = descriptor(name);
        g.bench_function(BenchmarkId::from_parameter(name), |b| {
            b.iter(|| grid(black_box(&d), &[(-5, 5), (0, 5)]).unwrap())
        });
    }
    g.finish();
}

fn root_isolation(c: &mut Criterion) {
    let mut g = c.benchmark_group("isolate_roots");
    for (label, f) in root_isolation_inputs() {
        g.bench_function(BenchmarkId::from_parameter(label), |b| {
            b.iter(|| isolate_roots(black_box(&f), 128).unwrap())
        });
    }
    g.finish();
}

fn portrait_sampling(c: &mut Criterion) {
    let mut g = c.benchmark_group("omega_samples");
    g.sample_size(20);
    let s = system("sqrt2sqrt3");
    let dirs = circle_directions(360);
    g.bench_function("sqrt2sqrt3/circle360", |b| {
        b.iter(|| omega_samples(&s, black_box(&dirs), Convention::InverseRoot, 64).unwrap())
    });
    let s3 = system("times2times3times5");
    let dirs3: Vec<_> = sphere_directions(36, 36).into_iter().map(|(_, _, v)| v).collect();
    g.bench_function("times2times3times5/sphere36x36", |b| {
        b.iter(|| omega_samples(&s3, black_box(&dirs3), Convention::InverseRoot, 64).unwrap())
    });
    g.finish();
}

criterion_group!(benches, count_grid, root_isolation, portrait_sampling);
criterion_main!(benches);
