//! Benchmarks for the hot kernels: exact exponential-polynomial
//! algebra, argument-principle winding counts, and circle-average
//! quadrature.

use criterion::{criterion_group, criterion_main, Criterion};
use num_complex::Complex64;

use nevlab_core::quad::CircleQuad;
use nevlab_core::{
    count_zeros_disk, parse_exact, parse_float, proximity_m, wronskian, LocateOptions, Target,
};

fn exact_algebra(c: &mut Criterion) {
    let a = parse_exact("(z^3+2*z+1)*exp(2*z) + (z^2-1)*exp(-z) + z^4 - 3").unwrap();
    let b = parse_exact("(z^2+1i*z)*exp(3*z) + (2*z+1)*exp(z) - 1").unwrap();
    c.bench_function("exact_mul_three_terms", |bench| {
        bench.iter(|| std::hint::black_box(a.mul(&b)))
    });

    let comps = vec![
        parse_exact("1").unwrap(),
        parse_exact("(z+1)*exp(z)").unwrap(),
        parse_exact("z^2*exp(2*z)").unwrap(),
    ];
    c.bench_function("wronskian_three_components", |bench| {
        bench.iter(|| std::hint::black_box(wronskian(&comps).unwrap()))
    });
}

fn winding_counts(c: &mut Criterion) {
    let f = parse_float("exp(z)-1").unwrap();
    let mut group = c.benchmark_group("winding");
    group.sample_size(20);
    group.bench_function("count_zeros_r10", |bench| {
        bench.iter(|| {
            std::hint::black_box(
                count_zeros_disk(&f, Complex64::new(0.0, 0.0), 10.0).unwrap(),
            )
        })
    });
    group.finish();
}

fn circle_quadrature(c: &mut Criterion) {
    let f = parse_float("exp(z)").unwrap();
    let cfg = CircleQuad::default();
    let mut group = c.benchmark_group("quadrature");
    group.sample_size(20);
    group.bench_function("proximity_exp_r20", |bench| {
        bench.iter(|| {
            std::hint::black_box(proximity_m(&f, Target::Infinity, 20.0, &cfg).unwrap())
        })
    });
    group.finish();
}

fn locate_zeros(c: &mut Criterion) {
    let f = parse_float("exp(2*z) - exp(z) - 1").unwrap();
    let opts = LocateOptions::default();
    let mut group = c.benchmark_group("locate");
    group.sample_size(10);
    group.bench_function("locate_zeros_r8", |bench| {
        bench.iter(|| {
            std::hint::black_box(
                nevlab_core::locate_zeros_disk(&f, Complex64::new(0.0, 0.0), 8.0, &opts)
                    .unwrap(),
            )
        })
    });
    group.finish();
}

criterion_group!(benches, exact_algebra, winding_counts, circle_quadrature, locate_zeros);
criterion_main!(benches);
