use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use qcong_core::eta;
use qcong_core::kernel::{convolve_kronecker, convolve_schoolbook};
use qcong_core::PrimeContext;

fn multiply(c: &mut Criterion) {
    let ctx = PrimeContext::new(2).unwrap();
    let mut group = c.benchmark_group("psi_squared");
    for prec in [64i64, 256, 1024] {
        let psi = eta::psi(ctx, prec).unwrap();
        let run = psi.numerators().to_vec();
        let n = run.len();
        group.bench_with_input(BenchmarkId::new("schoolbook", prec), &run, |b, r| {
            b.iter(|| convolve_schoolbook(black_box(r), black_box(r), n))
        });
        group.bench_with_input(BenchmarkId::new("kronecker", prec), &run, |b, r| {
            b.iter(|| convolve_kronecker(black_box(r), black_box(r), n))
        });
    }
    group.finish();
}

fn hauptmoduln(c: &mut Criterion) {
    let mut group = c.benchmark_group("expansions");
    for p in [2u32, 7] {
        let ctx = PrimeContext::new(p).unwrap();
        group.bench_function(BenchmarkId::new("psi_1024", p), |b| {
            b.iter(|| eta::psi(ctx, black_box(1024)))
        });
        group.bench_function(BenchmarkId::new("phi_1024", p), |b| {
            b.iter(|| eta::phi(ctx, black_box(1024)))
        });
    }
    group.finish();
}

criterion_group!(benches, multiply, hauptmoduln);
criterion_main!(benches);
