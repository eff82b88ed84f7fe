use std::hint::black_box;

use criterion::{criterion_group, criterion_main, Criterion};
use qcong_core::basis::BasisBuilder;
use qcong_core::congruence::{verify_theorem2, Theorem2Request};
use qcong_core::hecke::{derive_bj, verify_up_closure};
use qcong_core::PrimeContext;

fn basis(c: &mut Criterion) {
    let ctx = PrimeContext::new(3).unwrap();
    c.bench_function("basis_p3_m12_prec512", |b| {
        b.iter(|| {
            let builder = BasisBuilder::new(ctx, black_box(512), 12).unwrap();
            (1..=12)
                .map(|m| builder.element(m).unwrap())
                .collect::<Vec<_>>()
        })
    });
}

fn checks(c: &mut Criterion) {
    let mut group = c.benchmark_group("checks");
    group.sample_size(10);
    let c5 = PrimeContext::new(5).unwrap();
    group.bench_function("main_congruence_p5_m6_d2_n20", |b| {
        let req = Theorem2Request {
            m_max: 6,
            d_max: 2,
            n_max: Some(20),
            precision: None,
        };
        b.iter(|| verify_theorem2(c5, black_box(&req)).unwrap())
    });
    let c7 = PrimeContext::new(7).unwrap();
    group.bench_function("modular_equation_p7", |b| {
        b.iter(|| derive_bj(c7, black_box(128)).unwrap())
    });
    let c2 = PrimeContext::new(2).unwrap();
    group.bench_function("closure_p2_20_trials", |b| {
        b.iter(|| verify_up_closure(c2, 20, 4, 128, black_box(1)).unwrap())
    });
    group.finish();
}

criterion_group!(benches, basis, checks);
criterion_main!(benches);
