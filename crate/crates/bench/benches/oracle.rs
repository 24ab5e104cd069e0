use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use xrh_core::construct::assemble_f;
use xrh_core::criterion::check_conditions;
use xrh_core::ff::FieldCtx;
use xrh_core::oracle::{check_sparse_poly, check_xr_h_poly};
use xrh_core::poly::LaurentPoly;

/// x^2 + x + x^-1, which permutes for every odd k.
fn trinomial(ctx: &FieldCtx) -> LaurentPoly {
    LaurentPoly::parse("1*x^2 + 1*x^1 + 1*x^-1", ctx.mid()).unwrap()
}

fn oracles(c: &mut Criterion) {
    let mut group = c.benchmark_group("oracle");
    group.sample_size(10);
    for k in [5, 7, 9] {
        let ctx = FieldCtx::new(2, k).unwrap();
        let h = trinomial(&ctx);
        group.bench_with_input(BenchmarkId::new("xr_h", k), &h, |b, h| {
            b.iter(|| check_xr_h_poly(&ctx, black_box(h), 1).unwrap().is_permutation)
        });
        group.bench_with_input(BenchmarkId::new("conditions", k), &h, |b, h| {
            b.iter(|| check_conditions(&ctx, black_box(h), 1, false).unwrap().conditions_hold())
        });
        if k <= 7 {
            let terms = assemble_f(&ctx, &h, 1).unwrap().sparse();
            group.bench_with_input(BenchmarkId::new("sparse", k), &terms, |b, t| {
                b.iter(|| check_sparse_poly(&ctx, black_box(t)).is_permutation)
            });
        }
    }
    group.finish();
}

criterion_group!(benches, oracles);
criterion_main!(benches);
