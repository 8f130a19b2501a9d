//! Sequential vs parallel execution of the exhaustive kernels.

use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use fewweight::catalog::{build, FamilyId, Params};
use fewweight::{codes, walsh, Ctx, Exec};

fn strategies() -> [(&'static str, Ctx); 2] {
    [
        ("sequential", Ctx::sequential()),
        (
            "parallel",
            Ctx {
                exec: Exec::Parallel,
                ..Ctx::default()
            },
        ),
    ]
}

fn fwht(c: &mut Criterion) {
    let mut g = c.benchmark_group("fwht");
    for k in [12u32, 16] {
        let v: Vec<i32> = (0..1i32 << k).map(|i| (i * 7919) % 3 - 1).collect();
        g.bench_with_input(BenchmarkId::from_parameter(k), &v, |b, v| {
            b.iter(|| {
                let mut w = v.clone();
                walsh::fwht(&mut w).unwrap();
                black_box(w)
            })
        });
    }
    g.finish();
}

fn spectrum_full(c: &mut Criterion) {
    let fam = build(FamilyId::L32_1, &Params::m(5)).unwrap();
    let mut g = c.benchmark_group("spectrum_full_n11");
    g.sample_size(10);
    for (name, ctx) in strategies() {
        g.bench_function(name, |b| b.iter(|| walsh::spectrum_full(black_box(&fam.f), &ctx).unwrap()));
    }
    g.finish();
}

fn b_slice(c: &mut Criterion) {
    let fam = build(FamilyId::T41, &Params::km(5, 3)).unwrap();
    let mut g = c.benchmark_group("b_slice_n15");
    g.sample_size(10);
    for (name, ctx) in strategies() {
        g.bench_function(name, |b| b.iter(|| walsh::spectrum_b_slice(black_box(&fam.f), &ctx).unwrap()));
    }
    g.finish();
}

fn brute_cdf(c: &mut Criterion) {
    let fam = build(FamilyId::L32_2, &Params::m(5)).unwrap();
    let mut g = c.benchmark_group("bruteforce_cdf_n11");
    g.sample_size(10);
    for (name, ctx) in strategies() {
        g.bench_function(name, |b| b.iter(|| codes::wd_bruteforce_cdf(black_box(&fam.f), &ctx).unwrap()));
    }
    g.finish();
}

criterion_group!(benches, fwht, spectrum_full, b_slice, brute_cdf);
criterion_main!(benches);
