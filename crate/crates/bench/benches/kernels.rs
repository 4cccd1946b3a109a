use std::hint::black_box;

use criterion::{criterion_group, criterion_main, Criterion};
use lucas_catalan::bounds::delta0_audit;
use lucas_catalan::lucas::LucasParams;
use lucas_catalan::num_bigint::BigInt;
use lucas_catalan::primes_ap::ap_gap_check;
use lucas_catalan::search::{enumerate_rs, pbc_decompose, AlphaBound, PbcOptions, SSign};

fn kernels(c: &mut Criterion) {
    let target: BigInt = "242266902828869673216".parse().unwrap();
    c.bench_function("pbc_decompose", |b| {
        b.iter(|| pbc_decompose(black_box(&target), PbcOptions { m_min: 1, m_cap: Some(30), max_solutions: 64 }))
    });
    let p = LucasParams::new(3, -1).unwrap();
    c.bench_function("lucas_u_1000", |b| b.iter(|| p.u(black_box(1000))));
    c.bench_function("enumerate_rs_alpha_100", |b| {
        b.iter(|| enumerate_rs(&AlphaBound::LogAlpha(1857, 1000), &AlphaBound::Alpha(100, 1), SSign::Both))
    });
    c.bench_function("delta0_n0_24_j_200", |b| b.iter(|| delta0_audit(black_box(24), 200, 128)));
    c.bench_function("ap_gap_check_q24", |b| b.iter(|| ap_gap_check(24, &[5], 15, black_box(100_000))));
}

criterion_group! {
    name = benches;
    config = Criterion::default().sample_size(10);
    targets = kernels
}
criterion_main!(benches);
