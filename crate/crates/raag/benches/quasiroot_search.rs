//! Parallel vs sequential quasi-root search on fixed instances.

use std::sync::Arc;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use raag::quasiroot::{
    find_quasi_roots, find_quasi_roots_seq, QuasiRootParams, Rational, SearchOptions,
};
use raag::{DefiningGraph, GroupElement};

fn fixtures() -> Vec<(&'static str, QuasiRootParams, GroupElement)> {
    let p5 = Arc::new(DefiningGraph::path(5));
    let block = GroupElement::parse(&p5, "v2 v2 v2 v3 v3 v3 v5").unwrap();
    let chain = GroupElement::parse(&p5, "v2 v3 v4").unwrap();
    vec![
        (
            "p5_block_pow5_lambda_1_7",
            QuasiRootParams::new(Rational::new(1, 7), 2).unwrap(),
            block.pow(5),
        ),
        (
            "p5_chain_pow8_lambda_1_4",
            QuasiRootParams::new(Rational::new(1, 4), 2).unwrap(),
            chain.pow(8),
        ),
    ]
}

fn bench_search(c: &mut Criterion) {
    let opts = SearchOptions::default();
    let mut group = c.benchmark_group("find_quasi_roots");
    for (name, params, h) in fixtures() {
        group.bench_with_input(BenchmarkId::new("parallel", name), &h, |b, h| {
            b.iter(|| find_quasi_roots(&params, h, &opts).unwrap())
        });
        group.bench_with_input(BenchmarkId::new("sequential", name), &h, |b, h| {
            b.iter(|| find_quasi_roots_seq(&params, h, &opts).unwrap())
        });
    }
    group.finish();
}

criterion_group!(benches, bench_search);
criterion_main!(benches);
