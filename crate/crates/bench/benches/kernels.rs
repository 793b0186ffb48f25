use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use std::hint::black_box;

use psic_bench::{hermitian, product_complement, product_povm, pure_statistics, small_product};
use psic_core::certify::{min_rank_pm_search, min_rank_search, SearchConfig};
use psic_core::harness::qutrit_case_two;
use psic_core::povm::tensor_povm;
use psic_core::span::SPAN_TOL;
use psic_core::tomography::pure_state_fit;
use psic_core::{complement, eigh, operator_span};

fn eigensolver(c: &mut Criterion) {
    let mut g = c.benchmark_group("eigh");
    for d in [3, 12, 36] {
        let t = hermitian(d, d as u64);
        g.bench_with_input(BenchmarkId::from_parameter(d), &t, |b, t| b.iter(|| eigh(black_box(t))));
    }
    g.finish();
}

fn spans(c: &mut Criterion) {
    let p = product_povm();
    c.bench_function("operator_span/dim12", |b| b.iter(|| operator_span(black_box(&p), SPAN_TOL)));
    let span = operator_span(&p, SPAN_TOL);
    c.bench_function("complement/dim12", |b| b.iter(|| complement(black_box(&span))));
    let q = qutrit_case_two(4).expect("qutrit");
    c.bench_function("tensor_povm/3x3", |b| b.iter(|| tensor_povm(black_box(&q), black_box(&q))));
}

fn searches(c: &mut Criterion) {
    let comp = product_complement(&small_product());
    let cfg = SearchConfig { starts: 16, ..SearchConfig::with_seed(1) };
    let mut g = c.benchmark_group("min_rank");
    g.sample_size(10);
    g.bench_function("rank/dim6", |b| b.iter(|| min_rank_search(black_box(&comp), &cfg)));
    g.bench_function("rank_pm/dim6", |b| b.iter(|| min_rank_pm_search(black_box(&comp), &cfg)));
    g.finish();
}

fn tomography(c: &mut Criterion) {
    let p = qutrit_case_two(5).expect("qutrit");
    let stats = pure_statistics(&p, 6);
    let mut g = c.benchmark_group("pure_state_fit");
    g.sample_size(20);
    g.bench_function("qutrit/16_starts", |b| b.iter(|| pure_state_fit(black_box(&p), &stats, 16, 7)));
    g.finish();
}

criterion_group!(benches, eigensolver, spans, searches, tomography);
criterion_main!(benches);
