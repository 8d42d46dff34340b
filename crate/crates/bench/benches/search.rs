use criterion::{criterion_group, criterion_main, Criterion};
use genera_bench::{half_plus, k2, member, path};
use genera_core::anticollapse::{is_admissible, AntiCollapseParams};
use genera_core::closure::closure_in;
use genera_core::cltp::{CltpEngine, DEFAULT_CLTP_EXT};
use genera_core::predim::{is_strong, verify_granularity};
use genera_core::{ClassSpec, Rational, VertexSet};
use std::hint::black_box;

fn strong_and_closure(c: &mut Criterion) {
    let spec = half_plus();
    let g = member(&spec, 14, 7);
    c.bench_function("strong_empty_in_14", |b| {
        b.iter(|| is_strong(black_box(&g), VertexSet::EMPTY, g.vertices(), &spec).unwrap())
    });
    c.bench_function("closure_singleton_in_14", |b| {
        b.iter(|| closure_in(black_box(&g), VertexSet::singleton(0), &spec).unwrap())
    });
}

fn admissibility(c: &mut Criterion) {
    let p = AntiCollapseParams::new(Rational::new(1, 2), 3).unwrap();
    let g = k2(9);
    c.bench_function("admissible_k2_9", |b| b.iter(|| is_admissible(black_box(&g), &p).unwrap()));
}

fn granularity(c: &mut Criterion) {
    c.bench_function("gamma_half_bound4", |b| b.iter(|| verify_granularity(black_box(Rational::new(1, 2)), 4).unwrap()));
}

fn closure_types(c: &mut Criterion) {
    let spec = ClassSpec::KAlphaPlus(Rational::from_integer(1));
    let g = path(6);
    c.bench_function("cltp_path6_depth2", |b| {
        b.iter(|| CltpEngine::new(&g, &spec, DEFAULT_CLTP_EXT).tree(black_box(&[2, 3]), 2).unwrap())
    });
}

criterion_group!(benches, strong_and_closure, admissibility, granularity, closure_types);
criterion_main!(benches);
