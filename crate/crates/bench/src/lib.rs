//! Fixtures shared by the benchmarks.

use genera_core::fuzz::random_in_class;
use genera_core::{ClassSpec, FiniteStructure, Rational};

pub fn half_plus() -> ClassSpec {
    ClassSpec::KAlphaPlus(Rational::new(1, 2))
}

/// A deterministic member of `spec` with at most `n` vertices.
pub fn member(spec: &ClassSpec, n: usize, seed: u64) -> FiniteStructure {
    random_in_class(spec, n, seed).expect("generation stays in range")
}

/// Two vertices in distinct classes with `k` common neighbours.
pub fn k2(k: usize) -> FiniteStructure {
    let edges: Vec<_> = (2..k + 2).flat_map(|v| [(0, v), (1, v)]).collect();
    let mut g = FiniteStructure::from_edges(k + 2, &edges).expect("fixture");
    g.ensure_partition();
    g
}

/// Path on `n` vertices.
pub fn path(n: usize) -> FiniteStructure {
    let edges: Vec<_> = (1..n).map(|v| (v - 1, v)).collect();
    FiniteStructure::from_edges(n, &edges).expect("fixture")
}
