//! Finite-scale check of the combinatorial hypotheses behind the
//! interpretation of arithmetic: a minimal pair `(A, B)`, parts `V ⊆ U ⊆ B∖A`
//! and a structure `X` over the doubled part `U ⊕_V U′`.

use super::{free_amalgam, free_powers_in_class, GluedTriple};
use crate::closure::{is_biminimal_pair, is_minimal_pair};
use crate::error::{input, Result};
use crate::predim::{class_membership_with, is_strong_with, ClassSpec, Limits};
use crate::structures::{canonical_form, for_each_embedding, is_embedding, FiniteStructure, VertexId, VertexSet};
use std::collections::BTreeSet;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WitnessConfig {
    pub spec: ClassSpec,
    pub b: FiniteStructure,
    pub a: VertexSet,
    pub u: VertexSet,
    pub v: VertexSet,
    pub x: FiniteStructure,
    /// Embedding of the doubled part into `x` (vertex `i` of `W` to `placement[i]`);
    /// searched for when absent.
    pub placement: Option<Vec<VertexId>>,
    pub n_max: usize,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WitnessReport {
    pub holds: bool,
    /// First failing clause (0 to 3) with a description.
    pub failed_clause: Option<(u8, String)>,
    /// The placement used for clauses 2 and 3.
    pub placement: Option<Vec<VertexId>>,
}

impl WitnessReport {
    fn fail(clause: u8, why: String, placement: Option<Vec<VertexId>>) -> Self {
        WitnessReport { holds: false, failed_clause: Some((clause, why)), placement }
    }
}

/// `W = U ⊕_V U′`, with the vertices of `U` first (in ascending order of `b`)
/// and the fresh copy of `U∖V` after. Returns `W` and the image of `V`.
pub fn doubled_part(b: &FiniteStructure, u: VertexSet, v: VertexSet) -> Result<(FiniteStructure, VertexSet)> {
    if !v.is_subset(u) {
        return input(format!("V = {v} is not inside U = {u}"));
    }
    let ustruct = b.restrict(u)?;
    let pos = |w: VertexId| u.iter().position(|x| x == w).expect("v ⊆ u");
    let glue: Vec<(VertexId, VertexId)> = v.iter().map(|w| (pos(w), pos(w))).collect();
    let am = free_amalgam(&GluedTriple { b: ustruct.clone(), c: ustruct, glue })?;
    Ok((am.structure, v.iter().map(pos).collect()))
}

fn check_preconditions(cfg: &WitnessConfig) -> Result<()> {
    cfg.spec.validate()?;
    let all = cfg.b.vertices();
    for (name, s) in [("A", cfg.a), ("U", cfg.u), ("V", cfg.v)] {
        if !s.is_subset(all) {
            return input(format!("{name} = {s} is not a subset of B"));
        }
    }
    if !cfg.a.is_subset(all) || !cfg.u.is_disjoint(cfg.a) {
        return input(format!("U = {} must lie in B∖A", cfg.u));
    }
    if !cfg.v.is_subset(cfg.u) {
        return input(format!("V = {} must lie in U = {}", cfg.v, cfg.u));
    }
    let lim = Limits::unbounded();
    if !class_membership_with(&cfg.b.restrict(cfg.v)?, &cfg.spec, &lim)? {
        return input("V is not in the class");
    }
    if !class_membership_with(&cfg.x, &cfg.spec, &lim)? {
        return input("X is not in the class");
    }
    Ok(())
}

/// Distinct placements of `w` in `x`, one per (image, image of `V`).
fn placements(w: &FiniteStructure, vw: VertexSet, x: &FiniteStructure) -> Vec<Vec<VertexId>> {
    let mut seen = BTreeSet::new();
    let mut out = Vec::new();
    for_each_embedding(w, x, &vec![None; w.n()], |m| {
        let img: VertexSet = m.iter().copied().collect();
        let vimg: VertexSet = vw.iter().map(|i| m[i]).collect();
        if seen.insert((img, vimg)) {
            out.push(m.to_vec());
        }
        true
    });
    out
}

/// `⊕_{i<n}(X_i/V)` together with the map of each copy of `x` into it.
fn power_over(x: &FiniteStructure, base: VertexSet, n: usize) -> Result<(FiniteStructure, Vec<Vec<VertexId>>)> {
    let mut d = x.clone();
    let mut maps = vec![(0..x.n()).collect::<Vec<_>>()];
    for _ in 1..n {
        let glue = base.iter().map(|v| (v, v)).collect();
        let am = free_amalgam(&GluedTriple { b: d, c: x.clone(), glue })?;
        maps.push(am.from_c.clone());
        d = am.structure;
    }
    Ok((d, maps))
}

fn clauses_2_3(cfg: &WitnessConfig, vw: VertexSet, place: &[VertexId]) -> Result<Option<(u8, String)>> {
    let lim = Limits::unbounded();
    let wimg: VertexSet = place.iter().copied().collect();
    let all_x = cfg.x.vertices();
    if wimg == all_x || !is_biminimal_pair(&cfg.x, wimg, all_x, &cfg.spec)? {
        return Ok(Some((2, format!("(W, X) with W at {wimg} is not a biminimal pair"))));
    }
    if !free_powers_in_class(&cfg.x, wimg, &cfg.spec, cfg.n_max)? {
        return Ok(Some((2, format!("some ⊕(X/W) with n ≤ {} leaves the class", cfg.n_max))));
    }
    let vimg: VertexSet = vw.iter().map(|i| place[i]).collect();
    for n in 1..=cfg.n_max {
        let (r, maps) = power_over(&cfg.x, vimg, n)?;
        let left: VertexSet = maps.iter().flat_map(|m| wimg.iter().map(move |v| m[v])).collect();
        let check = is_strong_with(&r, left, r.vertices(), &cfg.spec, &lim)?;
        if !check.strong {
            return Ok(Some((
                3,
                format!(
                    "n={n}: ⊕(W_i/V) is not strong in ⊕(X_i/V), witness {}",
                    check.witness.map(|s| s.to_string()).unwrap_or_default()
                ),
            )));
        }
    }
    Ok(None)
}

/// Checks clauses 0 to 3 and reports the first one that fails. When no
/// placement is given, every placement of `W` in `X` is tried.
pub fn check_arithmetic_witness(cfg: &WitnessConfig) -> Result<WitnessReport> {
    check_preconditions(cfg)?;
    let lim = Limits::unbounded();
    let all_b = cfg.b.vertices();
    if cfg.a == all_b || !is_minimal_pair(&cfg.b, cfg.a, all_b, &cfg.spec)? {
        return Ok(WitnessReport::fail(0, format!("(A, B) with A = {} is not a minimal pair", cfg.a), None));
    }
    if !class_membership_with(&cfg.b, &cfg.spec, &lim)? {
        return Ok(WitnessReport::fail(0, "B is not in the class".into(), None));
    }
    if !free_powers_in_class(&cfg.b, cfg.a, &cfg.spec, cfg.n_max)? {
        return Ok(WitnessReport::fail(0, format!("some ⊕(B/A) with n ≤ {} leaves the class", cfg.n_max), None));
    }
    let (w, vw) = doubled_part(&cfg.b, cfg.u, cfg.v)?;
    let candidates = match &cfg.placement {
        Some(p) => {
            if !is_embedding(&w, &cfg.x, p) {
                return Ok(WitnessReport::fail(1, format!("placement {p:?} is not an embedding of U ⊕_V U′"), None));
            }
            vec![p.clone()]
        }
        None => placements(&w, vw, &cfg.x),
    };
    if candidates.is_empty() {
        return Ok(WitnessReport::fail(1, "U ⊕_V U′ does not embed in X".into(), None));
    }
    let mut first_failure = None;
    for p in candidates {
        match clauses_2_3(cfg, vw, &p)? {
            None => return Ok(WitnessReport { holds: true, failed_clause: None, placement: Some(p) }),
            Some(f) => {
                first_failure.get_or_insert((f, p));
            }
        }
    }
    let ((c, why), p) = first_failure.expect("at least one placement");
    Ok(WitnessReport::fail(c, why, Some(p)))
}

/// Labelled graphs on `n` vertices, one per isomorphism type, in order of edge mask.
fn graphs_up_to_iso(n: usize) -> Vec<FiniteStructure> {
    let slots: Vec<(usize, usize)> = (0..n).flat_map(|v| (0..v).map(move |u| (u, v))).collect();
    let mut seen = BTreeSet::new();
    let mut out = Vec::new();
    for mask in 0u64..(1 << slots.len()) {
        let e: Vec<_> = slots.iter().enumerate().filter(|(i, _)| mask >> i & 1 == 1).map(|(_, &p)| p).collect();
        let g = FiniteStructure::from_edges(n, &e).expect("small graph");
        if seen.insert(canonical_form(&g)) {
            out.push(g);
        }
    }
    out
}

/// Searches graphs with at most `max_vertices` vertices (for both `B` and `X`)
/// for a configuration passing every clause. `X` is built as `W` plus new
/// vertices, so the identity placement is used.
pub fn search_arithmetic_witness(spec: &ClassSpec, max_vertices: usize, n_max: usize) -> Result<Option<WitnessConfig>> {
    if max_vertices > 7 {
        return crate::error::resource("witness search is limited to 7 vertices");
    }
    let lim = Limits::unbounded();
    for nb in 2..=max_vertices {
        for b in graphs_up_to_iso(nb) {
            if !class_membership_with(&b, spec, &lim)? {
                continue;
            }
            let all = b.vertices();
            for a in all.subsets().filter(|&a| a != all && !a.is_empty()) {
                if !is_minimal_pair(&b, a, all, spec)? || !free_powers_in_class(&b, a, spec, n_max)? {
                    continue;
                }
                for u in all.minus(a).subsets().filter(|s| !s.is_empty()) {
                    for v in u.subsets() {
                        if !class_membership_with(&b.restrict(v)?, spec, &lim)? {
                            continue;
                        }
                        let (w, _) = doubled_part(&b, u, v)?;
                        if let Some(cfg) = search_x(spec, &b, a, u, v, &w, max_vertices, n_max)? {
                            return Ok(Some(cfg));
                        }
                    }
                }
            }
        }
    }
    Ok(None)
}

#[allow(clippy::too_many_arguments)]
fn search_x(
    spec: &ClassSpec,
    b: &FiniteStructure,
    a: VertexSet,
    u: VertexSet,
    v: VertexSet,
    w: &FiniteStructure,
    max_vertices: usize,
    n_max: usize,
) -> Result<Option<WitnessConfig>> {
    let lim = Limits::unbounded();
    let k = w.n();
    for nx in k + 1..=max_vertices {
        let slots: Vec<(usize, usize)> = (k..nx).flat_map(|v| (0..v).map(move |u| (u, v))).collect();
        for mask in 0u64..(1 << slots.len()) {
            let mut x = FiniteStructure::new(nx)?;
            for (p, q) in w.edges() {
                x.add_edge(p, q)?;
            }
            for (i, &(p, q)) in slots.iter().enumerate() {
                if mask >> i & 1 == 1 {
                    x.add_edge(p, q)?;
                }
            }
            if !class_membership_with(&x, spec, &lim)? {
                continue;
            }
            let cfg = WitnessConfig {
                spec: spec.clone(),
                b: b.clone(),
                a,
                u,
                v,
                x,
                placement: Some((0..k).collect()),
                n_max,
            };
            if check_arithmetic_witness(&cfg)?.holds {
                return Ok(Some(cfg));
            }
        }
    }
    Ok(None)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::Rational;

    fn half() -> ClassSpec {
        ClassSpec::KAlphaPlus(Rational::new(1, 2))
    }

    fn cherry_config(n_max: usize) -> WitnessConfig {
        // B: a1 = 0, a2 = 1, b = 2 adjacent to both; X: a cherry over W = {0, 1}.
        WitnessConfig {
            spec: half(),
            b: FiniteStructure::from_edges(3, &[(0, 2), (1, 2)]).unwrap(),
            a: VertexSet::parse("0,1").unwrap(),
            u: VertexSet::singleton(2),
            v: VertexSet::EMPTY,
            x: FiniteStructure::from_edges(3, &[(0, 2), (1, 2)]).unwrap(),
            placement: None,
            n_max,
        }
    }

    #[test]
    fn doubled_point_over_nothing() {
        let b = FiniteStructure::from_edges(3, &[(0, 2), (1, 2)]).unwrap();
        let (w, vw) = doubled_part(&b, VertexSet::singleton(2), VertexSet::EMPTY).unwrap();
        assert_eq!(w.n(), 2);
        assert_eq!(w.edge_count(), 0);
        assert!(vw.is_empty());
    }

    #[test]
    fn doubled_edge_over_endpoint() {
        let b = FiniteStructure::from_edges(2, &[(0, 1)]).unwrap();
        let (w, vw) = doubled_part(&b, VertexSet::full(2), VertexSet::singleton(0)).unwrap();
        assert_eq!(w.n(), 3);
        assert_eq!(w.edges(), vec![(0, 1), (0, 2)]);
        assert_eq!(vw, VertexSet::singleton(0));
    }

    #[test]
    fn cherry_holds_with_vacuous_third_clause() {
        let r = check_arithmetic_witness(&cherry_config(0)).unwrap();
        assert!(r.holds, "{r:?}");
    }

    #[test]
    fn third_clause_fails_once_n_is_positive() {
        let r = check_arithmetic_witness(&cherry_config(1)).unwrap();
        assert_eq!(r.failed_clause.map(|c| c.0), Some(3));
    }

    #[test]
    fn containment_failure() {
        let mut cfg = cherry_config(0);
        cfg.x = FiniteStructure::from_edges(2, &[(0, 1)]).unwrap();
        let r = check_arithmetic_witness(&cfg).unwrap();
        assert_eq!(r.failed_clause.map(|c| c.0), Some(1));
    }

    #[test]
    fn malformed_configuration() {
        let mut cfg = cherry_config(0);
        cfg.u = VertexSet::singleton(0);
        assert!(matches!(check_arithmetic_witness(&cfg), Err(crate::Error::Input(_))));
    }

    #[test]
    fn search_finds_a_witness() {
        let found = search_arithmetic_witness(&half(), 4, 0).unwrap().expect("witness");
        assert!(check_arithmetic_witness(&found).unwrap().holds);
    }
}
