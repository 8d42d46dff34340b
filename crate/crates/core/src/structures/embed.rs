use super::graph::FiniteStructure;
use super::vertex_set::{VertexId, VertexSet};
use crate::error::{input, Result};

/// Injective map `dom[i] -> map[i]` preserving and reflecting edges, and `S`
/// when both sides carry a partition.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Embedding {
    pub map: Vec<VertexId>,
}

impl Embedding {
    pub fn image(&self) -> VertexSet {
        self.map.iter().copied().collect()
    }

    pub fn apply(&self, set: VertexSet) -> VertexSet {
        set.iter().map(|v| self.map[v]).collect()
    }
}

/// A structure `Y` with a distinguished copy of a base `X`: `base[i]` is the
/// vertex of `structure` that must land on the `i`-th smallest vertex of `X`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Pattern {
    pub structure: FiniteStructure,
    pub base: Vec<VertexId>,
}

impl Pattern {
    /// The pattern induced on `y` in `ambient`, based at `x ⊆ y`.
    pub fn from_subsets(ambient: &FiniteStructure, x: VertexSet, y: VertexSet) -> Result<Pattern> {
        if !x.is_subset(y) {
            return input(format!("base {x} is not inside {y}"));
        }
        let ind = ambient.induced(y)?;
        let base = x.iter().map(|v| ind.map.iter().position(|&w| w == v).expect("x ⊆ y")).collect();
        Ok(Pattern { structure: ind.structure, base })
    }

    pub fn base_set(&self) -> VertexSet {
        self.base.iter().copied().collect()
    }

    pub fn extension_size(&self) -> usize {
        self.structure.n() - self.base.len()
    }
}

fn respects_s(a: &FiniteStructure, b: &FiniteStructure) -> bool {
    a.has_partition() && b.has_partition()
}

/// Checks the embedding conditions for a total map.
pub fn is_embedding(dom: &FiniteStructure, cod: &FiniteStructure, map: &[VertexId]) -> bool {
    if map.len() != dom.n() || map.iter().any(|&v| v >= cod.n()) {
        return false;
    }
    let img: VertexSet = map.iter().copied().collect();
    if img.len() != map.len() {
        return false;
    }
    let s = respects_s(dom, cod);
    for u in 0..dom.n() {
        for v in u + 1..dom.n() {
            if dom.has_edge(u, v) != cod.has_edge(map[u], map[v]) {
                return false;
            }
            if s && dom.same_class(u, v) != cod.same_class(map[u], map[v]) {
                return false;
            }
        }
    }
    true
}

/// Visits every embedding of `dom` into `cod` extending `partial` (where
/// `partial[v] = Some(w)` pins `v`). Free vertices are assigned in ascending
/// order with ascending candidates, so visits are lexicographic in the image
/// tuple. The visitor returns `false` to stop. Returns whether the walk finished.
pub fn for_each_embedding(
    dom: &FiniteStructure,
    cod: &FiniteStructure,
    partial: &[Option<VertexId>],
    mut visit: impl FnMut(&[VertexId]) -> bool,
) -> bool {
    let n = dom.n();
    debug_assert_eq!(partial.len(), n);
    let s = respects_s(dom, cod);
    let mut map: Vec<VertexId> = vec![usize::MAX; n];
    let mut assigned: Vec<VertexId> = Vec::new();
    let mut used = VertexSet::EMPTY;
    for v in 0..n {
        if let Some(w) = partial[v] {
            if w >= cod.n() || used.contains(w) {
                return true;
            }
            for &u in &assigned {
                if dom.has_edge(u, v) != cod.has_edge(map[u], w)
                    || (s && dom.same_class(u, v) != cod.same_class(map[u], w))
                {
                    return true;
                }
            }
            map[v] = w;
            used.insert(w);
            assigned.push(v);
        }
    }
    let free: Vec<VertexId> = (0..n).filter(|&v| partial[v].is_none()).collect();
    fn rec(
        dom: &FiniteStructure,
        cod: &FiniteStructure,
        s: bool,
        free: &[VertexId],
        k: usize,
        map: &mut Vec<VertexId>,
        assigned: &mut Vec<VertexId>,
        used: VertexSet,
        visit: &mut dyn FnMut(&[VertexId]) -> bool,
    ) -> bool {
        if k == free.len() {
            return visit(map);
        }
        let v = free[k];
        let mut cand = cod.vertices().minus(used);
        for &u in assigned.iter() {
            let fu = map[u];
            cand = if dom.has_edge(u, v) { cand.inter(cod.neighbors(fu)) } else { cand.minus(cod.neighbors(fu)) };
            if s {
                let cls = cod.class_of(fu);
                cand = if dom.same_class(u, v) { cand.inter(cls) } else { cand.minus(cls) };
            }
        }
        for w in cand.iter() {
            map[v] = w;
            assigned.push(v);
            let go = rec(dom, cod, s, free, k + 1, map, assigned, used.with(w), visit);
            assigned.pop();
            if !go {
                return false;
            }
        }
        map[v] = usize::MAX;
        true
    }
    rec(dom, cod, s, &free, 0, &mut map, &mut assigned, used, &mut visit)
}

/// All embeddings of `dom` into `cod`, lexicographic in image tuples.
pub fn all_embeddings(dom: &FiniteStructure, cod: &FiniteStructure) -> Vec<Embedding> {
    let mut out = Vec::new();
    for_each_embedding(dom, cod, &vec![None; dom.n()], |m| {
        out.push(Embedding { map: m.to_vec() });
        true
    });
    out
}

/// Automorphisms of `s` (respecting `S` when present).
pub fn automorphisms(s: &FiniteStructure) -> Vec<Embedding> {
    all_embeddings(s, s)
}

pub fn is_isomorphic(a: &FiniteStructure, b: &FiniteStructure) -> bool {
    a.n() == b.n()
        && a.edge_count() == b.edge_count()
        && !for_each_embedding(a, b, &vec![None; a.n()], |_| false)
}

fn pinned(ambient: &FiniteStructure, x: VertexSet, pattern: &Pattern) -> Result<Vec<Option<VertexId>>> {
    x.check_within(ambient.n())?;
    let y = &pattern.structure;
    if pattern.base.len() != x.len() {
        return input(format!("pattern base has {} vertices but X = {x} has {}", pattern.base.len(), x.len()));
    }
    let bset = pattern.base_set();
    if bset.len() != pattern.base.len() || !bset.is_subset(y.vertices()) {
        return input("pattern base is not a set of distinct pattern vertices");
    }
    let mut partial = vec![None; y.n()];
    for (&p, a) in pattern.base.iter().zip(x.iter()) {
        partial[p] = Some(a);
    }
    let s = respects_s(y, ambient);
    for (i, &p) in pattern.base.iter().enumerate() {
        for (j, &q) in pattern.base.iter().enumerate().skip(i + 1) {
            let (a, b) = (partial[p].unwrap(), partial[q].unwrap());
            if y.has_edge(p, q) != ambient.has_edge(a, b) || (s && y.same_class(p, q) != ambient.same_class(a, b)) {
                return input(format!("pattern base does not match X = {x} (positions {i}, {j})"));
            }
        }
    }
    Ok(partial)
}

/// Every embedding of the pattern into `ambient` sending the base onto `x`
/// pointwise, in lexicographic order of image tuples.
pub fn copies_over_base(ambient: &FiniteStructure, x: VertexSet, pattern: &Pattern) -> Result<Vec<Embedding>> {
    let partial = pinned(ambient, x, pattern)?;
    let mut out = Vec::new();
    for_each_embedding(&pattern.structure, ambient, &partial, |m| {
        out.push(Embedding { map: m.to_vec() });
        true
    });
    Ok(out)
}

/// Visits copies over `x` until the visitor returns `false`.
pub fn visit_copies_over_base(
    ambient: &FiniteStructure,
    x: VertexSet,
    pattern: &Pattern,
    visit: impl FnMut(&[VertexId]) -> bool,
) -> Result<()> {
    let partial = pinned(ambient, x, pattern)?;
    for_each_embedding(&pattern.structure, ambient, &partial, visit);
    Ok(())
}
