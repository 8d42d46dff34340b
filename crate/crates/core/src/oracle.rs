//! Brute-force reference implementations. Each works straight from the
//! definitions over all subsets or all maps, shares no search code with the
//! optimized paths, and is only usable on very small structures.

use crate::anticollapse::{AntiCollapseParams, MuMode};
use crate::predim::ClassSpec;
use crate::rational::Rational;
use crate::structures::{FiniteStructure, VertexId, VertexSet};

fn edges_among(g: &FiniteStructure, set: VertexSet) -> i64 {
    let v = set.to_vec();
    let mut e = 0;
    for i in 0..v.len() {
        for j in i + 1..v.len() {
            if g.has_edge(v[i], v[j]) {
                e += 1;
            }
        }
    }
    e
}

pub fn delta(g: &FiniteStructure, set: VertexSet, alpha: Rational) -> Rational {
    Rational::from_integer(set.len() as i64) - alpha * Rational::from_integer(edges_among(g, set))
}

fn same_class(g: &FiniteStructure, u: VertexId, v: VertexId) -> bool {
    g.has_partition() && g.class_of(u).contains(v)
}

/// Every `B₀` with `A ⊊ B₀ ⊆ B` satisfies `δ(B₀) − δ(A) ≥ 0` (or `> 0`).
fn predim_strong(g: &FiniteStructure, a: VertexSet, b: VertexSet, alpha: Rational, strict: bool) -> bool {
    let da = delta(g, a, alpha);
    b.minus(a).subsets().filter(|s| !s.is_empty()).all(|s| {
        let d = delta(g, a.union(s), alpha) - da;
        if strict {
            d > Rational::from_integer(0)
        } else {
            d >= Rational::from_integer(0)
        }
    })
}

pub fn strong(g: &FiniteStructure, a: VertexSet, b: VertexSet, spec: &ClassSpec) -> bool {
    assert!(a.is_subset(b));
    match spec {
        ClassSpec::KAlpha(al) => predim_strong(g, a, b, *al, false),
        ClassSpec::KAlphaPlus(al) => predim_strong(g, a, b, *al, true),
        ClassSpec::AllGraphs => a.is_empty() || predim_strong(g, a, b, Rational::from_integer(1), true),
        ClassSpec::AntiCollapse(p) => {
            let straddle = a.iter().any(|u| b.minus(a).iter().any(|v| same_class(g, u, v)));
            !straddle && predim_strong(&g.reduct(), a, b, p.r, true)
        }
    }
}

/// `A ⊊ B`, `A` not strong in `B`, strong in every proper intermediate.
pub fn minimal_pair(g: &FiniteStructure, a: VertexSet, b: VertexSet, spec: &ClassSpec) -> bool {
    a.is_proper_subset(b)
        && !strong(g, a, b, spec)
        && b.minus(a).subsets().filter(|s| s.union(a) != b).all(|s| strong(g, a, a.union(s), spec))
}

pub fn biminimal_pair(g: &FiniteStructure, a: VertexSet, b: VertexSet, spec: &ClassSpec) -> bool {
    minimal_pair(g, a, b, spec) && a.subsets().filter(|&s| s != a).all(|a1| !minimal_pair(g, a1, b, spec))
}

/// Intersection of all closed supersets of `a`.
pub fn closure(g: &FiniteStructure, a: VertexSet, spec: &ClassSpec) -> VertexSet {
    let all = g.vertices();
    let mut out = all;
    for extra in all.minus(a).subsets() {
        let c = a.union(extra);
        if strong(g, c, all, spec) {
            out = out.inter(c);
        }
    }
    out
}

/// Every nonempty subset has non-negative (positive) predimension; for the
/// anti-collapse class, admissibility at the configured cap.
pub fn membership(g: &FiniteStructure, spec: &ClassSpec) -> bool {
    let hered = |alpha: Rational, strict: bool| {
        g.vertices().subsets().filter(|s| !s.is_empty()).all(|s| {
            let d = delta(g, s, alpha);
            if strict {
                d > Rational::from_integer(0)
            } else {
                d >= Rational::from_integer(0)
            }
        })
    };
    match spec {
        ClassSpec::KAlpha(al) => hered(*al, false),
        ClassSpec::KAlphaPlus(al) => hered(*al, true),
        ClassSpec::AllGraphs => true,
        ClassSpec::AntiCollapse(p) => admissible(g, p),
    }
}

/// All total injective maps `dom → cod` preserving and reflecting edges (and
/// `S` when both carry partitions), by trying every injective assignment.
pub fn embeddings(dom: &FiniteStructure, cod: &FiniteStructure) -> Vec<Vec<VertexId>> {
    let mut out = Vec::new();
    let mut map = Vec::new();
    fn rec(dom: &FiniteStructure, cod: &FiniteStructure, map: &mut Vec<VertexId>, out: &mut Vec<Vec<VertexId>>) {
        if map.len() == dom.n() {
            if is_embedding(dom, cod, map) {
                out.push(map.clone());
            }
            return;
        }
        for v in 0..cod.n() {
            if !map.contains(&v) {
                map.push(v);
                rec(dom, cod, map, out);
                map.pop();
            }
        }
    }
    rec(dom, cod, &mut map, &mut out);
    out
}

pub fn is_embedding(dom: &FiniteStructure, cod: &FiniteStructure, map: &[VertexId]) -> bool {
    let s = dom.has_partition() && cod.has_partition();
    (0..dom.n()).all(|i| {
        (0..dom.n()).filter(|&j| j != i).all(|j| {
            dom.has_edge(i, j) == cod.has_edge(map[i], map[j])
                && (!s || same_class(dom, i, j) == same_class(cod, map[i], map[j]))
        })
    })
}

/// `B ⊕ C` gluing `c` onto `b` for each `(b, c)`: vertices of `B`, then the
/// unglued vertices of `C` in order. Returns the structure and the map of `C`.
pub fn free_amalgam(
    b: &FiniteStructure,
    c: &FiniteStructure,
    glue: &[(VertexId, VertexId)],
) -> (FiniteStructure, Vec<VertexId>) {
    let mut cmap = vec![None; c.n()];
    for &(x, y) in glue {
        cmap[y] = Some(x);
    }
    let mut n = b.n();
    let cmap: Vec<VertexId> = cmap
        .into_iter()
        .map(|m| {
            m.unwrap_or_else(|| {
                n += 1;
                n - 1
            })
        })
        .collect();
    let mut d = FiniteStructure::new(n).expect("small");
    for u in 0..b.n() {
        for v in u + 1..b.n() {
            if b.has_edge(u, v) {
                d.add_edge(u, v).expect("in range");
            }
        }
    }
    for u in 0..c.n() {
        for v in u + 1..c.n() {
            if c.has_edge(u, v) {
                d.add_edge(cmap[u], cmap[v]).expect("in range");
            }
        }
    }
    if b.has_partition() || c.has_partition() {
        // Class labels, merged until every related pair shares a label.
        let mut label: Vec<usize> = (0..n).collect();
        let mut related: Vec<(usize, usize)> = Vec::new();
        for u in 0..b.n() {
            for v in 0..b.n() {
                if u != v && same_class(b, u, v) {
                    related.push((u, v));
                }
            }
        }
        for u in 0..c.n() {
            for v in 0..c.n() {
                if u != v && same_class(c, u, v) {
                    related.push((cmap[u], cmap[v]));
                }
            }
        }
        loop {
            let mut changed = false;
            for &(u, v) in &related {
                let m = label[u].min(label[v]);
                if label[u] != m || label[v] != m {
                    let (lu, lv) = (label[u], label[v]);
                    for l in label.iter_mut() {
                        if *l == lu || *l == lv {
                            *l = m;
                        }
                    }
                    changed = true;
                }
            }
            if !changed {
                break;
            }
        }
        let blocks: Vec<VertexSet> =
            (0..n).map(|l| (0..n).filter(|&v| label[v] == l).collect::<VertexSet>()).filter(|b| b.len() > 1).collect();
        d.set_partition(&blocks).expect("disjoint blocks");
    }
    (d, cmap)
}

/// `n` copies of `b` glued along `base`, with the map of each copy.
pub fn free_power(b: &FiniteStructure, base: VertexSet, n: usize) -> (FiniteStructure, Vec<Vec<VertexId>>) {
    let mut d = b.clone();
    let mut maps = vec![(0..b.n()).collect::<Vec<_>>()];
    for _ in 1..n {
        let glue: Vec<(VertexId, VertexId)> = base.iter().map(|v| (v, v)).collect();
        let (d2, m) = free_amalgam(&d, b, &glue);
        d = d2;
        maps.push(m);
    }
    (d, maps)
}

/// `(X, Z)` reached by a chain of `≼_r`-minimal pairs of relative predimension 0.
pub fn zero_extension(g: &FiniteStructure, x: VertexSet, z: VertexSet, r: Rational) -> bool {
    let red = g.reduct();
    let spec = ClassSpec::KAlphaPlus(r);
    fn reach(g: &FiniteStructure, spec: &ClassSpec, r: Rational, cur: VertexSet, z: VertexSet) -> bool {
        if cur == z {
            return true;
        }
        z.minus(cur).subsets().filter(|s| !s.is_empty()).any(|s| {
            let next = cur.union(s);
            delta(g, next, r) == delta(g, cur, r) && minimal_pair(g, cur, next, spec) && reach(g, spec, r, next, z)
        })
    }
    x.is_proper_subset(z) && reach(&red, &spec, r, x, z)
}

pub fn proper_zero_extension(g: &FiniteStructure, x: VertexSet, z: VertexSet, r: Rational) -> bool {
    if !zero_extension(g, x, z, r) {
        return false;
    }
    let rest = z.minus(x);
    if x.subsets().any(|x0| x0 != x && zero_extension(g, x0, rest.union(x0), r)) {
        return false;
    }
    // No split of Z∖X into two nonempty parts without edges between them.
    !rest.subsets().any(|z0| {
        let z1 = rest.minus(z0);
        !z0.is_empty() && !z1.is_empty() && z0.iter().all(|u| z1.iter().all(|v| !g.has_edge(u, v)))
    })
}

pub fn nu(g: &FiniteStructure, set: VertexSet, p: &AntiCollapseParams) -> u64 {
    let gamma = Rational::new(1, *p.r.denom());
    set.subsets()
        .map(|x0| {
            let x1 = set.minus(x0);
            let bound = Rational::from_integer(2) * (delta(g, x0, p.r) + delta(g, x1, p.r)) / gamma;
            let least = bound.ceil().to_integer().max(0) as u64;
            match p.mu_mode {
                MuMode::LeastInteger => least,
                MuMode::Offset(k) => least + k,
            }
        })
        .max()
        .unwrap_or(0)
}

/// Largest family of images of `(x, y)`-copies meeting pairwise only in `x`.
pub fn max_disjoint_copies(g: &FiniteStructure, x: VertexSet, y: VertexSet) -> usize {
    let xs = x.to_vec();
    let extra = y.minus(x).to_vec();
    let mut images: Vec<VertexSet> = Vec::new();
    let mut map = Vec::new();
    fn rec(
        g: &FiniteStructure,
        x: VertexSet,
        xs: &[VertexId],
        extra: &[VertexId],
        map: &mut Vec<VertexId>,
        images: &mut Vec<VertexSet>,
    ) {
        if map.len() == extra.len() {
            let dom: Vec<VertexId> = xs.iter().chain(extra).copied().collect();
            let img: Vec<VertexId> = xs.iter().chain(map.iter()).copied().collect();
            let ok = (0..dom.len()).all(|i| {
                (0..dom.len()).filter(|&j| j != i).all(|j| {
                    g.has_edge(dom[i], dom[j]) == g.has_edge(img[i], img[j])
                        && same_class(g, dom[i], dom[j]) == same_class(g, img[i], img[j])
                })
            });
            let set: VertexSet = map.iter().copied().collect();
            if ok && !images.contains(&set) {
                images.push(set);
            }
            return;
        }
        for v in g.vertices().minus(x).iter() {
            if !map.contains(&v) {
                map.push(v);
                rec(g, x, xs, extra, map, images);
                map.pop();
            }
        }
    }
    rec(g, x, &xs, &extra, &mut map, &mut images);
    fn best(images: &[VertexSet], used: VertexSet) -> usize {
        match images.split_first() {
            None => 0,
            Some((first, rest)) => {
                let skip = best(rest, used);
                if first.is_disjoint(used) {
                    skip.max(1 + best(rest, used.union(*first)))
                } else {
                    skip
                }
            }
        }
    }
    best(&images, VertexSet::EMPTY)
}

/// Clauses 1–3 of admissibility, clause 3 over every `X ⊆ A` and every
/// `Y ⊆ A` with `|Y∖X| ≤ cap`.
pub fn admissible(g: &FiniteStructure, p: &AntiCollapseParams) -> bool {
    let red = g.reduct();
    if !membership(&red, &ClassSpec::KAlphaPlus(p.r)) {
        return false;
    }
    if g.vertices().iter().any(|v| g.class_of(v).len() >= p.n) {
        return false;
    }
    let all = g.vertices();
    for x in all.subsets() {
        let homogeneous = x.iter().all(|u| x.iter().all(|v| u == v || same_class(g, u, v)));
        if homogeneous {
            continue;
        }
        for z in all.minus(x).subsets() {
            if z.is_empty() || z.len() > p.zero_ext_cap {
                continue;
            }
            let y = x.union(z);
            if proper_zero_extension(g, x, y, p.r) && max_disjoint_copies(g, x, y) as u64 > nu(g, x, p) {
                return false;
            }
        }
    }
    true
}

/// The doubled part `U ⊕_V U′` built directly: `U` in order, then a fresh
/// copy of `U∖V`. Returns it with the positions of `V`.
pub fn doubled_part(b: &FiniteStructure, u: VertexSet, v: VertexSet) -> (FiniteStructure, VertexSet) {
    let us = u.to_vec();
    let fresh: Vec<VertexId> = u.minus(v).to_vec();
    let n = us.len() + fresh.len();
    // Vertex i < |U| is us[i]; vertex |U| + j is the copy of fresh[j].
    let orig = |i: usize| if i < us.len() { us[i] } else { fresh[i - us.len()] };
    let copy = |i: usize| i >= us.len();
    let mut w = FiniteStructure::new(n).expect("small");
    for i in 0..n {
        for j in i + 1..n {
            let linked = b.has_edge(orig(i), orig(j));
            let cross = copy(i) != copy(j);
            // Copies of U∖V meet the original only through V.
            let allowed = !cross || v.contains(orig(i)) || v.contains(orig(j));
            if linked && allowed && orig(i) != orig(j) {
                w.add_edge(i, j).expect("in range");
            }
        }
    }
    (w, (0..us.len()).filter(|&i| v.contains(us[i])).collect())
}

/// First failing clause (0–3) of the arithmetic-witness hypotheses, trying
/// every placement of the doubled part in `x` (`None` means all hold).
pub fn arithmetic_witness(
    spec: &ClassSpec,
    b: &FiniteStructure,
    a: VertexSet,
    u: VertexSet,
    v: VertexSet,
    x: &FiniteStructure,
    n_max: usize,
) -> Option<u8> {
    let all_b = b.vertices();
    let powers_in_class = |s: &FiniteStructure, base: VertexSet| {
        (1..=n_max).all(|n| membership(&free_power(s, base, n).0, spec))
    };
    if !minimal_pair(b, a, all_b, spec) || !membership(b, spec) || !powers_in_class(b, a) {
        return Some(0);
    }
    let (w, vw) = doubled_part(b, u, v);
    let mut seen: Vec<(VertexSet, VertexSet)> = Vec::new();
    let mut first = None;
    for m in embeddings(&w, x) {
        let img: VertexSet = m.iter().copied().collect();
        let vimg: VertexSet = vw.iter().map(|i| m[i]).collect();
        if seen.contains(&(img, vimg)) {
            continue;
        }
        seen.push((img, vimg));
        let all_x = x.vertices();
        let failure = if !biminimal_pair(x, img, all_x, spec) || !powers_in_class(x, img) {
            Some(2)
        } else if (1..=n_max).any(|n| {
            let (r, maps) = free_power(x, vimg, n);
            let left: VertexSet = maps.iter().flat_map(|mp| img.iter().map(move |q| mp[q])).collect();
            !strong(&r, left, r.vertices(), spec)
        }) {
            Some(3)
        } else {
            None
        };
        match failure {
            None => return None,
            Some(c) => {
                first.get_or_insert(c);
            }
        }
    }
    Some(first.unwrap_or(1))
}
