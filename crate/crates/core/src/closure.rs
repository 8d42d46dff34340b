//! Minimal pairs, intrinsic closure inside a finite ambient, external closure,
//! and 0-extensions.

use crate::error::{input, Result};
use crate::predim::{delta_rel, violation, ClassSpec};
use crate::rational::Rational;
use crate::structures::{FiniteStructure, VertexSet};
use std::collections::HashSet;

/// Default cap on `|B∖A|` when listing minimal pairs.
pub const DEFAULT_MAX_EXT: usize = 6;

/// A minimal pair `(base, ext)` with `base ⊊ ext`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct MinimalPair {
    pub base: VertexSet,
    pub ext: VertexSet,
}

/// `X₀ ⊆ X₁ ⊆ … ⊆ X_k`, each step a minimal pair.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct MinimalChain {
    pub sets: Vec<VertexSet>,
}

impl MinimalChain {
    pub fn last(&self) -> Option<VertexSet> {
        self.sets.last().copied()
    }
}

fn check_sets(g: &FiniteStructure, sets: &[VertexSet]) -> Result<()> {
    sets.iter().try_for_each(|s| s.check_within(g.n()))
}

/// Vertices whose membership in a base can affect strongness over `y`.
fn relevant(g: &FiniteStructure, spec: &ClassSpec, y: VertexSet) -> VertexSet {
    let mut r = g.boundary(y);
    if matches!(spec, ClassSpec::AntiCollapse(_)) {
        r = r.union(g.s_closure(y));
    }
    r.minus(y)
}

/// Whether `(base, base ∪ y)` is a minimal pair, for `y` disjoint from `base`.
/// Strongness is inherited by sub-extensions, so only the maximal proper
/// intermediates `base ∪ (y∖v)` need checking.
pub(crate) fn minimal_over(g: &FiniteStructure, spec: &ClassSpec, base: VertexSet, y: VertexSet) -> bool {
    !y.is_empty()
        && violation(g, spec, base, y).is_some()
        && y.iter().all(|v| violation(g, spec, base, y.without(v)).is_none())
}

/// Bases drawn from `pool` that can make `(X', X'∪y)` minimal. Vertices with no
/// edge or `S`-link to `y` change no relative predimension, so bases are taken
/// inside the relevant neighbourhood (plus one witness vertex when the class
/// treats the empty base specially).
fn candidate_bases(g: &FiniteStructure, spec: &ClassSpec, y: VertexSet, pool: VertexSet) -> Vec<VertexSet> {
    let pool = pool.minus(y);
    let rel = relevant(g, spec, y).inter(pool);
    let mut out: Vec<VertexSet> = rel.subsets().collect();
    if matches!(spec, ClassSpec::AllGraphs) {
        if let Some(x) = pool.minus(rel).first() {
            out.push(VertexSet::singleton(x));
        }
    }
    out
}

/// Shrinks a violating set over `base` until it is a minimal-pair extension.
fn shrink(g: &FiniteStructure, spec: &ClassSpec, base: VertexSet, mut y: VertexSet) -> VertexSet {
    'outer: loop {
        for v in y.iter() {
            if let Some(y2) = violation(g, spec, base, y.without(v)) {
                y = y2;
                continue 'outer;
            }
        }
        return y;
    }
}

pub fn is_minimal_pair(ambient: &FiniteStructure, a: VertexSet, b: VertexSet, spec: &ClassSpec) -> Result<bool> {
    check_sets(ambient, &[a, b])?;
    if !a.is_subset(b) {
        return input(format!("A = {a} is not a subset of B = {b}"));
    }
    Ok(minimal_over(ambient, spec, a, b.minus(a)))
}

/// All minimal pairs `(A₀, B)` with `A₀ ⊆ A`, `B ⊄ A` and `|B∖A₀| ≤ max_ext`,
/// ordered by base then extension.
pub fn enumerate_minimal_pairs(
    ambient: &FiniteStructure,
    a: VertexSet,
    spec: &ClassSpec,
    max_ext: usize,
) -> Result<Vec<MinimalPair>> {
    check_sets(ambient, &[a])?;
    let mut out = Vec::new();
    // Minimal-pair extensions are connected: a split extension's predimension is a sum.
    ambient.for_each_connected_subset(ambient.vertices(), max_ext, |y| {
        if !y.is_subset(a) {
            for a0 in a.minus(y).subsets() {
                if minimal_over(ambient, spec, a0, y) {
                    out.push(MinimalPair { base: a0, ext: a0.union(y) });
                }
            }
        }
        true
    });
    out.sort();
    Ok(out)
}

/// A minimal pair `(A, B)` with no `A' ⊊ A` making `(A', B)` minimal.
pub fn is_biminimal_pair(ambient: &FiniteStructure, a: VertexSet, b: VertexSet, spec: &ClassSpec) -> Result<bool> {
    if !is_minimal_pair(ambient, a, b, spec)? {
        return Ok(false);
    }
    Ok(a.subsets().filter(|&s| s != a).all(|a1| !minimal_over(ambient, spec, a1, b.minus(a1))))
}

/// The least closed superset of `a` in `ambient`.
pub fn closure_in(ambient: &FiniteStructure, a: VertexSet, spec: &ClassSpec) -> Result<VertexSet> {
    check_sets(ambient, &[a])?;
    let all = ambient.vertices();
    let mut c = a;
    while let Some(y) = violation(ambient, spec, c, all.minus(c)) {
        c = c.union(shrink(ambient, spec, c, y));
    }
    Ok(c)
}

/// Grows `start` by whole minimal-pair extensions drawn from `allowed`, with
/// bases inside the current set; returns the cumulative levels.
fn grow_levels(g: &FiniteStructure, spec: &ClassSpec, start: VertexSet, allowed: VertexSet) -> Vec<VertexSet> {
    let mut levels = vec![start];
    let mut cur = start;
    loop {
        let mut next = cur;
        g.for_each_connected_subset(allowed, usize::MAX, |y| {
            if !y.is_subset(next) {
                let hit = candidate_bases(g, spec, y, cur).into_iter().any(|b| minimal_over(g, spec, b, y));
                if hit {
                    next = next.union(y);
                }
            }
            true
        });
        if next == cur {
            return levels;
        }
        levels.push(next);
        cur = next;
    }
}

/// `A = L₀ ⊆ L₁ ⊆ …`: each level adds every minimal-pair extension based in the
/// previous level. The last level is the closure.
pub fn closure_levels(ambient: &FiniteStructure, a: VertexSet, spec: &ClassSpec) -> Result<Vec<VertexSet>> {
    check_sets(ambient, &[a])?;
    Ok(grow_levels(ambient, spec, a, ambient.vertices()))
}

/// No minimal pair based in `m` leaves `m`; computed as `m ≤ ambient`.
pub fn is_closed(ambient: &FiniteStructure, m: VertexSet, spec: &ClassSpec) -> Result<bool> {
    check_sets(ambient, &[m])?;
    Ok(violation(ambient, spec, m, ambient.vertices().minus(m)).is_none())
}

/// The same predicate by scanning every minimal pair based in `m`.
pub fn is_closed_literal(ambient: &FiniteStructure, m: VertexSet, spec: &ClassSpec) -> Result<bool> {
    Ok(enumerate_minimal_pairs(ambient, m, spec, ambient.n())?.is_empty())
}

fn check_model_pair(ambient: &FiniteStructure, m: VertexSet, x: VertexSet) -> Result<()> {
    check_sets(ambient, &[m, x])?;
    if !x.is_subset(m) {
        return input(format!("X = {x} is not inside M = {m}"));
    }
    Ok(())
}

/// `ecl_M(X)`: grow `X` by minimal pairs `(X', B)` with `X'` in the current set
/// and `B ∩ M ⊆ X`.
pub fn external_closure(ambient: &FiniteStructure, m: VertexSet, x: VertexSet, spec: &ClassSpec) -> Result<VertexSet> {
    Ok(*external_closure_levels(ambient, m, x, spec)?.last().expect("nonempty levels"))
}

pub fn external_closure_levels(
    ambient: &FiniteStructure,
    m: VertexSet,
    x: VertexSet,
    spec: &ClassSpec,
) -> Result<Vec<VertexSet>> {
    check_model_pair(ambient, m, x)?;
    let allowed = ambient.vertices().minus(m.minus(x));
    Ok(grow_levels(ambient, spec, x, allowed))
}

/// A minimal chain from `X` reaching `target` whose every level meets `M` exactly in `X`.
pub fn external_chain(
    ambient: &FiniteStructure,
    m: VertexSet,
    x: VertexSet,
    spec: &ClassSpec,
    target: usize,
) -> Result<Option<MinimalChain>> {
    let ecl = external_closure(ambient, m, x, spec)?;
    if !ecl.contains(target) {
        return Ok(None);
    }
    let mut chain = MinimalChain { sets: vec![x] };
    let mut c = x;
    while !c.contains(target) {
        let Some(y) = violation(ambient, spec, c, ecl.minus(c)) else {
            return Ok(None);
        };
        c = c.union(shrink(ambient, spec, c, y));
        chain.sets.push(c);
    }
    Ok(Some(chain))
}

/// A chain of `≼_r`-minimal pairs from `x` to `z`, each step of relative predimension 0.
pub fn zero_chain(ambient: &FiniteStructure, x: VertexSet, z: VertexSet, r: Rational) -> Result<Option<MinimalChain>> {
    check_sets(ambient, &[x, z])?;
    if !x.is_subset(z) {
        return input(format!("X = {x} is not inside Z = {z}"));
    }
    let g = ambient.reduct();
    let spec = ClassSpec::KAlphaPlus(r);
    let mut failed = HashSet::new();
    let mut path = vec![x];
    fn dfs(
        g: &FiniteStructure,
        spec: &ClassSpec,
        r: Rational,
        c: VertexSet,
        z: VertexSet,
        failed: &mut HashSet<VertexSet>,
        path: &mut Vec<VertexSet>,
    ) -> bool {
        if c == z {
            return true;
        }
        if failed.contains(&c) {
            return false;
        }
        let mut steps = Vec::new();
        g.for_each_connected_subset(z.minus(c), usize::MAX, |y| {
            steps.push(y);
            true
        });
        steps.sort();
        for y in steps {
            let d = delta_rel(g, y, c, r).expect("in range").value;
            if d == Rational::from_integer(0) && minimal_over(g, spec, c, y) {
                path.push(c.union(y));
                if dfs(g, spec, r, c.union(y), z, failed, path) {
                    return true;
                }
                path.pop();
            }
        }
        failed.insert(c);
        false
    }
    if x != z && dfs(&g, &spec, r, x, z, &mut failed, &mut path) {
        Ok(Some(MinimalChain { sets: path }))
    } else {
        Ok(None)
    }
}

/// Outcome of a proper 0-extension check with the reason for failure.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ZeroExtReport {
    pub proper: bool,
    /// A witnessing 0-chain from `X` to `Z`, if one exists.
    pub chain: Option<MinimalChain>,
    /// `X₀ ⊊ X` over which `(Z∖X) ∪ X₀` is already a 0-extension.
    pub smaller_base: Option<VertexSet>,
    /// Two parts of `Z∖X` with no edges between them.
    pub split: Option<(VertexSet, VertexSet)>,
}

pub fn is_proper_zero_extension(
    ambient: &FiniteStructure,
    x: VertexSet,
    z: VertexSet,
    r: Rational,
) -> Result<ZeroExtReport> {
    check_sets(ambient, &[x, z])?;
    if !x.is_proper_subset(z) {
        return input(format!("need X ⊊ Z, got X = {x}, Z = {z}"));
    }
    let chain = zero_chain(ambient, x, z, r)?;
    let fresh = z.minus(x);
    let zero = Rational::from_integer(0);
    let mut smaller_base = None;
    for x0 in x.subsets().filter(|&s| s != x) {
        let z0 = fresh.union(x0);
        if delta_rel(ambient, z0, x0, r)?.value == zero && zero_chain(ambient, x0, z0, r)?.is_some() {
            smaller_base = Some(x0);
            break;
        }
    }
    let comps = ambient.components(fresh);
    let split = (comps.len() > 1).then(|| (comps[0], fresh.minus(comps[0])));
    Ok(ZeroExtReport { proper: chain.is_some() && smaller_base.is_none() && split.is_none(), chain, smaller_base, split })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r(p: i64, q: i64) -> Rational {
        Rational::new(p, q)
    }
    fn s(t: &str) -> VertexSet {
        VertexSet::parse(t).unwrap()
    }
    fn prec1() -> ClassSpec {
        ClassSpec::k_plus(r(1, 1))
    }
    /// Center 0, leaves 1, 2.
    fn star() -> FiniteStructure {
        FiniteStructure::from_edges(3, &[(0, 1), (0, 2)]).unwrap()
    }

    #[test]
    fn minimal_pair_examples() {
        let e = FiniteStructure::from_edges(2, &[(0, 1)]).unwrap();
        assert!(is_minimal_pair(&e, s("0"), s("0,1"), &prec1()).unwrap());
        assert!(!is_minimal_pair(&e, s("0"), s("0"), &prec1()).unwrap());
        let p = FiniteStructure::from_edges(3, &[(0, 1), (1, 2)]).unwrap();
        assert!(!is_minimal_pair(&p, s("0"), s("0,1,2"), &prec1()).unwrap());
    }

    #[test]
    fn enumerate_examples() {
        let g = star();
        let pairs = enumerate_minimal_pairs(&g, s("0"), &prec1(), DEFAULT_MAX_EXT).unwrap();
        assert_eq!(
            pairs,
            vec![MinimalPair { base: s("0"), ext: s("0,1") }, MinimalPair { base: s("0"), ext: s("0,2") }]
        );
        assert!(enumerate_minimal_pairs(&g, g.vertices(), &prec1(), 6).unwrap().is_empty());
        let iso = FiniteStructure::from_edges(3, &[(0, 1)]).unwrap();
        assert!(enumerate_minimal_pairs(&iso, s("2"), &prec1(), 6).unwrap().is_empty());
    }

    #[test]
    fn biminimal_examples() {
        let e = FiniteStructure::from_edges(2, &[(0, 1)]).unwrap();
        assert!(is_biminimal_pair(&e, s("0"), s("0,1"), &prec1()).unwrap());
        // Dropping the isolated base vertex 1 pushes it into the extension,
        // and ({0}, {0,1,2}) is not minimal since {0,2} already violates.
        let g = FiniteStructure::from_edges(3, &[(0, 2)]).unwrap();
        assert!(is_biminimal_pair(&g, s("0,1"), s("0,1,2"), &prec1()).unwrap());
        // Here ({0}, {0,1,2}) is minimal, so the base {0,1} is not.
        let p = FiniteStructure::from_edges(3, &[(0, 1), (1, 2), (0, 2)]).unwrap();
        assert!(is_minimal_pair(&p, s("0"), s("0,1,2"), &ClassSpec::k_plus(r(2, 3))).unwrap());
        assert!(!is_biminimal_pair(&p, s("0,1"), s("0,1,2"), &ClassSpec::k_plus(r(2, 3))).unwrap());
        let k = FiniteStructure::from_edges(4, &[(3, 0), (3, 1), (3, 2)]).unwrap();
        assert!(is_biminimal_pair(&k, s("0,1,2"), s("0,1,2,3"), &ClassSpec::k(r(1, 2))).unwrap());
    }

    #[test]
    fn closure_examples() {
        let g = star();
        assert_eq!(closure_in(&g, VertexSet::EMPTY, &prec1()).unwrap(), VertexSet::EMPTY);
        assert_eq!(closure_in(&g, s("0"), &prec1()).unwrap(), s("0,1,2"));
        let h = FiniteStructure::from_edges(3, &[(0, 1)]).unwrap();
        assert_eq!(closure_in(&h, s("2"), &prec1()).unwrap(), s("2"));
        assert_eq!(closure_levels(&g, s("0"), &prec1()).unwrap(), vec![s("0"), s("0,1,2")]);
    }

    #[test]
    fn closed_examples() {
        let g = star();
        assert!(is_closed(&g, g.vertices(), &prec1()).unwrap());
        assert!(!is_closed(&g, s("0"), &prec1()).unwrap());
        assert!(!is_closed_literal(&g, s("0"), &prec1()).unwrap());
        let c = closure_in(&g, s("1"), &prec1()).unwrap();
        assert!(is_closed(&g, c, &prec1()).unwrap());
    }

    #[test]
    fn external_closure_examples() {
        let g = star();
        let m = s("0,1");
        assert_eq!(external_closure(&g, m, s("0"), &prec1()).unwrap(), s("0,2"));
        assert_eq!(external_closure(&g, m, s("1"), &prec1()).unwrap(), s("1"));
        assert_eq!(external_closure(&g, m, VertexSet::EMPTY, &prec1()).unwrap(), VertexSet::EMPTY);
        assert!(external_closure(&g, m, s("2"), &prec1()).is_err());
        let chain = external_chain(&g, m, s("0"), &prec1(), 2).unwrap().unwrap();
        assert_eq!(chain.sets, vec![s("0"), s("0,2")]);
    }

    #[test]
    fn zero_extension_examples() {
        let g = FiniteStructure::from_edges(3, &[(2, 0), (2, 1)]).unwrap();
        assert!(is_proper_zero_extension(&g, s("0,1"), s("0,1,2"), r(1, 2)).unwrap().proper);
        let p = FiniteStructure::from_edges(2, &[(0, 1)]).unwrap();
        assert!(is_proper_zero_extension(&p, s("0"), s("0,1"), r(1, 1)).unwrap().proper);
        let two = FiniteStructure::from_edges(4, &[(0, 2), (1, 3)]).unwrap();
        let rep = is_proper_zero_extension(&two, s("0,1"), s("0,1,2,3"), r(1, 1)).unwrap();
        assert!(!rep.proper);
        assert!(rep.split.is_some());
        assert!(is_proper_zero_extension(&p, s("0"), s("0"), r(1, 1)).is_err());
    }

    #[test]
    fn zero_extension_smaller_base() {
        // 2 hangs off 0 only; base {0,1} is not minimal.
        let g = FiniteStructure::from_edges(3, &[(0, 2)]).unwrap();
        let rep = is_proper_zero_extension(&g, s("0,1"), s("0,1,2"), r(1, 1)).unwrap();
        assert!(rep.chain.is_some());
        assert_eq!(rep.smaller_base, Some(s("0")));
        assert!(!rep.proper);
    }
}
