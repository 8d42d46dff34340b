//! Predimension `δ_α(A) = |A| − α·e(A)` and the strong-extension relations.

use crate::anticollapse::{self, AntiCollapseParams};
use crate::error::{input, resource, Result};
use crate::rational::{format_rational, parse_rational, Rational};
use crate::structures::{FiniteStructure, VertexSet};
use std::fmt;
use std::sync::OnceLock;

/// The amalgamation class in force.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum ClassSpec {
    /// `(K_α, ≤_α)`: hereditarily non-negative predimension.
    KAlpha(Rational),
    /// `(K_α⁺, ≼_α)`: hereditarily positive predimension.
    KAlphaPlus(Rational),
    /// `(K_r*, ≼*)`: the anti-collapse class over graphs with an `S`-partition.
    AntiCollapse(AntiCollapseParams),
    /// All finite graphs with `A ≼ B` iff `A = ∅` or `A ≼_1 B`.
    AllGraphs,
}

impl ClassSpec {
    pub fn k(alpha: Rational) -> Self {
        ClassSpec::KAlpha(alpha)
    }

    pub fn k_plus(alpha: Rational) -> Self {
        ClassSpec::KAlphaPlus(alpha)
    }

    /// The coefficient used in δ.
    pub fn alpha(&self) -> Rational {
        match self {
            ClassSpec::KAlpha(a) | ClassSpec::KAlphaPlus(a) => *a,
            ClassSpec::AntiCollapse(p) => p.r,
            ClassSpec::AllGraphs => Rational::from_integer(1),
        }
    }

    /// Whether strongness demands strictly positive relative predimension.
    pub fn strict(&self) -> bool {
        !matches!(self, ClassSpec::KAlpha(_))
    }

    pub fn validate(&self) -> Result<()> {
        match self {
            ClassSpec::KAlpha(a) | ClassSpec::KAlphaPlus(a) if *a < Rational::from_integer(0) => {
                input(format!("α must be non-negative, got {}", format_rational(a)))
            }
            ClassSpec::AntiCollapse(p) => p.validate(),
            _ => Ok(()),
        }
    }

    /// Parses `K:α`, `K+:α`, `K*:r:N[:cap]` or `Kf`.
    pub fn parse(text: &str) -> Result<Self> {
        let t = text.trim();
        let parts: Vec<&str> = t.split(':').map(str::trim).collect();
        let head = parts[0].to_ascii_lowercase();
        let spec = match (head.as_str(), parts.len()) {
            ("k" | "kalpha", 2) => ClassSpec::KAlpha(parse_rational(parts[1])?),
            ("k+" | "kplus" | "kalphaplus", 2) => ClassSpec::KAlphaPlus(parse_rational(parts[1])?),
            ("k*" | "star" | "anticollapse", 3 | 4) => {
                let r = parse_rational(parts[1])?;
                let n = parts[2].parse().map_err(|_| crate::Error::Input(format!("bad N `{}`", parts[2])))?;
                let mut p = AntiCollapseParams::new(r, n)?;
                if parts.len() == 4 {
                    p.zero_ext_cap =
                        parts[3].parse().map_err(|_| crate::Error::Input(format!("bad cap `{}`", parts[3])))?;
                }
                ClassSpec::AntiCollapse(p)
            }
            ("kf" | "all", 1) => ClassSpec::AllGraphs,
            _ => return input(format!("unknown class spec `{t}` (use K:α, K+:α, K*:r:N[:cap] or Kf)")),
        };
        spec.validate()?;
        Ok(spec)
    }
}

impl fmt::Display for ClassSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ClassSpec::KAlpha(a) => write!(f, "K:{}", format_rational(a)),
            ClassSpec::KAlphaPlus(a) => write!(f, "K+:{}", format_rational(a)),
            ClassSpec::AntiCollapse(p) => write!(f, "K*:{}:{}:{}", format_rational(&p.r), p.n, p.zero_ext_cap),
            ClassSpec::AllGraphs => write!(f, "Kf"),
        }
    }
}

/// Search budgets for subset searches.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Limits {
    /// Largest `|B∖A|` a user-facing strong check will attempt.
    pub strong_cap: usize,
}

impl Limits {
    pub const DEFAULT_STRONG_CAP: usize = 16;

    /// Reads `GENERA_MAX_SUBSET_BITS` once; falls back to the default cap.
    pub fn from_env() -> Self {
        static CAP: OnceLock<usize> = OnceLock::new();
        let cap = *CAP.get_or_init(|| {
            std::env::var("GENERA_MAX_SUBSET_BITS")
                .ok()
                .and_then(|v| v.trim().parse().ok())
                .unwrap_or(Self::DEFAULT_STRONG_CAP)
        });
        Limits { strong_cap: cap }
    }

    pub fn with_cap(strong_cap: usize) -> Self {
        Limits { strong_cap }
    }

    /// No cap beyond the 64-vertex structure limit.
    pub fn unbounded() -> Self {
        Limits { strong_cap: usize::MAX }
    }
}

impl Default for Limits {
    fn default() -> Self {
        Limits::from_env()
    }
}

/// `δ_α` of the substructure induced on `set`.
pub fn delta(s: &FiniteStructure, set: VertexSet, alpha: Rational) -> Rational {
    Rational::from_integer(set.len() as i64) - alpha * Rational::from_integer(s.edges_in(set) as i64)
}

/// `δ_α` of a whole structure.
pub fn delta_structure(s: &FiniteStructure, alpha: Rational) -> Rational {
    delta(s, s.vertices(), alpha)
}

/// Relative predimension `δ(B/A) = δ(A∪B) − δ(A)` with its edge bookkeeping.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RelDelta {
    pub value: Rational,
    /// `|B∖A|`.
    pub new_vertices: usize,
    /// Edges inside `B∖A`.
    pub internal_edges: usize,
    /// Edges from `B∖A` into `A`.
    pub edge_boundary: usize,
}

pub fn delta_rel(ambient: &FiniteStructure, b: VertexSet, a: VertexSet, alpha: Rational) -> Result<RelDelta> {
    a.check_within(ambient.n())?;
    b.check_within(ambient.n())?;
    let value = delta(ambient, a.union(b), alpha) - delta(ambient, a, alpha);
    let fresh = b.minus(a);
    let out = RelDelta {
        value,
        new_vertices: fresh.len(),
        internal_edges: ambient.edges_in(fresh),
        edge_boundary: ambient.edges_between(fresh, a),
    };
    debug_assert_eq!(
        out.value,
        Rational::from_integer(out.new_vertices as i64)
            - alpha * Rational::from_integer((out.internal_edges + out.edge_boundary) as i64)
    );
    Ok(out)
}

/// `α = p/q` for integer-scaled predimension arithmetic: `q·δ = q·|Y| − p·e`.
#[derive(Clone, Copy, Debug)]
pub(crate) struct Scaled {
    pub p: i64,
    pub q: i64,
}

impl Scaled {
    pub fn new(alpha: Rational) -> Self {
        Scaled { p: *alpha.numer(), q: *alpha.denom() }
    }

    pub fn value(self, vertices: usize, edges: usize) -> i64 {
        self.q * vertices as i64 - self.p * edges as i64
    }
}

/// Finds a nonempty connected `Y ⊆ region` whose predimension over `base` is
/// negative (or non-positive when `strict`). Any bad extension has a bad
/// connected component, so restricting to connected sets loses nothing.
pub(crate) fn find_violation(
    g: &FiniteStructure,
    base: VertexSet,
    region: VertexSet,
    w: Scaled,
    strict: bool,
) -> Option<VertexSet> {
    let ctx = Ctx { g, base, region, w, strict };
    let mut forbidden = VertexSet::EMPTY;
    for r in region.iter() {
        let s = VertexSet::singleton(r);
        let f = w.value(1, g.neighbors(r).inter(base).len());
        let ext = g.neighbors(r).inter(region).minus(forbidden).minus(s);
        if let Some(y) = ctx.grow(s, f, ext, forbidden) {
            return Some(y);
        }
        forbidden.insert(r);
    }
    None
}

struct Ctx<'a> {
    g: &'a FiniteStructure,
    base: VertexSet,
    region: VertexSet,
    w: Scaled,
    strict: bool,
}

impl Ctx<'_> {
    fn bad(&self, f: i64) -> bool {
        if self.strict {
            f <= 0
        } else {
            f < 0
        }
    }

    fn grow(&self, s: VertexSet, f: i64, ext: VertexSet, forbidden: VertexSet) -> Option<VertexSet> {
        if self.bad(f) {
            return Some(s);
        }
        let reach = self.region.minus(forbidden).minus(s);
        if reach.is_empty() {
            return None;
        }
        // 2·f(S∪Z) ≥ 2f(S) + Σ_z min(0, 2q − 2p·deg(z, base∪S) − p·deg(z, reach)).
        let anchor = self.base.union(s);
        let (p, q) = (self.w.p, self.w.q);
        let mut bound = 2 * f;
        for z in reach.iter() {
            let nz = self.g.neighbors(z);
            let c = 2 * q - 2 * p * nz.inter(anchor).len() as i64 - p * nz.inter(reach).len() as i64;
            bound += c.min(0);
        }
        let hopeless = if self.strict { bound > 0 } else { bound >= 0 };
        if hopeless {
            return None;
        }
        let mut ext = ext;
        let mut forb = forbidden;
        while let Some(u) = ext.first() {
            ext.remove(u);
            let s2 = s.with(u);
            let f2 = f + q - p * self.g.neighbors(u).inter(anchor).len() as i64;
            let ext2 = ext.union(self.g.neighbors(u).inter(self.region)).minus(s2).minus(forb);
            if let Some(y) = self.grow(s2, f2, ext2, forb) {
                return Some(y);
            }
            forb.insert(u);
        }
        None
    }
}

/// Outcome of a strong-extension check.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StrongCheck {
    pub strong: bool,
    /// When not strong: an intermediate `B₀` with `A ⊊ B₀ ⊆ B` violating the condition.
    pub witness: Option<VertexSet>,
}

/// Finds `Y ⊆ region` (nonempty) such that `base ∪ Y` violates strongness over
/// `base`, with no cap. `None` means `base ≤ base ∪ region`.
pub(crate) fn violation(g: &FiniteStructure, spec: &ClassSpec, base: VertexSet, region: VertexSet) -> Option<VertexSet> {
    let region = region.minus(base);
    if region.is_empty() {
        return None;
    }
    match spec {
        ClassSpec::AllGraphs if base.is_empty() => None,
        ClassSpec::AntiCollapse(_) => {
            let mates = g.s_closure(base).inter(region);
            if let Some(v) = mates.first() {
                return Some(VertexSet::singleton(v));
            }
            find_violation(g, base, region, Scaled::new(spec.alpha()), true)
        }
        _ => find_violation(g, base, region, Scaled::new(spec.alpha()), spec.strict()),
    }
}

/// Whether `A ≤ B` (resp. `A ≼ B`, `A ≼* B`) inside `ambient`, with the default cap.
pub fn is_strong(ambient: &FiniteStructure, a: VertexSet, b: VertexSet, spec: &ClassSpec) -> Result<StrongCheck> {
    is_strong_with(ambient, a, b, spec, &Limits::default())
}

pub fn is_strong_with(
    ambient: &FiniteStructure,
    a: VertexSet,
    b: VertexSet,
    spec: &ClassSpec,
    limits: &Limits,
) -> Result<StrongCheck> {
    a.check_within(ambient.n())?;
    b.check_within(ambient.n())?;
    if !a.is_subset(b) {
        return input(format!("A = {a} is not a subset of B = {b}"));
    }
    let fresh = b.minus(a);
    if fresh.len() > limits.strong_cap {
        return resource(format!("|B∖A| = {} exceeds the strong-check cap {}", fresh.len(), limits.strong_cap));
    }
    Ok(match violation(ambient, spec, a, fresh) {
        None => StrongCheck { strong: true, witness: None },
        Some(y) => StrongCheck { strong: false, witness: Some(a.union(y)) },
    })
}

/// Membership of a whole structure in the class.
pub fn class_membership(s: &FiniteStructure, spec: &ClassSpec) -> Result<bool> {
    class_membership_with(s, spec, &Limits::default())
}

pub fn class_membership_with(s: &FiniteStructure, spec: &ClassSpec, limits: &Limits) -> Result<bool> {
    match spec {
        ClassSpec::AllGraphs => Ok(true),
        ClassSpec::AntiCollapse(p) => Ok(anticollapse::is_admissible_with(s, p, limits)?.admissible),
        ClassSpec::KAlpha(_) | ClassSpec::KAlphaPlus(_) => {
            if s.n() > limits.strong_cap {
                return resource(format!("{} vertices exceeds the subset-search cap {}", s.n(), limits.strong_cap));
            }
            Ok(violation(s, spec, VertexSet::EMPTY, s.vertices()).is_none())
        }
    }
}

/// Granularity `γ = 1/q` for `r = p/q` with `0 < r < 1`.
pub fn granularity(r: Rational) -> Result<Rational> {
    let zero = Rational::from_integer(0);
    let one = Rational::from_integer(1);
    if r <= zero || r >= one {
        return input(format!("granularity needs 0 < r < 1, got {}", format_rational(&r)));
    }
    Ok(Rational::new(1, *r.denom()))
}

/// Exhaustive confirmation of the granularity over all pairs `A ⊆ B`, `|B| ≤ bound`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GranularityReport {
    pub gamma: Rational,
    pub pairs_checked: u64,
    /// Every negative `δ(B/A)` was `≤ −γ`.
    pub bound_holds: bool,
    /// Some pair attains `δ(B/A) = −γ`.
    pub attained: bool,
    /// A pair `(graph, A, B)` attaining `−γ`, if any.
    pub attaining: Option<(FiniteStructure, VertexSet, VertexSet)>,
}

/// Enumerates every labelled graph on `bound` vertices and every `A ⊆ B` inside it
/// (pairs on fewer vertices appear as induced subsets).
pub fn verify_granularity(r: Rational, bound: usize) -> Result<GranularityReport> {
    let gamma = granularity(r)?;
    if bound > 7 {
        return resource(format!("granularity enumeration bound {bound} exceeds 7"));
    }
    let w = Scaled::new(r);
    let pairs: Vec<(usize, usize)> = (0..bound).flat_map(|i| (i + 1..bound).map(move |j| (i, j))).collect();
    let full = 1u64 << bound;
    let mut report =
        GranularityReport { gamma, pairs_checked: 0, bound_holds: true, attained: false, attaining: None };
    let mut edges_of = vec![0usize; full as usize];
    for gmask in 0u64..(1u64 << pairs.len()) {
        let es: Vec<(usize, usize)> =
            pairs.iter().enumerate().filter(|(k, _)| gmask >> k & 1 == 1).map(|(_, &e)| e).collect();
        let g = FiniteStructure::from_edges(bound, &es)?;
        for m in 0..full {
            edges_of[m as usize] = g.edges_in(VertexSet(m));
        }
        for b in 0..full {
            for a in VertexSet(b).subsets() {
                report.pairs_checked += 1;
                let k = (b & !a.0).count_ones() as usize;
                let scaled = w.value(k, edges_of[b as usize] - edges_of[a.0 as usize]);
                // scaled = q·δ(B/A); δ ≤ −1/q ⇔ scaled ≤ −1.
                if scaled < 0 && scaled > -1 {
                    report.bound_holds = false;
                }
                if scaled == -1 && !report.attained {
                    report.attained = true;
                    report.attaining = Some((g.clone(), a, VertexSet(b)));
                }
            }
        }
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r(p: i64, q: i64) -> Rational {
        Rational::new(p, q)
    }

    fn tri() -> FiniteStructure {
        FiniteStructure::from_edges(3, &[(0, 1), (1, 2), (0, 2)]).unwrap()
    }

    fn c4() -> FiniteStructure {
        FiniteStructure::from_edges(4, &[(0, 1), (1, 2), (2, 3), (3, 0)]).unwrap()
    }

    #[test]
    fn delta_values() {
        assert_eq!(delta_structure(&FiniteStructure::empty(), r(1, 2)), r(0, 1));
        assert_eq!(delta_structure(&tri(), r(1, 2)), r(3, 2));
        assert_eq!(delta_structure(&c4(), r(1, 1)), r(0, 1));
    }

    #[test]
    fn delta_rel_values() {
        let e = FiniteStructure::from_edges(2, &[(0, 1)]).unwrap();
        let a = VertexSet::singleton(0);
        assert_eq!(delta_rel(&e, a, a, r(1, 1)).unwrap().value, r(0, 1));
        assert_eq!(delta_rel(&e, e.vertices(), a, r(1, 1)).unwrap().value, r(0, 1));
        let k13 = FiniteStructure::from_edges(4, &[(3, 0), (3, 1), (3, 2)]).unwrap();
        let d = delta_rel(&k13, k13.vertices(), VertexSet::parse("0,1,2").unwrap(), r(1, 2)).unwrap();
        assert_eq!(d.value, r(-1, 2));
        assert_eq!(d.edge_boundary, 3);
        assert!(delta_rel(&k13, VertexSet::singleton(9), a, r(1, 2)).is_err());
    }

    #[test]
    fn membership_examples() {
        let one = FiniteStructure::new(1).unwrap();
        for spec in [ClassSpec::k(r(1, 1)), ClassSpec::k_plus(r(1, 2)), ClassSpec::AllGraphs] {
            assert!(class_membership(&one, &spec).unwrap());
        }
        assert!(class_membership(&c4(), &ClassSpec::k(r(1, 1))).unwrap());
        assert!(!class_membership(&c4(), &ClassSpec::k_plus(r(1, 1))).unwrap());
        assert!(class_membership(&FiniteStructure::empty(), &ClassSpec::k_plus(r(1, 1))).unwrap());
    }

    #[test]
    fn strong_examples() {
        let e = FiniteStructure::from_edges(2, &[(0, 1)]).unwrap();
        let a = VertexSet::singleton(0);
        let all = e.vertices();
        let le = ClassSpec::k(r(1, 1));
        let prec = ClassSpec::k_plus(r(1, 1));
        assert!(is_strong(&e, a, a, &prec).unwrap().strong);
        assert!(is_strong(&e, VertexSet::EMPTY, all, &le).unwrap().strong);
        assert!(is_strong(&e, a, all, &le).unwrap().strong);
        let c = is_strong(&e, a, all, &prec).unwrap();
        assert!(!c.strong);
        assert_eq!(c.witness, Some(all));
        assert!(is_strong(&e, all, a, &le).is_err());
    }

    #[test]
    fn strong_cap_is_resource_error() {
        let g = FiniteStructure::new(5).unwrap();
        let err = is_strong_with(&g, VertexSet::EMPTY, g.vertices(), &ClassSpec::k(r(1, 1)), &Limits::with_cap(4));
        assert!(matches!(err, Err(crate::Error::Resource(_))));
    }

    #[test]
    fn all_graphs_empty_base() {
        let t = tri();
        assert!(is_strong(&t, VertexSet::EMPTY, t.vertices(), &ClassSpec::AllGraphs).unwrap().strong);
        assert!(!is_strong(&t, VertexSet::singleton(0), t.vertices(), &ClassSpec::AllGraphs).unwrap().strong);
    }

    #[test]
    fn granularity_values() {
        assert_eq!(granularity(r(1, 2)).unwrap(), r(1, 2));
        assert_eq!(granularity(r(2, 3)).unwrap(), r(1, 3));
        assert_eq!(granularity(r(1, 3)).unwrap(), r(1, 3));
        assert!(granularity(r(1, 1)).is_err());
        assert!(granularity(r(0, 1)).is_err());
    }

    #[test]
    fn granularity_small_enumeration() {
        let rep = verify_granularity(r(2, 3), 4).unwrap();
        assert!(rep.bound_holds && rep.attained);
    }

    #[test]
    fn spec_parse_round_trip() {
        for s in ["K:1/2", "K+:1", "K*:1/2:3:5", "Kf"] {
            assert_eq!(ClassSpec::parse(s).unwrap().to_string(), s);
        }
        assert_eq!(ClassSpec::parse("K*:1/2:3").unwrap().to_string(), "K*:1/2:3:5");
        assert!(ClassSpec::parse("K*:3/2:3").is_err());
        assert!(ClassSpec::parse("K*:1/2:1").is_err());
        assert!(ClassSpec::parse("K:-1").is_err());
        assert!(ClassSpec::parse("Q:1").is_err());
    }
}
