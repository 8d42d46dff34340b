//! Support systems for `cl(M)` over a model-like subset `M`, and the
//! bounded / unique / free-closures / edge-closed checks.

use crate::anticollapse::for_each_proper_zero_extension;
use crate::closure::{closure_in, external_closure};
use crate::error::{input, Result};
use crate::predim::{find_violation, ClassSpec, Scaled};
use crate::structures::{FiniteStructure, VertexId, VertexSet};
use std::fmt;

/// Which candidate family to build.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SupportKind {
    /// `{{m} : m ∈ M}`.
    Singletons,
    /// Every nonempty `S`-homogeneous subset of `M` (anti-collapse only).
    SHomogeneous,
    /// The `S`-classes contained in `M` (anti-collapse only).
    SClasses,
}

impl SupportKind {
    pub fn parse(text: &str) -> Result<Self> {
        match text.trim() {
            "singletons" => Ok(SupportKind::Singletons),
            "s_homogeneous" | "s-homogeneous" => Ok(SupportKind::SHomogeneous),
            "s_classes" | "s-classes" => Ok(SupportKind::SClasses),
            other => input(format!("unknown support kind `{other}`")),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SupportSystem {
    pub m: VertexSet,
    pub members: Vec<VertexSet>,
}

/// Why `M` is not model-like.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ModelFailure {
    /// `M ∪ Y` has negative predimension over `M`.
    Negative { y: VertexSet },
    /// An `S`-class meets both `M` and its complement.
    Straddle { class: VertexSet },
    /// A proper 0-extension of a non-homogeneous `X ⊆ M` leaves `M`.
    ZeroExtension { x: VertexSet, z: VertexSet },
}

impl fmt::Display for ModelFailure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ModelFailure::Negative { y } => write!(f, "negative extension {y}"),
            ModelFailure::Straddle { class } => write!(f, "S-class {class} straddles M"),
            ModelFailure::ZeroExtension { x, z } => write!(f, "proper 0-extension of {x} by {z} leaves M"),
        }
    }
}

/// Finite stand-in for "M is a model": no algebraic extension of `M` is
/// available in the ambient. `None` means model-like.
pub fn model_like_failure(ambient: &FiniteStructure, m: VertexSet, spec: &ClassSpec) -> Result<Option<ModelFailure>> {
    m.check_within(ambient.n())?;
    let rest = ambient.vertices().minus(m);
    match spec {
        ClassSpec::AllGraphs => Ok(None),
        ClassSpec::KAlpha(a) | ClassSpec::KAlphaPlus(a) => {
            Ok(find_violation(ambient, m, rest, Scaled::new(*a), false).map(|y| ModelFailure::Negative { y }))
        }
        ClassSpec::AntiCollapse(p) => {
            if let Some(class) = ambient.blocks().into_iter().find(|b| !b.is_disjoint(m) && !b.is_subset(m)) {
                return Ok(Some(ModelFailure::Straddle { class }));
            }
            let red = ambient.reduct();
            if let Some(y) = find_violation(&red, m, rest, Scaled::new(p.r), false) {
                return Ok(Some(ModelFailure::Negative { y }));
            }
            let mut found = None;
            for_each_proper_zero_extension(
                ambient,
                p.r,
                p.zero_ext_cap,
                ambient.vertices(),
                |x| x.is_subset(m) && !ambient.is_s_homogeneous(x),
                |x, z| {
                    if z.is_subset(m) {
                        return Ok(true);
                    }
                    found = Some(ModelFailure::ZeroExtension { x, z });
                    Ok(false)
                },
            )?;
            Ok(found)
        }
    }
}

pub fn build_candidate_system(
    ambient: &FiniteStructure,
    m: VertexSet,
    spec: &ClassSpec,
    kind: SupportKind,
) -> Result<SupportSystem> {
    if let Some(f) = model_like_failure(ambient, m, spec)? {
        return input(format!("M = {m} is not model-like: {f}"));
    }
    let partitioned = matches!(spec, ClassSpec::AntiCollapse(_));
    let members = match kind {
        SupportKind::Singletons => m.iter().map(VertexSet::singleton).collect(),
        _ if !partitioned => return input("S-homogeneous supports need an anti-collapse class"),
        SupportKind::SClasses => ambient.blocks().into_iter().filter(|b| b.is_subset(m)).collect(),
        SupportKind::SHomogeneous => {
            let mut out: Vec<VertexSet> = Vec::new();
            for b in ambient.blocks().into_iter().filter(|b| b.is_subset(m)) {
                if b.len() > 20 {
                    return crate::error::resource(format!("S-class {b} is too large to enumerate"));
                }
                out.extend(b.subsets().filter(|s| !s.is_empty()));
            }
            out.sort();
            out
        }
    };
    Ok(SupportSystem { m, members })
}

/// A counterexample to one of the support properties.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SupportWitness {
    Uncovered { a: VertexId },
    Oversized { member: VertexSet },
    TwoSupports { a: VertexId, first: VertexSet, second: VertexSet },
    NotFree { s: VertexSet, t: VertexSet, reason: String },
    OutsideSupport { a: VertexId, m: VertexId, support: VertexSet },
}

impl fmt::Display for SupportWitness {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SupportWitness::Uncovered { a } => write!(f, "vertex {a} has no support"),
            SupportWitness::Oversized { member } => write!(f, "member {member} is too large"),
            SupportWitness::TwoSupports { a, first, second } => write!(f, "vertex {a} is supported by {first} and {second}"),
            SupportWitness::NotFree { s, t, reason } => write!(f, "closures of {s} and {t} are not free: {reason}"),
            SupportWitness::OutsideSupport { a, m, support } => {
                write!(f, "relation between {a} and {m} with {m} outside supp({a}) = {support}")
            }
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Check {
    pub holds: bool,
    pub witness: Option<SupportWitness>,
}

impl Check {
    fn from(witness: Option<SupportWitness>) -> Self {
        Check { holds: witness.is_none(), witness }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SupportReport {
    /// `cl(M)∖M`.
    pub external: VertexSet,
    pub coverage: Check,
    pub bounded: Check,
    pub unique_supports: Check,
    pub free_closures: Check,
    pub edge_closed: Check,
}

impl SupportReport {
    pub fn all_hold(&self) -> bool {
        [&self.coverage, &self.bounded, &self.unique_supports, &self.free_closures, &self.edge_closed]
            .iter()
            .all(|c| c.holds)
    }
}

impl fmt::Display for SupportReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "external {}", self.external)?;
        for (name, c) in [
            ("coverage", &self.coverage),
            ("bounded", &self.bounded),
            ("unique_supports", &self.unique_supports),
            ("free_closures", &self.free_closures),
            ("edge_closed", &self.edge_closed),
        ] {
            match &c.witness {
                None => writeln!(f, "{name} OK")?,
                Some(w) => writeln!(f, "{name} FAIL {w}")?,
            }
        }
        Ok(())
    }
}

/// `ecl_M(S)` for each member, in member order.
fn member_closures(ambient: &FiniteStructure, sys: &SupportSystem, spec: &ClassSpec) -> Result<Vec<VertexSet>> {
    sys.members.iter().map(|&s| external_closure(ambient, sys.m, s, spec)).collect()
}

fn related(ambient: &FiniteStructure, u: VertexId, v: VertexId) -> bool {
    u != v && (ambient.has_edge(u, v) || (ambient.has_partition() && ambient.same_class(u, v)))
}

/// Whether `joint = ecl(S) ⊕_{S∪T} ecl(T)`: the union, overlapping only in
/// `S∪T`, with no edge or `S`-relation across.
fn free_join(
    ambient: &FiniteStructure,
    st: VertexSet,
    es: VertexSet,
    et: VertexSet,
    joint: VertexSet,
) -> Option<String> {
    let (ls, lt) = (es.union(st), et.union(st));
    if ls.union(lt) != joint {
        return Some(format!("ecl(S∪T) = {joint} differs from the union {}", ls.union(lt)));
    }
    let (only_s, only_t) = (ls.minus(st), lt.minus(st));
    if !only_s.is_disjoint(only_t) {
        return Some(format!("the closures share {}", only_s.inter(only_t)));
    }
    for u in only_s.iter() {
        if let Some(v) = only_t.iter().find(|&v| related(ambient, u, v)) {
            return Some(format!("relation between {u} and {v}"));
        }
    }
    None
}

pub fn verify_system(
    ambient: &FiniteStructure,
    sys: &SupportSystem,
    spec: &ClassSpec,
    bound: usize,
) -> Result<SupportReport> {
    sys.m.check_within(ambient.n())?;
    for &s in &sys.members {
        if !s.is_subset(sys.m) {
            return input(format!("support {s} is not inside M = {}", sys.m));
        }
    }
    let external = closure_in(ambient, sys.m, spec)?.minus(sys.m);
    let ecls = member_closures(ambient, sys, spec)?;
    let ecls_ref = &ecls;
    let holders = move |a: VertexId| (0..ecls_ref.len()).filter(move |&i| ecls_ref[i].contains(a));

    let uncovered = external.iter().find(|&a| holders(a).next().is_none());
    let coverage = Check::from(uncovered.map(|a| SupportWitness::Uncovered { a }));
    let bounded =
        Check::from(sys.members.iter().find(|s| s.len() > bound).map(|&member| SupportWitness::Oversized { member }));

    let unique_supports = if !coverage.holds {
        coverage.clone()
    } else {
        Check::from(external.iter().find_map(|a| {
            let mut h = holders(a);
            let first = h.next()?;
            h.next().map(|second| SupportWitness::TwoSupports {
                a,
                first: sys.members[first],
                second: sys.members[second],
            })
        }))
    };

    let mut not_free = None;
    'pairs: for i in 0..sys.members.len() {
        for j in i + 1..sys.members.len() {
            let (s, t) = (sys.members[i], sys.members[j]);
            let st = s.union(t);
            let joint = external_closure(ambient, sys.m, st, spec)?;
            if let Some(reason) = free_join(ambient, st, ecls[i], ecls[j], joint) {
                debug_assert!(free_join(ambient, st, ecls[j], ecls[i], joint).is_some());
                not_free = Some(SupportWitness::NotFree { s, t, reason });
                break 'pairs;
            }
        }
    }
    let free_closures = Check::from(not_free);

    let edge_closed = if !unique_supports.holds {
        unique_supports.clone()
    } else {
        Check::from(external.iter().find_map(|a| {
            let support = sys.members[holders(a).next().expect("covered")];
            sys.m
                .iter()
                .find(|&m| related(ambient, a, m) && !support.contains(m))
                .map(|m| SupportWitness::OutsideSupport { a, m, support })
        }))
    };

    Ok(SupportReport { external, coverage, bounded, unique_supports, free_closures, edge_closed })
}

/// The unique member whose external closure contains `a`.
pub fn supp_of(ambient: &FiniteStructure, sys: &SupportSystem, spec: &ClassSpec, a: VertexId) -> Result<VertexSet> {
    if a >= ambient.n() {
        return input(format!("vertex {a} out of range"));
    }
    if sys.m.contains(a) {
        return input(format!("vertex {a} lies in M"));
    }
    if !closure_in(ambient, sys.m, spec)?.contains(a) {
        return input(format!("vertex {a} is not in cl(M)"));
    }
    let ecls = member_closures(ambient, sys, spec)?;
    let hits: Vec<VertexSet> = (0..ecls.len()).filter(|&i| ecls[i].contains(a)).map(|i| sys.members[i]).collect();
    match hits.as_slice() {
        [one] => Ok(*one),
        [] => input(format!("vertex {a} has no support")),
        _ => input(format!("vertex {a} has {} supports", hits.len())),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::anticollapse::AntiCollapseParams;
    use crate::rational::Rational;

    fn forest() -> ClassSpec {
        ClassSpec::KAlphaPlus(Rational::from_integer(1))
    }

    fn s(t: &str) -> VertexSet {
        VertexSet::parse(t).unwrap()
    }

    /// Roots 0, 1, 2 in M; a path 0-3-4 and a leaf 2-5 hang outside.
    fn rooted_forest() -> FiniteStructure {
        FiniteStructure::from_edges(6, &[(0, 1), (0, 3), (3, 4), (2, 5)]).unwrap()
    }

    #[test]
    fn singleton_system_on_forest() {
        let g = rooted_forest();
        let m = s("0,1,2");
        let sys = build_candidate_system(&g, m, &forest(), SupportKind::Singletons).unwrap();
        let rep = verify_system(&g, &sys, &forest(), 1).unwrap();
        assert_eq!(rep.external, s("3,4,5"));
        assert!(rep.all_hold(), "{rep}");
        assert_eq!(supp_of(&g, &sys, &forest(), 4).unwrap(), s("0"));
        assert_eq!(supp_of(&g, &sys, &forest(), 5).unwrap(), s("2"));
        assert!(supp_of(&g, &sys, &forest(), 1).is_err());
    }

    #[test]
    fn closed_model_is_vacuous() {
        let g = FiniteStructure::from_edges(3, &[(0, 1)]).unwrap();
        let sys = build_candidate_system(&g, g.vertices(), &forest(), SupportKind::Singletons).unwrap();
        let rep = verify_system(&g, &sys, &forest(), 1).unwrap();
        assert!(rep.external.is_empty());
        assert!(rep.all_hold());
    }

    #[test]
    fn all_graphs_point_over_everything() {
        // M = {0,1,2}; vertex 3 adjacent to all of M and outside it.
        let g = FiniteStructure::from_edges(4, &[(0, 3), (1, 3), (2, 3)]).unwrap();
        let spec = ClassSpec::AllGraphs;
        let sys = build_candidate_system(&g, s("0,1,2"), &spec, SupportKind::Singletons).unwrap();
        let rep = verify_system(&g, &sys, &spec, 1).unwrap();
        assert!(rep.coverage.holds);
        assert!(matches!(rep.unique_supports.witness, Some(SupportWitness::TwoSupports { a: 3, .. })));
        assert!(!rep.edge_closed.holds);
        assert!(supp_of(&g, &sys, &spec, 3).is_err());
    }

    #[test]
    fn negative_extension_is_not_model_like() {
        // A vertex joined to two roots closes a cycle: δ_1 = 1 − 2 < 0.
        let g = FiniteStructure::from_edges(3, &[(0, 2), (1, 2)]).unwrap();
        assert!(build_candidate_system(&g, s("0,1"), &forest(), SupportKind::Singletons).is_err());
    }

    #[test]
    fn anti_collapse_class_supports() {
        let p = AntiCollapseParams::new(Rational::new(1, 2), 3).unwrap();
        let spec = p.spec();
        // M = {0,1} one S-class; vertex 2 adjacent to both is a 0-extension over a homogeneous base.
        let mut g = FiniteStructure::from_edges(3, &[(0, 2), (1, 2)]).unwrap();
        g.set_partition(&[s("0,1")]).unwrap();
        let sys = build_candidate_system(&g, s("0,1"), &spec, SupportKind::SClasses).unwrap();
        assert_eq!(sys.members, vec![s("0,1")]);
        let rep = verify_system(&g, &sys, &spec, 2).unwrap();
        assert_eq!(rep.external, s("2"));
        assert!(rep.all_hold(), "{rep}");
        assert_eq!(supp_of(&g, &sys, &spec, 2).unwrap(), s("0,1"));
        let homog = build_candidate_system(&g, s("0,1"), &spec, SupportKind::SHomogeneous).unwrap();
        assert_eq!(homog.members.len(), 3);
    }

    #[test]
    fn zero_extension_over_mixed_base_is_not_model_like() {
        let p = AntiCollapseParams::new(Rational::new(1, 2), 3).unwrap();
        let mut g = FiniteStructure::from_edges(3, &[(0, 2), (1, 2)]).unwrap();
        g.ensure_partition();
        let f = model_like_failure(&g, s("0,1"), &p.spec()).unwrap();
        assert!(matches!(f, Some(ModelFailure::ZeroExtension { .. })), "{f:?}");
    }

    #[test]
    fn kind_parse() {
        assert_eq!(SupportKind::parse("singletons").unwrap(), SupportKind::Singletons);
        assert!(SupportKind::parse("bogus").is_err());
    }
}
