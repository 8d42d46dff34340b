//! The anti-collapse class `(K_r*, ≼*)`: μ, ν, admissibility, `≼*`, disjoint-copy
//! counting and the bounded-extension check on free amalgams.

use crate::amalgam::{free_amalgam, Amalgam, GluedTriple};
use crate::closure::{is_biminimal_pair, is_proper_zero_extension};
use crate::error::{input, resource, Result};
use crate::predim::{delta_structure, find_violation, granularity, is_strong_with, ClassSpec, Limits, Scaled};
use crate::rational::{ceil_rational, format_rational, Rational};
use crate::structures::{
    canonical_form_colored, copies_over_base, CanonicalForm, Embedding, FiniteStructure, Pattern, VertexId, VertexSet,
};
use std::collections::HashSet;
use std::fmt;

pub const DEFAULT_ZERO_EXT_CAP: usize = 5;

/// How μ meets its lower bound `2(δX + δY)/γ`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Default)]
pub enum MuMode {
    /// The least integer meeting the bound.
    #[default]
    LeastInteger,
    /// The least integer plus a fixed slack.
    Offset(u64),
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct AntiCollapseParams {
    pub r: Rational,
    /// S-classes must have fewer than `n` elements.
    pub n: usize,
    /// Largest `|Z|` of a 0-extension `(X, XZ)` examined by admissibility.
    pub zero_ext_cap: usize,
    pub mu_mode: MuMode,
}

impl AntiCollapseParams {
    pub fn new(r: Rational, n: usize) -> Result<Self> {
        let p = AntiCollapseParams { r, n, zero_ext_cap: DEFAULT_ZERO_EXT_CAP, mu_mode: MuMode::LeastInteger };
        p.validate()?;
        Ok(p)
    }

    pub fn with_cap(mut self, cap: usize) -> Self {
        self.zero_ext_cap = cap;
        self
    }

    pub fn validate(&self) -> Result<()> {
        granularity(self.r)?;
        if self.n < 2 {
            return input(format!("N must exceed 1, got {}", self.n));
        }
        Ok(())
    }

    pub fn gamma(&self) -> Rational {
        Rational::new(1, *self.r.denom())
    }

    pub fn spec(&self) -> ClassSpec {
        ClassSpec::AntiCollapse(self.clone())
    }
}

/// μ from the two predimensions.
pub fn mu_from_deltas(dx: Rational, dy: Rational, params: &AntiCollapseParams) -> u64 {
    let bound = Rational::from_integer(2) * (dx + dy) / params.gamma();
    let least = ceil_rational(&bound).max(0) as u64;
    match params.mu_mode {
        MuMode::LeastInteger => least,
        MuMode::Offset(k) => least + k,
    }
}

pub fn mu(x: &FiniteStructure, y: &FiniteStructure, params: &AntiCollapseParams) -> u64 {
    mu_from_deltas(delta_structure(x, params.r), delta_structure(y, params.r), params)
}

/// ν by enumerating every split `X = X₀ ⊔ X₁` (parts may be empty).
pub fn nu_by_partitions(x: &FiniteStructure, params: &AntiCollapseParams) -> u64 {
    let all = x.vertices();
    all.subsets()
        .map(|x0| {
            let x1 = all.minus(x0);
            let d = |s: VertexSet| {
                Rational::from_integer(s.len() as i64) - params.r * Rational::from_integer(x.edges_in(s) as i64)
            };
            mu_from_deltas(d(x0), d(x1), params)
        })
        .max()
        .unwrap_or(0)
}

/// Maximum number of edges crossing a two-way split.
pub fn max_cut(x: &FiniteStructure) -> usize {
    let all = x.vertices();
    all.subsets().map(|s| x.edges_between(s, all.minus(s))).max().unwrap_or(0)
}

/// ν by the closed form `⌈2(|X| − r·e(X) + r·maxcut(X))/γ⌉`.
pub fn nu_by_maxcut(x: &FiniteStructure, params: &AntiCollapseParams) -> u64 {
    let d = delta_structure(x, params.r) + params.r * Rational::from_integer(max_cut(x) as i64);
    mu_from_deltas(d, Rational::from_integer(0), params)
}

pub fn nu(x: &FiniteStructure, params: &AntiCollapseParams) -> u64 {
    let v = nu_by_partitions(x, params);
    debug_assert_eq!(v, nu_by_maxcut(x, params));
    v
}

/// ν of the substructure induced on `set`.
pub fn nu_of(ambient: &FiniteStructure, set: VertexSet, params: &AntiCollapseParams) -> Result<u64> {
    Ok(nu(&ambient.restrict(set)?, params))
}

/// Copies of a pattern over `base` whose images meet pairwise only inside `base`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DisjointCopyFamily {
    pub base: VertexSet,
    pub pattern: Pattern,
    pub members: Vec<Embedding>,
}

/// Largest subfamily of `parts` (as indices) that is pairwise disjoint; stops
/// once `target` members are found.
pub fn max_disjoint_family(parts: &[VertexSet], target: usize) -> Vec<usize> {
    fn rec(
        parts: &[VertexSet],
        k: usize,
        used: VertexSet,
        cur: &mut Vec<usize>,
        best: &mut Vec<usize>,
        target: usize,
    ) {
        if cur.len() > best.len() {
            *best = cur.clone();
        }
        if best.len() >= target || cur.len() + (parts.len() - k) <= best.len() {
            return;
        }
        for i in k..parts.len() {
            if cur.len() + (parts.len() - i) <= best.len() || best.len() >= target {
                return;
            }
            if parts[i].is_disjoint(used) {
                cur.push(i);
                rec(parts, i + 1, used.union(parts[i]), cur, best, target);
                cur.pop();
            }
        }
    }
    let mut best = Vec::new();
    rec(parts, 0, VertexSet::EMPTY, &mut Vec::new(), &mut best, target.max(1));
    best
}

/// Exact maximum number of copies of `y` over `x` in `a`, pairwise disjoint over `x`.
pub fn max_disjoint_copies(a: &FiniteStructure, x: VertexSet, y: &Pattern) -> Result<(usize, DisjointCopyFamily)> {
    max_disjoint_copies_up_to(a, x, y, usize::MAX)
}

fn max_disjoint_copies_up_to(
    a: &FiniteStructure,
    x: VertexSet,
    y: &Pattern,
    target: usize,
) -> Result<(usize, DisjointCopyFamily)> {
    let mut seen = HashSet::new();
    let mut copies = Vec::new();
    for e in copies_over_base(a, x, y)? {
        if seen.insert(e.image()) {
            copies.push(e);
        }
    }
    let parts: Vec<VertexSet> = copies.iter().map(|e| e.image().minus(x)).collect();
    let pick = max_disjoint_family(&parts, target);
    let members: Vec<Embedding> = pick.iter().map(|&i| copies[i].clone()).collect();
    Ok((members.len(), DisjointCopyFamily { base: x, pattern: y.clone(), members }))
}

/// Which clause of admissibility failed.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum AdmissibilityFailure {
    /// A nonempty subset of the graph reduct with `δ_r ≤ 0`.
    Clause1 { witness: VertexSet },
    /// An `S`-class of size at least `N`.
    Clause2 { class: VertexSet, n: usize },
    /// Too many disjoint copies of a proper 0-extension over a non-homogeneous base.
    Clause3 { x: VertexSet, y: VertexSet, count: usize, nu: u64, family: Vec<VertexSet> },
}

impl fmt::Display for AdmissibilityFailure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            AdmissibilityFailure::Clause1 { witness } => write!(f, "clause1 FAIL witness={witness}"),
            AdmissibilityFailure::Clause2 { class, n } => {
                write!(f, "clause2 FAIL class={class} size={} n={n}", class.len())
            }
            AdmissibilityFailure::Clause3 { x, y, count, nu, .. } => {
                write!(f, "clause3 FAIL X={x} Y={y} count={count} nu={nu}")
            }
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AdmissibilityReport {
    pub admissible: bool,
    /// The 0-extension size cap the verdict holds at.
    pub cap: usize,
    pub failure: Option<AdmissibilityFailure>,
}

pub fn is_admissible(a: &FiniteStructure, params: &AntiCollapseParams) -> Result<AdmissibilityReport> {
    is_admissible_with(a, params, &Limits::default())
}

pub fn is_admissible_with(
    a: &FiniteStructure,
    params: &AntiCollapseParams,
    limits: &Limits,
) -> Result<AdmissibilityReport> {
    params.validate()?;
    if a.n() > limits.strong_cap {
        return resource(format!("{} vertices exceeds the subset-search cap {}", a.n(), limits.strong_cap));
    }
    let cap = params.zero_ext_cap;
    let fail = |f| Ok(AdmissibilityReport { admissible: false, cap, failure: Some(f) });
    if let Some(w) = find_violation(a, VertexSet::EMPTY, a.vertices(), Scaled::new(params.r), true) {
        return fail(AdmissibilityFailure::Clause1 { witness: w });
    }
    if let Some(class) = a.blocks().into_iter().find(|b| b.len() >= params.n) {
        return fail(AdmissibilityFailure::Clause2 { class, n: params.n });
    }
    if let Some(f) = clause3_failure(a, params)? {
        return fail(f);
    }
    Ok(AdmissibilityReport { admissible: true, cap, failure: None })
}

/// Proper 0-extensions `(X, X∪Z)` realized in `a` with `|Z| ≤ cap`, visited once
/// per `(X, Z)`. Properness forces every vertex of `X` to have a neighbour in
/// `Z` and `Z` to be connected, so `Z` ranges over connected sets and `X` over
/// subsets of its neighbourhood. `filter_x` restricts the bases considered.
pub(crate) fn for_each_proper_zero_extension(
    a: &FiniteStructure,
    r: Rational,
    cap: usize,
    region: VertexSet,
    mut filter_x: impl FnMut(VertexSet) -> bool,
    mut visit: impl FnMut(VertexSet, VertexSet) -> Result<bool>,
) -> Result<()> {
    let w = Scaled::new(r);
    let mut zs = Vec::new();
    a.for_each_connected_subset(region, cap, |z| {
        zs.push(z);
        true
    });
    zs.sort();
    for z in zs {
        let nb = a.boundary(z);
        let inner = a.edges_in(z);
        for x in nb.subsets() {
            if x.is_empty() || !filter_x(x) {
                continue;
            }
            if w.value(z.len(), inner + a.edges_between(z, x)) != 0 {
                continue;
            }
            if x.iter().any(|v| a.neighbors(v).is_disjoint(z)) {
                continue;
            }
            if is_proper_zero_extension(a, x, x.union(z), r)?.proper && !visit(x, z)? {
                return Ok(());
            }
        }
    }
    Ok(())
}

fn clause3_failure(a: &FiniteStructure, params: &AntiCollapseParams) -> Result<Option<AdmissibilityFailure>> {
    let mut seen: HashSet<(VertexSet, CanonicalForm)> = HashSet::new();
    let mut failure = None;
    for_each_proper_zero_extension(
        a,
        params.r,
        params.zero_ext_cap,
        a.vertices(),
        |x| !a.is_s_homogeneous(x),
        |x, z| {
            let y = x.union(z);
            let pattern = Pattern::from_subsets(a, x, y)?;
            let key = (x, pattern_key(&pattern));
            if !seen.insert(key) {
                return Ok(true);
            }
            let nu_x = nu_of(a, x, params)?;
            let (count, fam) = max_disjoint_copies_up_to(a, x, &pattern, nu_x as usize + 1)?;
            if count as u64 > nu_x {
                failure = Some(AdmissibilityFailure::Clause3 {
                    x,
                    y,
                    count,
                    nu: nu_x,
                    family: fam.members.iter().map(|e| e.image()).collect(),
                });
                return Ok(false);
            }
            Ok(true)
        },
    )?;
    Ok(failure)
}

/// Canonical form of a pattern with its base vertices individually coloured.
pub fn pattern_key(p: &Pattern) -> CanonicalForm {
    let mut colors = vec![0u32; p.structure.n()];
    for (i, &b) in p.base.iter().enumerate() {
        colors[b] = i as u32 + 1;
    }
    canonical_form_colored(&p.structure, &colors)
}

/// Outcome of `A ≼* B` with the clause that failed.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StarStrongReport {
    pub strong: bool,
    /// `"subset"`, `"straddle"` or `"reduct"`.
    pub failed_clause: Option<&'static str>,
    pub witness: Option<VertexSet>,
}

pub fn is_strong_star(
    ambient: &FiniteStructure,
    a: VertexSet,
    b: VertexSet,
    params: &AntiCollapseParams,
) -> Result<StarStrongReport> {
    is_strong_star_with(ambient, a, b, params, &Limits::default())
}

pub fn is_strong_star_with(
    ambient: &FiniteStructure,
    a: VertexSet,
    b: VertexSet,
    params: &AntiCollapseParams,
    limits: &Limits,
) -> Result<StarStrongReport> {
    a.check_within(ambient.n())?;
    b.check_within(ambient.n())?;
    if !a.is_subset(b) {
        return Ok(StarStrongReport { strong: false, failed_clause: Some("subset"), witness: Some(a.minus(b)) });
    }
    if let Some(v) = ambient.s_closure(a).inter(b.minus(a)).first() {
        return Ok(StarStrongReport { strong: false, failed_clause: Some("straddle"), witness: Some(a.with(v)) });
    }
    let c = is_strong_with(&ambient.reduct(), a, b, &ClassSpec::KAlphaPlus(params.r), limits)?;
    Ok(StarStrongReport {
        strong: c.strong,
        failed_clause: (!c.strong).then_some("reduct"),
        witness: c.witness,
    })
}

/// Result of the bounded-extension check on `D = B ⊕_A C`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Bounded1Report {
    /// `U` meets both `B∖A` and `C∖A`.
    pub applicable: bool,
    pub holds: bool,
    pub count: usize,
    pub nu: u64,
    /// Extensions `Z` (vertices outside `U`) in a maximum disjoint family.
    pub family: Vec<VertexSet>,
}

impl fmt::Display for Bounded1Report {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if !self.applicable {
            return write!(f, "bounded1 not applicable (U does not meet both sides)");
        }
        let verdict = if self.holds { "OK" } else { "FAIL" };
        write!(f, "bounded1 {verdict} count={} nu={}", self.count, self.nu)
    }
}

/// Maximum number of pairwise disjoint proper 0-extensions `(U, U∪Z)` in `d`, `|Z| ≤ cap`.
pub fn max_disjoint_zero_extensions(
    d: &FiniteStructure,
    u: VertexSet,
    r: Rational,
    cap: usize,
) -> Result<Vec<VertexSet>> {
    u.check_within(d.n())?;
    let mut exts = Vec::new();
    for_each_proper_zero_extension(d, r, cap, d.vertices().minus(u), |x| x == u, |_, z| {
        exts.push(z);
        Ok(true)
    })?;
    Ok(max_disjoint_family(&exts, usize::MAX).into_iter().map(|i| exts[i]).collect())
}

/// Checks the bound on disjoint proper 0-extensions of a straddling `U ⊆ D`.
pub fn check_bounded1_instance(
    t: &GluedTriple,
    u: VertexSet,
    params: &AntiCollapseParams,
    cap: usize,
) -> Result<Bounded1Report> {
    let am = free_amalgam(t)?;
    require_star_sides(&am, params)?;
    bounded1_on(&am, u, params, cap)
}

/// Same check against an already built amalgam (preconditions not re-verified).
pub fn bounded1_on(am: &Amalgam, u: VertexSet, params: &AntiCollapseParams, cap: usize) -> Result<Bounded1Report> {
    let d = &am.structure;
    u.check_within(d.n())?;
    let a = am.a_set();
    let applicable = !u.inter(am.b_set().minus(a)).is_empty() && !u.inter(am.c_set().minus(a)).is_empty();
    let nu_u = nu_of(d, u, params)?;
    if !applicable {
        return Ok(Bounded1Report { applicable, holds: true, count: 0, nu: nu_u, family: Vec::new() });
    }
    let family = max_disjoint_zero_extensions(d, u, params.r, cap)?;
    Ok(Bounded1Report { applicable, holds: family.len() as u64 <= nu_u, count: family.len(), nu: nu_u, family })
}

/// Verifies `A ≼* B` and `A ≼* C` inside the amalgam.
pub fn require_star_sides(am: &Amalgam, params: &AntiCollapseParams) -> Result<()> {
    let d = &am.structure;
    let a = am.a_set();
    for (side, set) in [("B", am.b_set()), ("C", am.c_set())] {
        let rep = is_strong_star_with(d, a, set, params, &Limits::unbounded())?;
        if !rep.strong {
            return input(format!(
                "precondition A ≼* {side} fails ({} clause, witness {})",
                rep.failed_clause.unwrap_or("?"),
                rep.witness.map(|w| w.to_string()).unwrap_or_default()
            ));
        }
    }
    Ok(())
}

/// A biminimal 0-extension `(A, C)` in `K_r⁺` found by search.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ZeroExtensionPair {
    pub structure: FiniteStructure,
    pub base: VertexSet,
}

/// First biminimal pair `(A, V)` with `δ(V/A) = 0`, `|A| ≥ min_base`, over all
/// labelled graphs with at most `max_vertices` vertices whose reduct lies in `K_r⁺`.
pub fn find_biminimal_zero_extension(
    r: Rational,
    max_vertices: usize,
    min_base: usize,
) -> Result<Option<ZeroExtensionPair>> {
    granularity(r)?;
    if max_vertices > 6 {
        return resource(format!("search over graphs with {max_vertices} vertices is capped at 6"));
    }
    let spec = ClassSpec::KAlphaPlus(r);
    let w = Scaled::new(r);
    for n in 1..=max_vertices {
        let pairs: Vec<(usize, usize)> = (0..n).flat_map(|i| (i + 1..n).map(move |j| (i, j))).collect();
        for mask in 0u64..(1u64 << pairs.len()) {
            let es: Vec<_> = pairs.iter().enumerate().filter(|(k, _)| mask >> k & 1 == 1).map(|(_, &e)| e).collect();
            let g = FiniteStructure::from_edges(n, &es)?;
            if find_violation(&g, VertexSet::EMPTY, g.vertices(), w, true).is_some() {
                continue;
            }
            let all = g.vertices();
            let mut bases: Vec<VertexSet> = all.subsets().filter(|&s| s != all && s.len() >= min_base).collect();
            bases.sort();
            for a in bases {
                let y = all.minus(a);
                if w.value(y.len(), g.edges_in(y) + g.edges_between(y, a)) == 0
                    && is_biminimal_pair(&g, a, all, &spec)?
                {
                    return Ok(Some(ZeroExtensionPair { structure: g, base: a }));
                }
            }
        }
    }
    Ok(None)
}

/// One structure `D_η` of the independence configuration.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IpConfiguration {
    pub eta: Vec<bool>,
    pub structure: FiniteStructure,
    /// The distinguished vertex `a` (always vertex 0).
    pub a: VertexId,
    /// The tuples `b̄_i`.
    pub tuples: Vec<VertexSet>,
    /// `C` as a pattern over `{a} ∪ b̄`, base listed in ascending order of the image.
    pub pattern: Pattern,
}

/// Builds `D_η` for every `η ∈ 2^count` from a zero-extension pair and a chosen
/// apex `a ∈ A`: the base is `a` plus `count` disjoint copies of `A∖{a}`, each
/// one `S`-class, and a copy of `C` is attached over `a b̄_i` when `η(i) = 1`.
pub fn independence_configurations(
    pair: &ZeroExtensionPair,
    apex: VertexId,
    count: usize,
) -> Result<Vec<IpConfiguration>> {
    let c = &pair.structure;
    let a_set = pair.base;
    if !a_set.contains(apex) {
        return input(format!("apex {apex} is not in A = {a_set}"));
    }
    let rest: Vec<VertexId> = a_set.without(apex).to_vec();
    let k = rest.len();
    let order: Vec<VertexId> = std::iter::once(apex).chain(rest.iter().copied()).collect();
    // C with S: A∖{a} one class, everything else singletons.
    let mut c_star = c.clone();
    c_star.set_partition(&[a_set.without(apex)])?;
    let pattern = Pattern { structure: c_star.clone(), base: order.clone() };

    let mut base = FiniteStructure::new(1 + count * k)?;
    let mut blocks = Vec::new();
    let mut tuples = Vec::new();
    for i in 0..count {
        let off = 1 + i * k;
        let pos = |v: VertexId| if v == apex { 0 } else { off + rest.iter().position(|&w| w == v).expect("in A") };
        for (u, v) in c.edges() {
            if a_set.contains(u) && a_set.contains(v) {
                base.add_edge(pos(u), pos(v))?;
            }
        }
        let t: VertexSet = (off..off + k).collect();
        blocks.push(t);
        tuples.push(t);
    }
    base.set_partition(&blocks)?;

    let mut out = Vec::new();
    for bits in 0u32..(1u32 << count) {
        let eta: Vec<bool> = (0..count).map(|i| bits >> i & 1 == 1).collect();
        let mut d = base.clone();
        for (i, _) in eta.iter().enumerate().filter(|(_, &e)| e) {
            let off = 1 + i * k;
            let glue: Vec<(VertexId, VertexId)> =
                order.iter().enumerate().map(|(j, &cv)| (if j == 0 { 0 } else { off + j - 1 }, cv)).collect();
            d = free_amalgam(&GluedTriple { b: d, c: c_star.clone(), glue })?.structure;
        }
        out.push(IpConfiguration { eta, structure: d, a: 0, tuples: tuples.clone(), pattern: pattern.clone() });
    }
    Ok(out)
}

/// Whether `a b̄_i` extends to a copy of `C` inside `D_η`.
pub fn phi_holds(cfg: &IpConfiguration, i: usize) -> Result<bool> {
    let x = cfg.tuples[i].with(cfg.a);
    Ok(!copies_over_base(&cfg.structure, x, &cfg.pattern)?.is_empty())
}

/// Formats a rational for reports.
pub fn show(r: &Rational) -> String {
    format_rational(r)
}
