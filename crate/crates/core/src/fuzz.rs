//! Random instance generation and the property-fuzzing harness.
//!
//! Every trial draws from its own ChaCha stream (`seed`, stream = trial
//! index), so a single trial replays exactly. Failing instances are shrunk
//! by greedy vertex and edge deletion while the property keeps failing.

use crate::amalgam::{check_full_amalgamation_instance, free_amalgam, oplus_family, GluedTriple};
use crate::anticollapse::{bounded1_on, is_admissible_with, is_strong_star_with, AntiCollapseParams};
use crate::closure::{closure_in, is_closed};
use crate::cltp::{cltp, cltp_equal};
use crate::error::{input, Result};
use crate::oracle;
use crate::predim::{class_membership_with, delta, delta_rel, is_strong_with, ClassSpec, Limits};
use crate::rational::{format_rational, Rational};
use crate::structures::{automorphisms, format_structure, FiniteStructure, Pattern, VertexId, VertexSet};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::fmt;

/// The named property sets.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Suite {
    DeltaAdditivity,
    DeltaMonotonicity,
    DeltaBoundary,
    ClosureOracle,
    StrongOracle,
    Axioms,
    FullAmalgamation,
    AntiCollapseAmalgamation,
    Bounded1,
    CltpLaws,
    /// Checks a deliberately false property to exercise failure reporting.
    BrokenOracle,
}

impl Suite {
    pub const ALL: [Suite; 11] = [
        Suite::DeltaAdditivity,
        Suite::DeltaMonotonicity,
        Suite::DeltaBoundary,
        Suite::ClosureOracle,
        Suite::StrongOracle,
        Suite::Axioms,
        Suite::FullAmalgamation,
        Suite::AntiCollapseAmalgamation,
        Suite::Bounded1,
        Suite::CltpLaws,
        Suite::BrokenOracle,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Suite::DeltaAdditivity => "delta-additivity",
            Suite::DeltaMonotonicity => "delta-monotonicity",
            Suite::DeltaBoundary => "delta-boundary",
            Suite::ClosureOracle => "closure-oracle",
            Suite::StrongOracle => "strong-oracle",
            Suite::Axioms => "axioms",
            Suite::FullAmalgamation => "full-amalgamation",
            Suite::AntiCollapseAmalgamation => "anticollapse-amalgamation",
            Suite::Bounded1 => "bounded1",
            Suite::CltpLaws => "cltp-laws",
            Suite::BrokenOracle => "broken-oracle",
        }
    }

    pub fn parse(text: &str) -> Result<Self> {
        Suite::ALL.into_iter().find(|s| s.name() == text.trim()).map_or_else(
            || {
                let names: Vec<_> = Suite::ALL.iter().map(|s| s.name()).collect();
                input(format!("unknown suite `{text}` (expected one of {})", names.join(", ")))
            },
            Ok,
        )
    }

    fn needs_anticollapse(self) -> bool {
        matches!(self, Suite::AntiCollapseAmalgamation | Suite::Bounded1)
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FuzzConfig {
    pub suite: Suite,
    pub spec: ClassSpec,
    pub trials: u64,
    pub max_vertices: usize,
    pub seed: u64,
    /// Run only this trial index.
    pub trial: Option<u64>,
}

impl FuzzConfig {
    pub fn new(suite: Suite, spec: ClassSpec, trials: u64, max_vertices: usize, seed: u64) -> Self {
        FuzzConfig { suite, spec, trials, max_vertices, seed, trial: None }
    }

    pub fn replay_command(&self, trial: u64) -> String {
        format!(
            "genera fuzz --suite {} --spec {} --trials {} --max-vertices {} --seed {} --trial {trial}",
            self.suite, self.spec, self.trials, self.max_vertices, self.seed
        )
    }
}

/// An ambient with the designated subsets, tuples and a variant tag a
/// suite needs.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Instance {
    pub ambient: FiniteStructure,
    pub sets: Vec<VertexSet>,
    pub tuples: Vec<Vec<VertexId>>,
    pub variant: u8,
}

impl Instance {
    fn new(ambient: FiniteStructure, sets: Vec<VertexSet>) -> Self {
        Instance { ambient, sets, tuples: Vec::new(), variant: 0 }
    }

    fn without_vertex(&self, v: VertexId) -> Option<Instance> {
        if self.tuples.iter().any(|t| t.contains(&v)) {
            return None;
        }
        let keep = self.ambient.vertices().without(v);
        let shift = |w: VertexId| if w > v { w - 1 } else { w };
        Some(Instance {
            ambient: self.ambient.restrict(keep).ok()?,
            sets: self.sets.iter().map(|s| s.without(v).iter().map(shift).collect()).collect(),
            tuples: self.tuples.iter().map(|t| t.iter().map(|&w| shift(w)).collect()).collect(),
            variant: self.variant,
        })
    }

    fn without_edge(&self, u: VertexId, v: VertexId) -> Instance {
        let mut next = self.clone();
        next.ambient.remove_edge(u, v);
        next
    }
}

impl fmt::Display for Instance {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", format_structure("instance", &self.ambient))?;
        for (i, s) in self.sets.iter().enumerate() {
            writeln!(f, "# set {i} = {s}")?;
        }
        for (i, t) in self.tuples.iter().enumerate() {
            writeln!(f, "# tuple {i} = {t:?}")?;
        }
        if self.variant != 0 {
            writeln!(f, "# variant {}", self.variant)?;
        }
        Ok(())
    }
}

/// Outcome of one property evaluation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Verdict {
    Pass,
    /// Preconditions unmet; counts as a pass.
    Skip,
    Fail(String),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FuzzFailure {
    pub trial: u64,
    pub message: String,
    pub original: Instance,
    pub minimized: Instance,
    pub minimized_message: String,
    pub replay: String,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FuzzReport {
    pub suite: Suite,
    pub spec: ClassSpec,
    pub trials_run: u64,
    pub skipped: u64,
    pub failure: Option<FuzzFailure>,
}

impl FuzzReport {
    pub fn passed(&self) -> bool {
        self.failure.is_none()
    }
}

impl fmt::Display for FuzzReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "suite={} spec={} trials={} skipped={}", self.suite, self.spec, self.trials_run, self.skipped)?;
        match &self.failure {
            None => writeln!(f, "result=pass"),
            Some(x) => {
                writeln!(f, "result=fail trial={}", x.trial)?;
                writeln!(f, "message={}", x.message)?;
                writeln!(f, "minimized_message={}", x.minimized_message)?;
                writeln!(f, "replay={}", x.replay)?;
                write!(f, "{}", x.minimized)
            }
        }
    }
}

fn trial_rng(seed: u64, trial: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(trial);
    rng
}

fn no_cap() -> Limits {
    Limits::unbounded()
}

fn member(g: &FiniteStructure, spec: &ClassSpec) -> Result<bool> {
    class_membership_with(g, spec, &no_cap())
}

/// Adds `extra` vertices to `base`, then tries each new pair as an edge with
/// probability `p_edge`, keeping it only if the structure stays in the class.
/// Anti-collapse classes also place new vertices in `S`-classes below the
/// size bound; with `frozen`, base classes take no new members.
pub fn grow_in_class(
    rng: &mut ChaCha8Rng,
    base: &FiniteStructure,
    extra: usize,
    spec: &ClassSpec,
    p_edge: f64,
    frozen: bool,
) -> Result<FiniteStructure> {
    let mut g = base.clone();
    let k = g.n();
    if let ClassSpec::AntiCollapse(p) = spec {
        g.ensure_partition();
        for _ in 0..extra {
            let v = g.add_vertex()?;
            if rng.gen_bool(0.5) {
                let open: Vec<VertexSet> = g
                    .blocks()
                    .into_iter()
                    .filter(|b| !b.contains(v) && b.len() + 1 < p.n && !(frozen && b.first().is_some_and(|f| f < k)))
                    .collect();
                if let Some(b) = open.choose(rng) {
                    g.join_class(b.first().expect("nonempty"), v)?;
                }
            }
        }
    } else {
        for _ in 0..extra {
            g.add_vertex()?;
        }
    }
    for v in k..g.n() {
        for u in 0..v {
            if rng.gen_bool(p_edge) {
                g.add_edge(u, v)?;
                if !member(&g, spec)? {
                    g.remove_edge(u, v);
                }
            }
        }
    }
    Ok(g)
}

/// A random member of the class with at most `max_vertices` vertices.
pub fn random_in_class(spec: &ClassSpec, max_vertices: usize, seed: u64) -> Result<FiniteStructure> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    random_structure(&mut rng, spec, max_vertices)
}

fn random_structure(rng: &mut ChaCha8Rng, spec: &ClassSpec, max_vertices: usize) -> Result<FiniteStructure> {
    let n = rng.gen_range(0..=max_vertices);
    let p = rng.gen_range(0.2..0.8);
    grow_in_class(rng, &FiniteStructure::empty(), n, spec, p, false)
}

fn random_graph(rng: &mut ChaCha8Rng, max_vertices: usize) -> FiniteStructure {
    let n = rng.gen_range(1..=max_vertices.max(1));
    let p = rng.gen_range(0.2..0.8);
    let mut g = FiniteStructure::new(n).expect("small");
    for v in 0..n {
        for u in 0..v {
            if rng.gen_bool(p) {
                g.add_edge(u, v).expect("in range");
            }
        }
    }
    g
}

fn random_subset(rng: &mut ChaCha8Rng, within: VertexSet) -> VertexSet {
    within.iter().filter(|_| rng.gen_bool(0.5)).collect()
}

fn alpha_of(spec: &ClassSpec) -> Rational {
    spec.alpha()
}

fn generate(suite: Suite, rng: &mut ChaCha8Rng, cfg: &FuzzConfig) -> Result<Instance> {
    let spec = &cfg.spec;
    let maxv = cfg.max_vertices.max(1);
    Ok(match suite {
        Suite::DeltaAdditivity => {
            let k = rng.gen_range(0..=2.min(maxv));
            let a = random_structure(rng, spec, k)?;
            let m = rng.gen_range(1..=3);
            let mut members = Vec::new();
            for _ in 0..m {
                let extra = rng.gen_range(1..=2);
                let p = rng.gen_range(0.2..0.8);
                let b = grow_in_class(rng, &a, extra, spec, p, false)?;
                members.push(Pattern { structure: b, base: (0..a.n()).collect() });
            }
            let fam = oplus_family(&a, &members)?;
            let mut sets = vec![fam.base_set()];
            sets.extend(fam.parts);
            Instance::new(fam.structure, sets)
        }
        Suite::DeltaMonotonicity => {
            let g = random_graph(rng, maxv);
            let all = g.vertices();
            let a = random_subset(rng, all);
            let rest = all.minus(a);
            let b_only = random_subset(rng, rest);
            let c_only = random_subset(rng, rest.minus(b_only));
            let b = b_only.union(random_subset(rng, a));
            let c = c_only.union(random_subset(rng, a));
            Instance::new(g, vec![a, b, c])
        }
        Suite::DeltaBoundary => {
            let g = random_graph(rng, maxv);
            let b = random_subset(rng, g.vertices());
            let a = random_subset(rng, b);
            Instance::new(g, vec![a, b])
        }
        Suite::ClosureOracle | Suite::BrokenOracle => {
            let g = random_structure(rng, spec, maxv)?;
            let a = random_subset(rng, g.vertices());
            Instance::new(g, vec![a])
        }
        Suite::StrongOracle => {
            let g = if rng.gen_bool(0.5) { random_structure(rng, spec, maxv)? } else { random_graph(rng, maxv) };
            let g = match spec {
                ClassSpec::AntiCollapse(_) => {
                    let mut g = g;
                    if !g.has_partition() {
                        g.ensure_partition();
                    }
                    g
                }
                _ => g,
            };
            let b = random_subset(rng, g.vertices());
            let a = random_subset(rng, b);
            Instance::new(g, vec![a, b])
        }
        Suite::Axioms => {
            let g = random_structure(rng, spec, maxv)?;
            let all = g.vertices();
            let pick = |rng: &mut ChaCha8Rng, s: VertexSet| -> Result<VertexSet> {
                Ok(if rng.gen_bool(0.5) { closure_in(&g, s, spec)? } else { s })
            };
            let c = if rng.gen_bool(0.5) { all } else { random_subset(rng, all) };
            let b0 = random_subset(rng, c);
            let b = pick(rng, b0)?.inter(c);
            let a0 = random_subset(rng, b);
            let a = pick(rng, a0)?.inter(b);
            let d = random_subset(rng, all);
            Instance::new(g, vec![a, b, c, d])
        }
        Suite::FullAmalgamation | Suite::AntiCollapseAmalgamation | Suite::Bounded1 => {
            let full = suite == Suite::AntiCollapseAmalgamation && rng.gen_bool(0.5);
            let mut inst = random_triple(rng, spec, maxv, !full)?;
            inst.variant = u8::from(full);
            inst
        }
        Suite::CltpLaws => {
            let g = random_structure(rng, spec, maxv.min(7))?;
            if g.n() == 0 {
                return Ok(Instance::new(g, Vec::new()));
            }
            let len = rng.gen_range(1..=2.min(g.n()));
            let verts: Vec<VertexId> = (0..g.n()).collect();
            let tuples: Vec<Vec<VertexId>> =
                (0..3).map(|_| verts.choose_multiple(rng, len).copied().collect()).collect();
            let depth = rng.gen_range(0..=2u8);
            Instance { ambient: g, sets: Vec::new(), tuples, variant: depth }
        }
    })
}

/// Grows `base` by up to `room` vertices, retrying until `base` is strong in
/// the result when `strong` is set; falls back to `base` itself.
fn grow_over(
    rng: &mut ChaCha8Rng,
    base: &FiniteStructure,
    room: usize,
    spec: &ClassSpec,
    strong: bool,
) -> Result<FiniteStructure> {
    if room == 0 {
        return Ok(base.clone());
    }
    for _ in 0..20 {
        let extra = rng.gen_range(1..=room);
        let p = rng.gen_range(0.2..0.8);
        let cand = grow_in_class(rng, base, extra, spec, p, strong)?;
        if !strong || is_strong_with(&cand, base.vertices(), cand.vertices(), spec, &no_cap())?.strong {
            return Ok(cand);
        }
    }
    Ok(base.clone())
}

/// `A` in the class, `B ⊇ A` strong over `A`, and `C ⊇ A` (strong over `A`
/// when `strong_c`), with `|A| + |B∖A| + |C∖A| ≤ maxv`. Laid out as `B ⊔ C`
/// with sets `[B, C, A in B, A in C]`; `A` comes first on both sides.
fn random_triple(rng: &mut ChaCha8Rng, spec: &ClassSpec, maxv: usize, strong_c: bool) -> Result<Instance> {
    let k = rng.gen_range(0..=maxv / 3);
    let a = random_structure(rng, spec, k)?;
    let room = maxv - a.n();
    let room_b = rng.gen_range(0..=room);
    let b = grow_over(rng, &a, room_b, spec, true)?;
    let c = grow_over(rng, &a, room - (b.n() - a.n()), spec, strong_c)?;
    let amb = b.disjoint_union(&c)?;
    let c_set = VertexSet::full(amb.n()).minus(VertexSet::full(b.n()));
    let a_in_c: VertexSet = (0..a.n()).map(|i| b.n() + i).collect();
    Ok(Instance::new(amb, vec![b.vertices(), c_set, a.vertices(), a_in_c]))
}

/// Rebuilds the glued triple from its `B ⊔ C` layout.
fn decode_triple(inst: &Instance) -> Option<GluedTriple> {
    let [bs, cs, ab, ac] = inst.sets[..] else { return None };
    if !ab.is_subset(bs) || !ac.is_subset(cs) || ab.len() != ac.len() || !bs.is_disjoint(cs) {
        return None;
    }
    let pos = |set: VertexSet, v: VertexId| set.iter().position(|w| w == v).expect("member");
    let glue = ab.iter().zip(ac.iter()).map(|(x, y)| (pos(bs, x), pos(cs, y))).collect();
    let t = GluedTriple { b: inst.ambient.restrict(bs).ok()?, c: inst.ambient.restrict(cs).ok()?, glue };
    free_amalgam(&t).ok()?;
    Some(t)
}

fn fail(msg: impl Into<String>) -> Result<Verdict> {
    Ok(Verdict::Fail(msg.into()))
}

fn params_of(spec: &ClassSpec) -> Option<&AntiCollapseParams> {
    match spec {
        ClassSpec::AntiCollapse(p) => Some(p),
        _ => None,
    }
}

/// Evaluates the suite's property on an instance.
pub fn check(suite: Suite, inst: &Instance, spec: &ClassSpec) -> Result<Verdict> {
    let g = &inst.ambient;
    let alpha = alpha_of(spec);
    if inst.sets.iter().any(|s| s.check_within(g.n()).is_err()) {
        return Ok(Verdict::Skip);
    }
    match suite {
        Suite::DeltaAdditivity => {
            let Some((&a, parts)) = inst.sets.split_first() else { return Ok(Verdict::Skip) };
            if parts.iter().any(|p| !a.is_subset(*p)) {
                return Ok(Verdict::Skip);
            }
            for (i, p) in parts.iter().enumerate() {
                for q in &parts[i + 1..] {
                    let (x, y) = (p.minus(a), q.minus(a));
                    if !x.is_disjoint(y) || g.edges_between(x, y) > 0 {
                        return Ok(Verdict::Skip);
                    }
                }
            }
            let union = parts.iter().fold(a, |acc, p| acc.union(*p));
            let lhs = delta(g, union, alpha) - delta(g, a, alpha);
            let rhs: Rational = parts.iter().map(|p| delta(g, *p, alpha) - delta(g, a, alpha)).sum();
            if lhs != rhs {
                return fail(format!(
                    "δ(⊕/A) = {} but Σ δ(B_i/A) = {}",
                    format_rational(&lhs),
                    format_rational(&rhs)
                ));
            }
            Ok(Verdict::Pass)
        }
        Suite::DeltaMonotonicity => {
            let [a, b, c] = inst.sets[..] else { return Ok(Verdict::Skip) };
            if !b.inter(c).is_subset(a) {
                return Ok(Verdict::Skip);
            }
            let ac = a.union(c);
            let over_ac = delta(g, ac.union(b), alpha) - delta(g, ac, alpha);
            let over_a = delta(g, a.union(b), alpha) - delta(g, a, alpha);
            if over_ac > over_a {
                return fail(format!(
                    "δ(B/AC) = {} > δ(B/A) = {}",
                    format_rational(&over_ac),
                    format_rational(&over_a)
                ));
            }
            Ok(Verdict::Pass)
        }
        Suite::DeltaBoundary => {
            let [a, b] = inst.sets[..] else { return Ok(Verdict::Skip) };
            if !a.is_subset(b) {
                return Ok(Verdict::Skip);
            }
            let rd = delta_rel(g, b, a, alpha)?;
            let fresh = b.minus(a);
            let direct = delta(g, b, alpha) - delta(g, a, alpha);
            let formula = Rational::from_integer(fresh.len() as i64)
                - alpha * Rational::from_integer((g.edges_in(fresh) + g.edges_between(fresh, a)) as i64);
            if rd.value != direct || rd.value != formula || oracle::delta(g, b, alpha) - oracle::delta(g, a, alpha) != direct
            {
                return fail(format!(
                    "δ(B/A): reported {}, difference {}, boundary formula {}",
                    format_rational(&rd.value),
                    format_rational(&direct),
                    format_rational(&formula)
                ));
            }
            Ok(Verdict::Pass)
        }
        Suite::ClosureOracle => {
            let [a] = inst.sets[..] else { return Ok(Verdict::Skip) };
            let fast = closure_in(g, a, spec)?;
            let slow = oracle::closure(g, a, spec);
            if fast != slow {
                return fail(format!("cl({a}) = {fast}, brute force {slow}"));
            }
            if !a.is_subset(fast) || !is_closed(g, fast, spec)? || closure_in(g, fast, spec)? != fast {
                return fail(format!("cl({a}) = {fast} is not an extensive idempotent closed set"));
            }
            Ok(Verdict::Pass)
        }
        Suite::StrongOracle => {
            let [a, b] = inst.sets[..] else { return Ok(Verdict::Skip) };
            if !a.is_subset(b) {
                return Ok(Verdict::Skip);
            }
            let fast = is_strong_with(g, a, b, spec, &no_cap())?.strong;
            let slow = oracle::strong(g, a, b, spec);
            if fast != slow {
                return fail(format!("strong({a}, {b}) = {fast}, brute force {slow}"));
            }
            let small = params_of(spec).is_none() || g.n() <= 6;
            if small {
                let fast = member(g, spec)?;
                let slow = oracle::membership(g, spec);
                if fast != slow {
                    return fail(format!("membership = {fast}, brute force {slow}"));
                }
            }
            Ok(Verdict::Pass)
        }
        Suite::Axioms => {
            let [a, b, c, d] = inst.sets[..] else { return Ok(Verdict::Skip) };
            if !a.is_subset(b) || !b.is_subset(c) || !member(g, spec)? {
                return Ok(Verdict::Skip);
            }
            let st = |x: VertexSet, y: VertexSet| -> Result<bool> { Ok(is_strong_with(g, x, y, spec, &no_cap())?.strong) };
            if !st(a, a)? {
                return fail(format!("reflexivity fails at {a}"));
            }
            if !st(VertexSet::EMPTY, g.vertices())? {
                return fail("∅ is not strong in the ambient");
            }
            if st(a, b)? && st(b, c)? && !st(a, c)? {
                return fail(format!("transitivity fails for {a} ≤ {b} ≤ {c}"));
            }
            if st(a, c)? && !st(a, b)? {
                return fail(format!("restriction fails: {a} ≤ {c} but not ≤ {b}"));
            }
            if st(a, c)? && !st(a.inter(d), c.inter(d))? {
                return fail(format!("intersection fails: {a} ≤ {c} but not after meeting {d}"));
            }
            Ok(Verdict::Pass)
        }
        Suite::FullAmalgamation => {
            let Some(t) = decode_triple(inst) else { return Ok(Verdict::Skip) };
            if !member(&t.b, spec)? || !member(&t.c, spec)? {
                return Ok(Verdict::Skip);
            }
            match check_full_amalgamation_instance(&t, spec) {
                Err(crate::Error::Input(_)) => Ok(Verdict::Skip),
                Err(e) => Err(e),
                Ok(r) if r.holds() => Ok(Verdict::Pass),
                Ok(r) => fail(format!(
                    "C ≤ D: {} (witness {:?}), D in class: {}",
                    r.c_strong, r.c_witness, r.d_in_class
                )),
            }
        }
        Suite::AntiCollapseAmalgamation => {
            let Some(p) = params_of(spec) else { return input("this suite needs an anti-collapse class") };
            let Some(t) = decode_triple(inst) else { return Ok(Verdict::Skip) };
            let am = free_amalgam(&t)?;
            let d = &am.structure;
            let a = am.a_set();
            let star = |x: VertexSet, y: VertexSet| -> Result<bool> { Ok(is_strong_star_with(d, x, y, p, &no_cap())?.strong) };
            if !member(&t.b, spec)? || !member(&t.c, spec)? || !star(a, am.b_set())? {
                return Ok(Verdict::Skip);
            }
            let full = inst.variant == 1;
            if !full && !star(a, am.c_set())? {
                return Ok(Verdict::Skip);
            }
            let adm = is_admissible_with(d, p, &no_cap())?;
            if !adm.admissible {
                return fail(format!("D not admissible: {}", adm.failure.map(|f| f.to_string()).unwrap_or_default()));
            }
            if !star(am.c_set(), d.vertices())? {
                return fail("C is not ≼*-strong in D");
            }
            if !full && !star(am.b_set(), d.vertices())? {
                return fail("B is not ≼*-strong in D");
            }
            Ok(Verdict::Pass)
        }
        Suite::Bounded1 => {
            let Some(p) = params_of(spec) else { return input("this suite needs an anti-collapse class") };
            let Some(t) = decode_triple(inst) else { return Ok(Verdict::Skip) };
            let am = free_amalgam(&t)?;
            let d = &am.structure;
            let a = am.a_set();
            let star = |x: VertexSet, y: VertexSet| -> Result<bool> { Ok(is_strong_star_with(d, x, y, p, &no_cap())?.strong) };
            if !member(&t.b, spec)? || !member(&t.c, spec)? || !star(a, am.b_set())? || !star(a, am.c_set())? {
                return Ok(Verdict::Skip);
            }
            let (bs, cs) = (am.b_set().minus(a), am.c_set().minus(a));
            for u in d.vertices().subsets().filter(|u| u.len() <= 4) {
                if u.is_disjoint(bs) || u.is_disjoint(cs) {
                    continue;
                }
                let rep = bounded1_on(&am, u, p, p.zero_ext_cap)?;
                if !rep.holds {
                    return fail(format!("U = {u}: {rep}"));
                }
            }
            Ok(Verdict::Pass)
        }
        Suite::CltpLaws => {
            if inst.tuples.len() != 3 || inst.tuples.iter().any(|t| t.len() != inst.tuples[0].len()) {
                return Ok(Verdict::Skip);
            }
            let depth = inst.variant as usize;
            let ext = crate::cltp::DEFAULT_CLTP_EXT;
            let (t1, t2, t3) = (&inst.tuples[0], &inst.tuples[1], &inst.tuples[2]);
            let eq = |x: &[VertexId], y: &[VertexId]| -> Result<bool> { Ok(cltp_equal(g, x, y, depth, spec, ext)?.equal) };
            if !eq(t1, t1)? {
                return fail("cltp is not reflexive");
            }
            if eq(t1, t2)? != eq(t2, t1)? {
                return fail("cltp equality is not symmetric");
            }
            if eq(t1, t2)? && eq(t2, t3)? && !eq(t1, t3)? {
                return fail("cltp equality is not transitive");
            }
            let deep = cltp(g, t1, depth, spec, ext)?;
            for d in 0..depth {
                if deep.truncate(d) != cltp(g, t1, d, spec, ext)? {
                    return fail(format!("truncation to depth {d} differs from direct evaluation"));
                }
            }
            for auto in automorphisms(g).iter().take(8) {
                let image: Vec<VertexId> = t1.iter().map(|&v| auto.map[v]).collect();
                if cltp(g, &image, depth, spec, ext)? != deep {
                    return fail(format!("automorphism {:?} changes the closure type", auto.map));
                }
            }
            Ok(Verdict::Pass)
        }
        Suite::BrokenOracle => {
            let [a] = inst.sets[..] else { return Ok(Verdict::Skip) };
            // Deliberately false: claims every set is its own closure.
            let c = closure_in(g, a, spec)?;
            if c != a {
                return fail(format!("cl({a}) = {c} differs from {a}"));
            }
            Ok(Verdict::Pass)
        }
    }
}

fn evaluate(suite: Suite, inst: &Instance, spec: &ClassSpec) -> Verdict {
    match check(suite, inst, spec) {
        Ok(v) => v,
        Err(e) => Verdict::Fail(format!("error: {e}")),
    }
}

/// Greedy shrinking: delete vertices, then edges, while the property still fails.
pub fn minimize(suite: Suite, inst: &Instance, spec: &ClassSpec) -> (Instance, String) {
    let mut cur = inst.clone();
    let Verdict::Fail(mut msg) = evaluate(suite, &cur, spec) else {
        return (cur, String::new());
    };
    loop {
        let mut progressed = false;
        for v in (0..cur.ambient.n()).rev() {
            if let Some(next) = cur.without_vertex(v) {
                if let Verdict::Fail(m) = evaluate(suite, &next, spec) {
                    cur = next;
                    msg = m;
                    progressed = true;
                }
            }
        }
        for (u, v) in cur.ambient.edges() {
            let next = cur.without_edge(u, v);
            if let Verdict::Fail(m) = evaluate(suite, &next, spec) {
                cur = next;
                msg = m;
                progressed = true;
            }
        }
        if !progressed {
            return (cur, msg);
        }
    }
}

/// The instance trial `trial` of `cfg` evaluates.
pub fn trial_instance(cfg: &FuzzConfig, trial: u64) -> Result<Instance> {
    generate(cfg.suite, &mut trial_rng(cfg.seed, trial), cfg)
}

pub fn run_suite(cfg: &FuzzConfig) -> Result<FuzzReport> {
    cfg.spec.validate()?;
    if cfg.suite.needs_anticollapse() && params_of(&cfg.spec).is_none() {
        return input(format!("suite {} needs an anti-collapse class (K*:r:N)", cfg.suite));
    }
    let trials: Vec<u64> = match cfg.trial {
        Some(t) => vec![t],
        None => (0..cfg.trials).collect(),
    };
    let mut report = FuzzReport { suite: cfg.suite, spec: cfg.spec.clone(), trials_run: 0, skipped: 0, failure: None };
    for t in trials {
        let inst = trial_instance(cfg, t)?;
        report.trials_run += 1;
        match evaluate(cfg.suite, &inst, &cfg.spec) {
            Verdict::Pass => {}
            Verdict::Skip => report.skipped += 1,
            Verdict::Fail(message) => {
                let (minimized, minimized_message) = minimize(cfg.suite, &inst, &cfg.spec);
                report.failure = Some(FuzzFailure {
                    trial: t,
                    message,
                    original: inst,
                    minimized,
                    minimized_message,
                    replay: cfg.replay_command(t),
                });
                break;
            }
        }
    }
    Ok(report)
}
