//! Finite approximations of the generic structure.

use super::{free_amalgam, GluedTriple};
use crate::anticollapse::pattern_key;
use crate::closure::is_closed;
use crate::error::{resource, Error, Result};
use crate::predim::{class_membership_with, is_strong_with, ClassSpec, Limits};
use crate::structures::{visit_copies_over_base, CanonicalForm, FiniteStructure, Pattern, VertexSet};
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GenericConfig {
    pub spec: ClassSpec,
    pub stages: usize,
    pub max_base: usize,
    pub max_ext: usize,
    /// Shuffles demand order within a stage; `None` keeps the canonical order.
    pub seed: Option<u64>,
    /// Stop with a resource error once a stage would exceed this many vertices.
    pub max_vertices: usize,
}

impl GenericConfig {
    pub fn new(spec: ClassSpec, stages: usize, max_base: usize, max_ext: usize) -> Self {
        GenericConfig { spec, stages, max_base, max_ext, seed: None, max_vertices: 64 }
    }
}

/// One attachment: a copy of `extension` glued over `base`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AttachRecord {
    pub stage: usize,
    pub base: VertexSet,
    pub extension: Pattern,
    pub new_vertices: VertexSet,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GenericStage {
    pub stage_index: usize,
    pub structure: FiniteStructure,
    /// Attachments made while building this stage from the previous one.
    pub provenance: Vec<AttachRecord>,
}

/// Stages `M₀ = ∅, M₁, …`; `halted` carries the error that cut the build short.
#[derive(Clone, Debug)]
pub struct GenericBuild {
    pub stages: Vec<GenericStage>,
    pub halted: Option<Error>,
}

impl GenericBuild {
    pub fn into_result(self) -> Result<Vec<GenericStage>> {
        match self.halted {
            Some(e) => Err(e),
            None => Ok(self.stages),
        }
    }
}

/// Every strong extension `A ≤ B` of `base` with `1 ≤ |B∖A| ≤ max_ext` and
/// `B` in the class, one per isomorphism type over `A` (base vertices fixed
/// individually), ordered by canonical key. Base vertices are `0..|A|`.
pub fn extensions_over(base: &FiniteStructure, spec: &ClassSpec, max_ext: usize) -> Result<Vec<Pattern>> {
    let k = base.n();
    let partitioned = matches!(spec, ClassSpec::AntiCollapse(_));
    let lim = Limits::unbounded();
    let mut found: Vec<(CanonicalForm, Pattern)> = Vec::new();
    for m in 1..=max_ext {
        let n = k + m;
        if n > crate::structures::MAX_VERTICES {
            return resource("extension would exceed the vertex limit");
        }
        let mut slots: Vec<(usize, usize)> = Vec::new();
        for v in k..n {
            for u in 0..v {
                slots.push((u, v));
            }
        }
        if slots.len() > 24 {
            return resource(format!("{} candidate edges for |A| = {k}, |B∖A| = {m}", slots.len()));
        }
        let partitions = if partitioned { set_partitions(m) } else { vec![Vec::new()] };
        for mask in 0u64..(1u64 << slots.len()) {
            let mut b = base.clone();
            for _ in 0..m {
                b.add_vertex()?;
            }
            for (i, &(u, v)) in slots.iter().enumerate() {
                if mask >> i & 1 == 1 {
                    b.add_edge(u, v)?;
                }
            }
            for labels in &partitions {
                let mut bb = b.clone();
                if partitioned {
                    bb.ensure_partition();
                    let mut blocks: Vec<VertexSet> = base.blocks();
                    let groups = labels.iter().copied().max().map_or(0, |x| x + 1);
                    for g in 0..groups {
                        blocks.push(labels.iter().enumerate().filter(|(_, &l)| l == g).map(|(i, _)| k + i).collect());
                    }
                    bb.set_partition(&blocks)?;
                }
                let pattern = Pattern { structure: bb, base: (0..k).collect() };
                let key = pattern_key(&pattern);
                if found.iter().any(|(f, _)| *f == key) {
                    continue;
                }
                let b_all = pattern.structure.vertices();
                if !is_strong_with(&pattern.structure, VertexSet::full(k), b_all, spec, &lim)?.strong {
                    continue;
                }
                if !class_membership_with(&pattern.structure, spec, &lim)? {
                    continue;
                }
                found.push((key, pattern));
            }
        }
    }
    found.sort_by(|a, b| a.0.cmp(&b.0));
    Ok(found.into_iter().map(|(_, p)| p).collect())
}

/// Set partitions of `0..m` as restricted growth strings.
fn set_partitions(m: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    fn rec(cur: &mut Vec<usize>, m: usize, out: &mut Vec<Vec<usize>>) {
        if cur.len() == m {
            out.push(cur.clone());
            return;
        }
        let next = cur.iter().copied().max().map_or(0, |x| x + 1);
        for l in 0..=next {
            cur.push(l);
            rec(cur, m, out);
            cur.pop();
        }
    }
    rec(&mut Vec::new(), m, &mut out);
    out
}

/// Closed subsets of `m` with at most `max_base` vertices, lexicographic.
fn closed_bases(m: &FiniteStructure, spec: &ClassSpec, max_base: usize) -> Result<Vec<VertexSet>> {
    let mut out = Vec::new();
    let all = m.vertices();
    let mut cands: Vec<VertexSet> = Vec::new();
    fn rec(all: VertexSet, start: usize, cur: VertexSet, left: usize, out: &mut Vec<VertexSet>) {
        out.push(cur);
        if left == 0 {
            return;
        }
        for v in all.iter().filter(|&v| v >= start) {
            rec(all, v + 1, cur.with(v), left - 1, out);
        }
    }
    rec(all, 0, VertexSet::EMPTY, max_base, &mut cands);
    cands.sort();
    for a in cands {
        if is_closed(m, a, spec)? {
            out.push(a);
        }
    }
    Ok(out)
}

/// Whether some copy of `ext` over `a` has a strong image in `m`.
fn has_strong_copy(m: &FiniteStructure, a: VertexSet, ext: &Pattern, spec: &ClassSpec) -> Result<bool> {
    let mut found = false;
    let mut err = None;
    let lim = Limits::unbounded();
    visit_copies_over_base(m, a, ext, |img| {
        let set: VertexSet = img.iter().copied().collect();
        match is_strong_with(m, set, m.vertices(), spec, &lim) {
            Ok(c) if c.strong => {
                found = true;
                false
            }
            Ok(_) => true,
            Err(e) => {
                err = Some(e);
                false
            }
        }
    })?;
    match err {
        Some(e) => Err(e),
        None => Ok(found),
    }
}

/// The extension pattern over a base subset of `m` (base vertices in ascending order).
fn rebase(ext: &Pattern, a: VertexSet) -> Vec<(usize, usize)> {
    a.iter().zip(ext.base.iter()).map(|(mv, &pv)| (mv, pv)).collect()
}

/// Demands `(A, B)` of `m` with no strong copy of `B` over `A`.
pub fn audit_richness(
    m: &FiniteStructure,
    spec: &ClassSpec,
    max_base: usize,
    max_ext: usize,
) -> Result<Vec<(VertexSet, Pattern)>> {
    let mut missing = Vec::new();
    for a in closed_bases(m, spec, max_base)? {
        let base = m.restrict(a)?;
        for ext in extensions_over(&base, spec, max_ext)? {
            if !has_strong_copy(m, a, &ext, spec)? {
                missing.push((a, ext));
            }
        }
    }
    Ok(missing)
}

/// Builds `M₀ = ∅ ≤ M₁ ≤ … ≤ M_stages`, attaching a strong copy of every
/// demanded extension over every small closed base of the previous stage.
pub fn build_generic_stages(cfg: &GenericConfig) -> GenericBuild {
    let mut stages =
        vec![GenericStage { stage_index: 0, structure: FiniteStructure::empty(), provenance: Vec::new() }];
    if let ClassSpec::AntiCollapse(_) = cfg.spec {
        stages[0].structure.ensure_partition();
    }
    let mut rng = cfg.seed.map(ChaCha8Rng::seed_from_u64);
    let mut ext_cache: Vec<(CanonicalForm, Vec<Pattern>)> = Vec::new();
    for i in 1..=cfg.stages {
        let prev = stages.last().expect("stage 0 exists").structure.clone();
        match grow_stage(cfg, i, &prev, &mut rng, &mut ext_cache) {
            Ok(stage) => stages.push(stage),
            Err(e) => return GenericBuild { stages, halted: Some(e) },
        }
    }
    GenericBuild { stages, halted: None }
}

fn grow_stage(
    cfg: &GenericConfig,
    index: usize,
    prev: &FiniteStructure,
    rng: &mut Option<ChaCha8Rng>,
    cache: &mut Vec<(CanonicalForm, Vec<Pattern>)>,
) -> Result<GenericStage> {
    let mut demands: Vec<(VertexSet, Pattern)> = Vec::new();
    for a in closed_bases(prev, &cfg.spec, cfg.max_base)? {
        let base = prev.restrict(a)?;
        let key = crate::structures::canonical_labeling(&base, Some(&(0..base.n() as u32).collect::<Vec<_>>())).0;
        let exts = match cache.iter().find(|(k, _)| *k == key) {
            Some((_, e)) => e.clone(),
            None => {
                let e = extensions_over(&base, &cfg.spec, cfg.max_ext)?;
                cache.push((key, e.clone()));
                e
            }
        };
        demands.extend(exts.into_iter().map(|e| (a, e)));
    }
    if let Some(r) = rng.as_mut() {
        demands.shuffle(r);
    }
    let mut m = prev.clone();
    let mut provenance = Vec::new();
    for (a, ext) in demands {
        if has_strong_copy(&m, a, &ext, &cfg.spec)? {
            continue;
        }
        if m.n() + ext.extension_size() > cfg.max_vertices {
            return resource(format!(
                "stage {index} would exceed {} vertices (attaching over {a})",
                cfg.max_vertices
            ));
        }
        let before = m.n();
        let am = free_amalgam(&GluedTriple { b: m, c: ext.structure.clone(), glue: rebase(&ext, a) })?;
        m = am.structure;
        provenance.push(AttachRecord {
            stage: index,
            base: a,
            extension: ext,
            new_vertices: VertexSet::full(m.n()).minus(VertexSet::full(before)),
        });
    }
    Ok(GenericStage { stage_index: index, structure: m, provenance })
}
