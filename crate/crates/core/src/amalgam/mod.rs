//! Free amalgamation, `⊕`-families, full-amalgamation checks, finite generic
//! stages and the arithmetic-witness predicate.

mod generic;
mod witness;

pub use generic::{
    audit_richness, build_generic_stages, extensions_over, AttachRecord, GenericBuild, GenericConfig, GenericStage,
};
pub use witness::{
    check_arithmetic_witness, doubled_part, search_arithmetic_witness, WitnessConfig, WitnessReport,
};

use crate::error::{input, Result};
use crate::predim::{class_membership_with, is_strong_with, ClassSpec, Limits};
use crate::structures::{FiniteStructure, Pattern, VertexId, VertexSet};

/// Two structures glued along an identification of a common substructure `A`:
/// each pair `(b, c)` identifies vertex `b` of `B` with vertex `c` of `C`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GluedTriple {
    pub b: FiniteStructure,
    pub c: FiniteStructure,
    pub glue: Vec<(VertexId, VertexId)>,
}

impl GluedTriple {
    /// Parses `b:c,b:c,...`.
    pub fn parse_glue(text: &str) -> Result<Vec<(VertexId, VertexId)>> {
        text.split(',')
            .map(str::trim)
            .filter(|p| !p.is_empty())
            .map(|p| {
                let (l, r) = p.split_once(':').ok_or_else(|| crate::Error::Input(format!("bad glue pair `{p}`")))?;
                let l = l.trim().parse().map_err(|_| crate::Error::Input(format!("bad vertex `{l}`")))?;
                let r = r.trim().parse().map_err(|_| crate::Error::Input(format!("bad vertex `{r}`")))?;
                Ok((l, r))
            })
            .collect()
    }
}

/// `D = B ⊕_A C` with the images of `B` and `C` in `D`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Amalgam {
    pub structure: FiniteStructure,
    /// Vertex `i` of `B` is `from_b[i]` in `D` (always `i`).
    pub from_b: Vec<VertexId>,
    pub from_c: Vec<VertexId>,
    glued: VertexSet,
}

impl Amalgam {
    pub fn a_set(&self) -> VertexSet {
        self.glued
    }
    pub fn b_set(&self) -> VertexSet {
        self.from_b.iter().copied().collect()
    }
    pub fn c_set(&self) -> VertexSet {
        self.from_c.iter().copied().collect()
    }
}

fn validate_glue(t: &GluedTriple) -> Result<()> {
    let (b, c) = (&t.b, &t.c);
    let mut bs = VertexSet::EMPTY;
    let mut cs = VertexSet::EMPTY;
    for &(x, y) in &t.glue {
        if x >= b.n() || y >= c.n() {
            return input(format!("glue pair {x}:{y} out of range"));
        }
        if bs.contains(x) || cs.contains(y) {
            return input(format!("glue pair {x}:{y} repeats a vertex"));
        }
        bs.insert(x);
        cs.insert(y);
    }
    let s = b.has_partition() && c.has_partition();
    for (i, &(x1, y1)) in t.glue.iter().enumerate() {
        for &(x2, y2) in &t.glue[i + 1..] {
            if b.has_edge(x1, x2) != c.has_edge(y1, y2) {
                return input(format!("glue is not an isomorphism: edge {x1}-{x2} vs {y1}-{y2}"));
            }
            if s && b.same_class(x1, x2) != c.same_class(y1, y2) {
                return input(format!("glue is not an isomorphism: S at {x1},{x2} vs {y1},{y2}"));
            }
        }
    }
    Ok(())
}

/// Union over the shared part with exactly the relations of `B` and of `C`;
/// `S`-classes are merged along the identification.
pub fn free_amalgam(t: &GluedTriple) -> Result<Amalgam> {
    validate_glue(t)?;
    let (b, c) = (&t.b, &t.c);
    let mut from_c = vec![usize::MAX; c.n()];
    let mut glued = VertexSet::EMPTY;
    for &(x, y) in &t.glue {
        from_c[y] = x;
        glued.insert(x);
    }
    let mut next = b.n();
    for slot in from_c.iter_mut().filter(|s| **s == usize::MAX) {
        *slot = next;
        next += 1;
    }
    let mut d = FiniteStructure::new(next)?;
    for (u, v) in b.edges() {
        d.add_edge(u, v)?;
    }
    for (u, v) in c.edges() {
        d.add_edge(from_c[u], from_c[v])?;
    }
    if b.has_partition() || c.has_partition() {
        let mut parent: Vec<usize> = (0..next).collect();
        fn find(p: &mut [usize], mut x: usize) -> usize {
            while p[x] != x {
                p[x] = p[p[x]];
                x = p[x];
            }
            x
        }
        let join = |p: &mut Vec<usize>, x: usize, y: usize| {
            let (a, b) = (find(p, x), find(p, y));
            if a != b {
                p[a.max(b)] = a.min(b);
            }
        };
        for blk in b.blocks() {
            let f = blk.first().expect("nonempty block");
            for v in blk.iter() {
                join(&mut parent, f, v);
            }
        }
        for blk in c.blocks() {
            let f = from_c[blk.first().expect("nonempty block")];
            for v in blk.iter() {
                join(&mut parent, f, from_c[v]);
            }
        }
        let mut blocks: Vec<VertexSet> = vec![VertexSet::EMPTY; next];
        for v in 0..next {
            let root = find(&mut parent, v);
            blocks[root].insert(v);
        }
        d.set_partition(&blocks.into_iter().filter(|b| b.len() > 1).collect::<Vec<_>>())?;
    }
    Ok(Amalgam { structure: d, from_b: (0..b.n()).collect(), from_c, glued })
}

/// `⊕_{i<n}(B_i/A)` as a left fold, with the images of each member.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Family {
    pub structure: FiniteStructure,
    /// Image of `A`'s vertex `i` is `base[i]`.
    pub base: Vec<VertexId>,
    pub parts: Vec<VertexSet>,
}

impl Family {
    pub fn base_set(&self) -> VertexSet {
        self.base.iter().copied().collect()
    }
}

/// Each member's `base[i]` is its copy of `A`'s vertex `i`.
pub fn oplus_family(a: &FiniteStructure, members: &[Pattern]) -> Result<Family> {
    for (k, m) in members.iter().enumerate() {
        if m.base.len() != a.n() {
            return input(format!("member {k} has a base of {} vertices, A has {}", m.base.len(), a.n()));
        }
        let ident: Vec<(VertexId, VertexId)> = (0..a.n()).map(|i| (i, m.base[i])).collect();
        validate_glue(&GluedTriple { b: a.clone(), c: m.structure.clone(), glue: ident })
            .map_err(|e| crate::Error::Input(format!("member {k}: base does not match A ({e})")))?;
    }
    let Some((first, rest)) = members.split_first() else {
        return Ok(Family { structure: a.clone(), base: (0..a.n()).collect(), parts: Vec::new() });
    };
    let mut d = first.structure.clone();
    let base = first.base.clone();
    let mut parts = vec![d.vertices()];
    for m in rest {
        let glue = (0..a.n()).map(|i| (base[i], m.base[i])).collect();
        let am = free_amalgam(&GluedTriple { b: d, c: m.structure.clone(), glue })?;
        parts.push(am.c_set());
        d = am.structure;
    }
    Ok(Family { structure: d, base, parts })
}

/// `n` free copies of `(A, B)` over `A`, where `a ⊆ b.vertices()`.
pub fn oplus_power(b: &FiniteStructure, a: VertexSet, n: usize) -> Result<Family> {
    let pattern = Pattern { structure: b.clone(), base: a.to_vec() };
    let base = b.restrict(a)?;
    oplus_family(&base, &vec![pattern; n])
}

/// Whether `⊕_{i<n}(B/A)` lies in the class for every `1 ≤ n ≤ upto`.
pub fn free_powers_in_class(b: &FiniteStructure, a: VertexSet, spec: &ClassSpec, upto: usize) -> Result<bool> {
    for n in 1..=upto {
        let fam = oplus_power(b, a, n)?;
        if !class_membership_with(&fam.structure, spec, &Limits::unbounded())? {
            return Ok(false);
        }
    }
    Ok(true)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FullAmalgamationReport {
    pub amalgam: Amalgam,
    /// `C ≤ D`.
    pub c_strong: bool,
    pub c_witness: Option<VertexSet>,
    /// `D` lies in the class.
    pub d_in_class: bool,
}

impl FullAmalgamationReport {
    pub fn holds(&self) -> bool {
        self.c_strong && self.d_in_class
    }
}

/// Given `A ≤ B` (checked) and `A ⊆ C`, builds `D = B ⊕_A C` and tests `C ≤ D`.
pub fn check_full_amalgamation_instance(t: &GluedTriple, spec: &ClassSpec) -> Result<FullAmalgamationReport> {
    validate_glue(t)?;
    let a_in_b: VertexSet = t.glue.iter().map(|&(x, _)| x).collect();
    let pre = is_strong_with(&t.b, a_in_b, t.b.vertices(), spec, &Limits::unbounded())?;
    if !pre.strong {
        return input(format!(
            "precondition A ≤ B fails with witness B0 = {}",
            pre.witness.map(|w| w.to_string()).unwrap_or_default()
        ));
    }
    let am = free_amalgam(t)?;
    let d = &am.structure;
    let c = is_strong_with(d, am.c_set(), d.vertices(), spec, &Limits::unbounded())?;
    let d_in_class = class_membership_with(d, spec, &Limits::unbounded())?;
    Ok(FullAmalgamationReport { c_strong: c.strong, c_witness: c.witness, d_in_class, amalgam: am })
}
