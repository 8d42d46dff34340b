//! Finite-depth closure types of tuples, relative to a finite ambient.
//!
//! A depth-0 tree is the set of minimal-pair types realized over the tuple.
//! A depth-`k+1` node pairs such a type with the depth-`k` tree of the tuple
//! extended by the realization; types that are not realized are absent,
//! which is how negated formulas are represented.

use crate::closure::enumerate_minimal_pairs;
use crate::error::{input, resource, Result};
use crate::predim::ClassSpec;
use crate::structures::{canonical_form_colored, CanonicalForm, FiniteStructure, VertexId, VertexSet};
use std::collections::{BTreeSet, HashMap};
use std::fmt;

/// Default cap on the number of new vertices in one move.
pub const DEFAULT_CLTP_EXT: usize = 3;
/// Longest tuple the recursion may reach.
pub const MAX_TUPLE: usize = 20;

/// The type `Δ_B` of a realized minimal pair `(ā₀, B)` over a tuple `ā`:
/// the anchor positions `ā₀` and the isomorphism type of `B` with tuple
/// vertices coloured by position and new vertices by their order in `x̄`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PairKey {
    pub anchor: Vec<usize>,
    pub new_vertices: usize,
    pub form: CanonicalForm,
}

impl fmt::Display for PairKey {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let hex = self.form.hex();
        let short = &hex[..hex.len().min(16)];
        write!(f, "anchor {:?} +{} [{short}]", self.anchor, self.new_vertices)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CltpNode {
    pub key: PairKey,
    /// Depth-`k-1` tree of the extended tuple; `None` at depth 0.
    pub children: Option<ClosureTypeTree>,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ClosureTypeTree {
    pub depth: usize,
    pub nodes: BTreeSet<CltpNode>,
}

impl ClosureTypeTree {
    /// The tree at a smaller depth.
    pub fn truncate(&self, depth: usize) -> ClosureTypeTree {
        assert!(depth <= self.depth, "cannot deepen a tree by truncation");
        let nodes = self
            .nodes
            .iter()
            .map(|n| CltpNode {
                key: n.key.clone(),
                children: if depth == 0 { None } else { n.children.as_ref().map(|c| c.truncate(depth - 1)) },
            })
            .collect();
        ClosureTypeTree { depth, nodes }
    }

    pub fn node_count(&self) -> usize {
        self.nodes.iter().map(|n| 1 + n.children.as_ref().map_or(0, |c| c.node_count())).sum()
    }

    fn write_indented(&self, f: &mut fmt::Formatter<'_>, indent: usize) -> fmt::Result {
        for n in &self.nodes {
            writeln!(f, "{:indent$}{}", "", n.key, indent = indent)?;
            if let Some(c) = &n.children {
                c.write_indented(f, indent + 2)?;
            }
        }
        Ok(())
    }
}

impl fmt::Display for ClosureTypeTree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "depth {} nodes {}", self.depth, self.node_count())?;
        self.write_indented(f, 2)
    }
}

/// Evaluates closure types inside one ambient, memoized by `(tuple, depth)`.
pub struct CltpEngine<'a> {
    ambient: &'a FiniteStructure,
    spec: ClassSpec,
    max_ext: usize,
    memo: HashMap<(Vec<VertexId>, usize), ClosureTypeTree>,
}

impl<'a> CltpEngine<'a> {
    pub fn new(ambient: &'a FiniteStructure, spec: &ClassSpec, max_ext: usize) -> Self {
        CltpEngine { ambient, spec: spec.clone(), max_ext, memo: HashMap::new() }
    }

    pub fn tree(&mut self, tuple: &[VertexId], depth: usize) -> Result<ClosureTypeTree> {
        check_tuple(self.ambient, tuple)?;
        self.eval(tuple, depth)
    }

    fn eval(&mut self, tuple: &[VertexId], depth: usize) -> Result<ClosureTypeTree> {
        if let Some(t) = self.memo.get(&(tuple.to_vec(), depth)) {
            return Ok(t.clone());
        }
        if tuple.len() > MAX_TUPLE {
            return resource(format!("extended tuple exceeds {MAX_TUPLE} vertices"));
        }
        let set: VertexSet = tuple.iter().copied().collect();
        let mut nodes = BTreeSet::new();
        for pair in enumerate_minimal_pairs(self.ambient, set, &self.spec, self.max_ext)? {
            let fresh = pair.ext.minus(set).to_vec();
            let mut anchor: Vec<usize> = pair.base.iter().map(|v| position(tuple, v)).collect();
            anchor.sort_unstable();
            for order in permutations(&fresh) {
                let key = self.key(tuple, &anchor, pair.ext, &order);
                let children = if depth == 0 {
                    None
                } else {
                    let mut ext = tuple.to_vec();
                    ext.extend_from_slice(&order);
                    Some(self.eval(&ext, depth - 1)?)
                };
                nodes.insert(CltpNode { key, children });
            }
        }
        let tree = ClosureTypeTree { depth, nodes };
        self.memo.insert((tuple.to_vec(), depth), tree.clone());
        Ok(tree)
    }

    fn key(&self, tuple: &[VertexId], anchor: &[usize], b: VertexSet, order: &[VertexId]) -> PairKey {
        let colors: Vec<u32> = b
            .iter()
            .map(|v| match order.iter().position(|&x| x == v) {
                Some(i) => (1 + tuple.len() + i) as u32,
                None => 1 + position(tuple, v) as u32,
            })
            .collect();
        let structure = self.ambient.restrict(b).expect("b within ambient");
        PairKey {
            anchor: anchor.to_vec(),
            new_vertices: order.len(),
            form: canonical_form_colored(&structure, &colors),
        }
    }
}

fn position(tuple: &[VertexId], v: VertexId) -> usize {
    tuple.iter().position(|&t| t == v).expect("vertex of the tuple")
}

fn check_tuple(ambient: &FiniteStructure, tuple: &[VertexId]) -> Result<()> {
    let mut seen = VertexSet::EMPTY;
    for &v in tuple {
        if v >= ambient.n() {
            return input(format!("vertex {v} out of range"));
        }
        if seen.contains(v) {
            return input(format!("vertex {v} repeated in the tuple"));
        }
        seen.insert(v);
    }
    Ok(())
}

fn permutations(items: &[VertexId]) -> Vec<Vec<VertexId>> {
    if items.is_empty() {
        return vec![Vec::new()];
    }
    let mut out = Vec::new();
    for i in 0..items.len() {
        let mut rest = items.to_vec();
        let head = rest.remove(i);
        for mut tail in permutations(&rest) {
            tail.insert(0, head);
            out.push(tail);
        }
    }
    out
}

pub fn cltp(
    ambient: &FiniteStructure,
    tuple: &[VertexId],
    depth: usize,
    spec: &ClassSpec,
    max_ext: usize,
) -> Result<ClosureTypeTree> {
    CltpEngine::new(ambient, spec, max_ext).tree(tuple, depth)
}

/// A formula realized over one tuple and not the other: the chain of pair
/// types leading to the first node present on one side only.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Certificate {
    /// 1 or 2: which tuple realizes the formula.
    pub realized_by: u8,
    pub path: Vec<PairKey>,
}

impl fmt::Display for Certificate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "realized by tuple {} only:", self.realized_by)?;
        for k in &self.path {
            write!(f, " / {k}")?;
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CltpComparison {
    pub equal: bool,
    /// Least depth at which the trees differ.
    pub distinguishing_depth: Option<usize>,
    pub certificate: Option<Certificate>,
}

fn certificate(t1: &ClosureTypeTree, t2: &ClosureTypeTree) -> Option<Certificate> {
    for (side, a, b) in [(1u8, t1, t2), (2u8, t2, t1)] {
        if let Some(n) = a.nodes.iter().find(|n| !b.nodes.contains(n)) {
            let mut path = vec![n.key.clone()];
            // Descend through a same-key counterpart to show where the subtrees part.
            if let (Some(c), Some(m)) = (&n.children, b.nodes.iter().find(|m| m.key == n.key)) {
                if let Some(sub) = certificate(c, m.children.as_ref().expect("same depth")) {
                    if sub.realized_by == 1 {
                        path.extend(sub.path);
                    }
                }
            }
            return Some(Certificate { realized_by: side, path });
        }
    }
    None
}

/// Compares closure types of two tuples at every depth up to `depth`.
pub fn cltp_equal(
    ambient: &FiniteStructure,
    t1: &[VertexId],
    t2: &[VertexId],
    depth: usize,
    spec: &ClassSpec,
    max_ext: usize,
) -> Result<CltpComparison> {
    if t1.len() != t2.len() {
        return input(format!("tuples of lengths {} and {}", t1.len(), t2.len()));
    }
    let mut engine = CltpEngine::new(ambient, spec, max_ext);
    for d in 0..=depth {
        let a = engine.tree(t1, d)?;
        let b = engine.tree(t2, d)?;
        if a != b {
            return Ok(CltpComparison { equal: false, distinguishing_depth: Some(d), certificate: certificate(&a, &b) });
        }
    }
    Ok(CltpComparison { equal: true, distinguishing_depth: None, certificate: None })
}
