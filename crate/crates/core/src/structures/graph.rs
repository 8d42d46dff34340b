use super::vertex_set::{VertexId, VertexSet, MAX_VERTICES};
use crate::error::{input, Result};

/// A finite simple graph, optionally expanded by an equivalence relation `S`
/// given as a partition of the vertices.
#[derive(Clone, PartialEq, Eq, Hash, Debug, Default)]
pub struct FiniteStructure {
    adj: Vec<VertexSet>,
    /// `classes[v]` is the block containing `v`.
    classes: Option<Vec<VertexSet>>,
}

/// An induced substructure together with the map from new to old indices.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Induced {
    pub structure: FiniteStructure,
    pub map: Vec<VertexId>,
}

impl FiniteStructure {
    pub fn new(n: usize) -> Result<Self> {
        if n > MAX_VERTICES {
            return input(format!("{n} vertices exceeds the {MAX_VERTICES}-vertex limit"));
        }
        Ok(FiniteStructure { adj: vec![VertexSet::EMPTY; n], classes: None })
    }

    pub fn empty() -> Self {
        FiniteStructure::default()
    }

    pub fn from_edges(n: usize, edges: &[(VertexId, VertexId)]) -> Result<Self> {
        let mut s = FiniteStructure::new(n)?;
        for &(u, v) in edges {
            s.add_edge(u, v)?;
        }
        Ok(s)
    }

    pub fn n(&self) -> usize {
        self.adj.len()
    }

    pub fn vertices(&self) -> VertexSet {
        VertexSet::full(self.n())
    }

    fn check_vertex(&self, v: VertexId) -> Result<()> {
        if v < self.n() {
            Ok(())
        } else {
            input(format!("vertex {v} out of range (n = {})", self.n()))
        }
    }

    pub fn add_vertex(&mut self) -> Result<VertexId> {
        let v = self.n();
        if v >= MAX_VERTICES {
            return input(format!("cannot exceed {MAX_VERTICES} vertices"));
        }
        self.adj.push(VertexSet::EMPTY);
        if let Some(c) = &mut self.classes {
            c.push(VertexSet::singleton(v));
        }
        Ok(v)
    }

    pub fn add_edge(&mut self, u: VertexId, v: VertexId) -> Result<()> {
        self.check_vertex(u)?;
        self.check_vertex(v)?;
        if u == v {
            return input(format!("loop at vertex {u}"));
        }
        self.adj[u].insert(v);
        self.adj[v].insert(u);
        Ok(())
    }

    pub fn remove_edge(&mut self, u: VertexId, v: VertexId) {
        if u < self.n() && v < self.n() {
            self.adj[u].remove(v);
            self.adj[v].remove(u);
        }
    }

    pub fn has_edge(&self, u: VertexId, v: VertexId) -> bool {
        u < self.n() && self.adj[u].contains(v)
    }

    pub fn neighbors(&self, v: VertexId) -> VertexSet {
        self.adj[v]
    }

    /// Vertices outside `set` adjacent to some member of `set`.
    pub fn boundary(&self, set: VertexSet) -> VertexSet {
        set.iter().fold(VertexSet::EMPTY, |acc, v| acc.union(self.adj[v])).minus(set)
    }

    pub fn degree(&self, v: VertexId) -> usize {
        self.adj[v].len()
    }

    pub fn edge_count(&self) -> usize {
        self.edges_in(self.vertices())
    }

    /// Number of edges with both ends in `set`.
    pub fn edges_in(&self, set: VertexSet) -> usize {
        set.iter().map(|v| self.adj[v].inter(set).len()).sum::<usize>() / 2
    }

    /// Number of edges from `a` to `b`; the sets should be disjoint.
    pub fn edges_between(&self, a: VertexSet, b: VertexSet) -> usize {
        a.iter().map(|v| self.adj[v].inter(b).len()).sum()
    }

    /// Edge list with `u < v`, ascending.
    pub fn edges(&self) -> Vec<(VertexId, VertexId)> {
        let mut out = Vec::new();
        for u in 0..self.n() {
            for v in self.adj[u].iter().filter(|&v| v > u) {
                out.push((u, v));
            }
        }
        out
    }

    pub fn has_partition(&self) -> bool {
        self.classes.is_some()
    }

    /// Installs an `S`-partition; vertices not covered by `blocks` become singletons.
    pub fn set_partition(&mut self, blocks: &[VertexSet]) -> Result<()> {
        let n = self.n();
        let mut classes: Vec<VertexSet> = (0..n).map(VertexSet::singleton).collect();
        let mut seen = VertexSet::EMPTY;
        for &b in blocks {
            b.check_within(n)?;
            if !b.is_disjoint(seen) {
                return input(format!("S-blocks overlap at {}", b.inter(seen)));
            }
            seen = seen.union(b);
            for v in b.iter() {
                classes[v] = b;
            }
        }
        self.classes = Some(classes);
        Ok(())
    }

    /// Gives every vertex its own class if no partition is present.
    pub fn ensure_partition(&mut self) {
        if self.classes.is_none() {
            self.classes = Some((0..self.n()).map(VertexSet::singleton).collect());
        }
    }

    pub fn with_partition(mut self, blocks: &[VertexSet]) -> Result<Self> {
        self.set_partition(blocks)?;
        Ok(self)
    }

    /// Moves `v` into the class of `w` (both must exist; a partition is created if absent).
    pub fn join_class(&mut self, v: VertexId, w: VertexId) -> Result<()> {
        self.check_vertex(v)?;
        self.check_vertex(w)?;
        self.ensure_partition();
        let classes = self.classes.as_mut().expect("partition present");
        let old = classes[v].without(v);
        for u in old.iter() {
            classes[u] = old;
        }
        let merged = classes[w].with(v);
        for u in merged.iter() {
            classes[u] = merged;
        }
        Ok(())
    }

    /// The `S`-class of `v`; a singleton when no partition is present.
    pub fn class_of(&self, v: VertexId) -> VertexSet {
        match &self.classes {
            Some(c) => c[v],
            None => VertexSet::singleton(v),
        }
    }

    pub fn same_class(&self, u: VertexId, v: VertexId) -> bool {
        u == v || self.classes.as_ref().is_some_and(|c| c[u].contains(v))
    }

    /// Union of the classes meeting `set`.
    pub fn s_closure(&self, set: VertexSet) -> VertexSet {
        set.iter().fold(VertexSet::EMPTY, |acc, v| acc.union(self.class_of(v)))
    }

    /// Vertices of `among` that are `S`-related to some vertex of `set` (excluding `set`).
    pub fn s_related(&self, set: VertexSet, among: VertexSet) -> VertexSet {
        self.s_closure(set).inter(among).minus(set)
    }

    /// The blocks of the partition in lexicographic order (singletons when absent).
    pub fn blocks(&self) -> Vec<VertexSet> {
        let mut out: Vec<VertexSet> = Vec::new();
        let mut seen = VertexSet::EMPTY;
        for v in 0..self.n() {
            if !seen.contains(v) {
                let c = self.class_of(v);
                seen = seen.union(c);
                out.push(c);
            }
        }
        out
    }

    /// True when `set` lies inside one `S`-class (vacuously for the empty set).
    pub fn is_s_homogeneous(&self, set: VertexSet) -> bool {
        match set.first() {
            None => true,
            Some(v) => set.is_subset(self.class_of(v)),
        }
    }

    /// The same graph without the `S`-expansion.
    pub fn reduct(&self) -> Self {
        FiniteStructure { adj: self.adj.clone(), classes: None }
    }

    pub fn induced(&self, set: VertexSet) -> Result<Induced> {
        set.check_within(self.n())?;
        let map = set.to_vec();
        let mut pos = vec![usize::MAX; self.n()];
        for (i, &v) in map.iter().enumerate() {
            pos[v] = i;
        }
        let relabel = |s: VertexSet| s.inter(set).iter().map(|v| pos[v]).collect::<VertexSet>();
        let adj = map.iter().map(|&v| relabel(self.adj[v])).collect();
        let classes = self.classes.as_ref().map(|c| map.iter().map(|&v| relabel(c[v])).collect());
        Ok(Induced { structure: FiniteStructure { adj, classes }, map })
    }

    /// Induced substructure on `set`, dropping the index map.
    pub fn restrict(&self, set: VertexSet) -> Result<Self> {
        Ok(self.induced(set)?.structure)
    }

    /// Relabels vertex `v` as `perm[v]`.
    pub fn permute(&self, perm: &[VertexId]) -> Result<Self> {
        let n = self.n();
        let image: VertexSet = perm.iter().copied().collect();
        if perm.len() != n || perm.iter().any(|&p| p >= n) || image.len() != n {
            return input("not a permutation of the vertex set");
        }
        let map = |s: VertexSet| s.iter().map(|v| perm[v]).collect::<VertexSet>();
        let mut adj = vec![VertexSet::EMPTY; n];
        for v in 0..n {
            adj[perm[v]] = map(self.adj[v]);
        }
        let classes = self.classes.as_ref().map(|c| {
            let mut out = vec![VertexSet::EMPTY; n];
            for v in 0..n {
                out[perm[v]] = map(c[v]);
            }
            out
        });
        Ok(FiniteStructure { adj, classes })
    }

    /// Disjoint union; `other`'s vertices are shifted past `self`'s.
    pub fn disjoint_union(&self, other: &Self) -> Result<Self> {
        let off = self.n();
        let mut out = FiniteStructure::new(off + other.n())?;
        for (u, v) in self.edges() {
            out.add_edge(u, v)?;
        }
        for (u, v) in other.edges() {
            out.add_edge(u + off, v + off)?;
        }
        if self.has_partition() || other.has_partition() {
            let mut blocks = self.blocks();
            blocks.extend(other.blocks().into_iter().map(|b| VertexSet(b.0 << off)));
            out.set_partition(&blocks)?;
        }
        Ok(out)
    }

    /// Connected components of the subgraph induced on `set`, in order of least vertex.
    pub fn components(&self, set: VertexSet) -> Vec<VertexSet> {
        let mut rest = set;
        let mut out = Vec::new();
        while let Some(v) = rest.first() {
            let mut comp = VertexSet::singleton(v);
            let mut frontier = comp;
            while !frontier.is_empty() {
                let next = self.boundary(frontier).inter(rest).minus(comp);
                comp = comp.union(next);
                frontier = next;
            }
            rest = rest.minus(comp);
            out.push(comp);
        }
        out
    }

    /// Visits each nonempty connected subset of `region` with at most `max_size`
    /// vertices exactly once. The visitor returns `false` to stop early; the
    /// return value says whether the walk finished.
    pub fn for_each_connected_subset(
        &self,
        region: VertexSet,
        max_size: usize,
        mut visit: impl FnMut(VertexSet) -> bool,
    ) -> bool {
        fn grow(
            g: &FiniteStructure,
            region: VertexSet,
            max_size: usize,
            s: VertexSet,
            mut ext: VertexSet,
            mut forb: VertexSet,
            visit: &mut dyn FnMut(VertexSet) -> bool,
        ) -> bool {
            if !visit(s) {
                return false;
            }
            if s.len() >= max_size {
                return true;
            }
            while let Some(u) = ext.first() {
                ext.remove(u);
                let s2 = s.with(u);
                let ext2 = ext.union(g.neighbors(u).inter(region)).minus(s2).minus(forb);
                if !grow(g, region, max_size, s2, ext2, forb, visit) {
                    return false;
                }
                forb.insert(u);
            }
            true
        }
        if max_size == 0 {
            return true;
        }
        let mut forb = VertexSet::EMPTY;
        for r in region.iter() {
            let s = VertexSet::singleton(r);
            let ext = self.neighbors(r).inter(region).minus(forb).minus(s);
            if !grow(self, region, max_size, s, ext, forb, &mut visit) {
                return false;
            }
            forb.insert(r);
        }
        true
    }

    /// True when the subgraph induced on the nonempty `set` is connected.
    pub fn is_connected_set(&self, set: VertexSet) -> bool {
        !set.is_empty() && self.components(set).len() == 1
    }
}
