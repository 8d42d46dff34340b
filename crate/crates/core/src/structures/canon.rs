//! Canonical forms by colour refinement, individualization and backtracking,
//! with automorphism pruning.

use super::graph::FiniteStructure;
use super::vertex_set::VertexId;

/// Byte string that is equal for two structures exactly when they are isomorphic
/// (as coloured structures, respecting `S`).
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct CanonicalForm(pub Vec<u8>);

impl CanonicalForm {
    /// Short hexadecimal rendering for reports.
    pub fn hex(&self) -> String {
        self.0.iter().map(|b| format!("{b:02x}")).collect()
    }
}

pub fn canonical_form(s: &FiniteStructure) -> CanonicalForm {
    canonical_labeling(s, None).0
}

/// Canonical form respecting an initial vertex colouring.
pub fn canonical_form_colored(s: &FiniteStructure, colors: &[u32]) -> CanonicalForm {
    canonical_labeling(s, Some(colors)).0
}

/// Returns the form and the canonical order: `order[i]` is the vertex placed at position `i`.
pub fn canonical_labeling(s: &FiniteStructure, colors: Option<&[u32]>) -> (CanonicalForm, Vec<VertexId>) {
    let n = s.n();
    let color = |v: usize| colors.map_or(0, |c| c[v]);
    let mut verts: Vec<usize> = (0..n).collect();
    verts.sort_by_key(|&v| color(v));
    let mut cells: Vec<Vec<usize>> = Vec::new();
    for v in verts {
        match cells.last_mut() {
            Some(c) if color(c[0]) == color(v) => c.push(v),
            _ => cells.push(vec![v]),
        }
    }
    let mut search = Search { s, colors, best: None, autos: Vec::new() };
    search.descend(cells, &mut Vec::new());
    let (code, order) = search.best.expect("at least one leaf");
    (CanonicalForm(code), order)
}

struct Search<'a> {
    s: &'a FiniteStructure,
    colors: Option<&'a [u32]>,
    best: Option<(Vec<u8>, Vec<usize>)>,
    autos: Vec<Vec<usize>>,
}

impl Search<'_> {
    fn refine(&self, mut cells: Vec<Vec<usize>>) -> Vec<Vec<usize>> {
        loop {
            let n = self.s.n();
            let mut cell_of = vec![0usize; n];
            for (i, c) in cells.iter().enumerate() {
                for &v in c {
                    cell_of[v] = i;
                }
            }
            let k = cells.len();
            let mut next: Vec<Vec<usize>> = Vec::with_capacity(k);
            for cell in &cells {
                if cell.len() == 1 {
                    next.push(cell.clone());
                    continue;
                }
                let mut keyed: Vec<(Vec<u16>, usize)> = cell
                    .iter()
                    .map(|&v| {
                        let mut sig = vec![0u16; 2 * k];
                        for w in self.s.neighbors(v).iter() {
                            sig[2 * cell_of[w]] += 1;
                        }
                        for w in self.s.class_of(v).without(v).iter() {
                            sig[2 * cell_of[w] + 1] += 1;
                        }
                        (sig, v)
                    })
                    .collect();
                keyed.sort();
                let mut group: Vec<usize> = Vec::new();
                for i in 0..keyed.len() {
                    if i > 0 && keyed[i].0 != keyed[i - 1].0 {
                        next.push(std::mem::take(&mut group));
                    }
                    group.push(keyed[i].1);
                }
                next.push(group);
            }
            if next.len() == cells.len() {
                return next;
            }
            cells = next;
        }
    }

    fn encode(&self, order: &[usize]) -> Vec<u8> {
        let n = order.len();
        let mut out = vec![n as u8, self.s.has_partition() as u8];
        if let Some(c) = self.colors {
            for &v in order {
                out.extend_from_slice(&c[v].to_le_bytes());
            }
        }
        let mut push_bits = |rel: &dyn Fn(usize, usize) -> bool| {
            let mut byte = 0u8;
            let mut used = 0;
            for i in 0..n {
                for j in i + 1..n {
                    byte = byte << 1 | rel(order[i], order[j]) as u8;
                    used += 1;
                    if used == 8 {
                        out.push(byte);
                        byte = 0;
                        used = 0;
                    }
                }
            }
            if used > 0 {
                out.push(byte << (8 - used));
            }
        };
        push_bits(&|u, v| self.s.has_edge(u, v));
        if self.s.has_partition() {
            push_bits(&|u, v| self.s.same_class(u, v));
        }
        out
    }

    fn twins(&self, v: usize, w: usize) -> bool {
        let s = self.s;
        s.neighbors(v).without(w) == s.neighbors(w).without(v)
            && s.class_of(v).without(v).without(w) == s.class_of(w).without(w).without(v)
    }

    fn descend(&mut self, cells: Vec<Vec<usize>>, path: &mut Vec<usize>) {
        let cells = self.refine(cells);
        let Some(target) = cells.iter().position(|c| c.len() > 1) else {
            let order: Vec<usize> = cells.into_iter().map(|c| c[0]).collect();
            let code = self.encode(&order);
            match &self.best {
                Some((b, bo)) if *b == code => {
                    let mut gamma = vec![0; order.len()];
                    for i in 0..order.len() {
                        gamma[order[i]] = bo[i];
                    }
                    self.autos.push(gamma);
                }
                Some((b, _)) if *b < code => {}
                _ => self.best = Some((code, order)),
            }
            return;
        };
        let cell = cells[target].clone();
        let mut tried: Vec<usize> = Vec::new();
        for &v in &cell {
            if tried.iter().any(|&t| self.twins(t, v)) || self.same_orbit(path, &tried, v) {
                continue;
            }
            tried.push(v);
            let mut next = cells.clone();
            let rest: Vec<usize> = cell.iter().copied().filter(|&w| w != v).collect();
            next.splice(target..=target, [vec![v], rest]);
            path.push(v);
            self.descend(next, path);
            path.pop();
        }
    }

    /// Whether `v` shares an orbit with a tried vertex under the stored
    /// automorphisms that fix the current path pointwise.
    fn same_orbit(&self, path: &[usize], tried: &[usize], v: usize) -> bool {
        if tried.is_empty() {
            return false;
        }
        let gens: Vec<&Vec<usize>> =
            self.autos.iter().filter(|g| path.iter().all(|&p| g[p] == p)).collect();
        if gens.is_empty() {
            return false;
        }
        let n = self.s.n();
        let mut parent: Vec<usize> = (0..n).collect();
        fn find(p: &mut [usize], mut x: usize) -> usize {
            while p[x] != x {
                p[x] = p[p[x]];
                x = p[x];
            }
            x
        }
        for g in gens {
            for x in 0..n {
                let (a, b) = (find(&mut parent, x), find(&mut parent, g[x]));
                if a != b {
                    parent[a] = b;
                }
            }
        }
        let rv = find(&mut parent, v);
        tried.iter().any(|&t| find(&mut parent, t) == rv)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::structures::VertexSet;

    fn c4() -> FiniteStructure {
        FiniteStructure::from_edges(4, &[(0, 1), (1, 2), (2, 3), (3, 0)]).unwrap()
    }

    #[test]
    fn relabelings_agree() {
        let a = c4();
        let b = a.permute(&[2, 0, 3, 1]).unwrap();
        assert_eq!(canonical_form(&a), canonical_form(&b));
    }

    #[test]
    fn cycle_and_path_differ() {
        let p4 = FiniteStructure::from_edges(4, &[(0, 1), (1, 2), (2, 3)]).unwrap();
        assert_ne!(canonical_form(&c4()), canonical_form(&p4));
    }

    #[test]
    fn single_vertex_constant() {
        let s = FiniteStructure::new(1).unwrap();
        assert_eq!(canonical_form(&s), canonical_form(&FiniteStructure::new(1).unwrap()));
        assert_eq!(canonical_form(&s).0, vec![1, 0]);
    }

    #[test]
    fn partition_matters() {
        let a = FiniteStructure::new(3).unwrap().with_partition(&[VertexSet::parse("0,1").unwrap()]).unwrap();
        let b = FiniteStructure::new(3).unwrap();
        assert_ne!(canonical_form(&a), canonical_form(&b));
        let c = FiniteStructure::new(3).unwrap().with_partition(&[VertexSet::parse("1,2").unwrap()]).unwrap();
        assert_eq!(canonical_form(&a), canonical_form(&c));
    }

    #[test]
    fn colors_matter() {
        let p3 = FiniteStructure::from_edges(3, &[(0, 1), (1, 2)]).unwrap();
        let end = canonical_form_colored(&p3, &[1, 0, 0]);
        let mid = canonical_form_colored(&p3, &[0, 1, 0]);
        let other_end = canonical_form_colored(&p3, &[0, 0, 1]);
        assert_ne!(end, mid);
        assert_eq!(end, other_end);
    }

    #[test]
    fn large_matching_is_fast() {
        let edges: Vec<(usize, usize)> = (0..10).map(|i| (2 * i, 2 * i + 1)).collect();
        let m = FiniteStructure::from_edges(20, &edges).unwrap();
        let perm: Vec<usize> = (0..20).map(|v| (v * 7) % 20).collect();
        assert_eq!(canonical_form(&m), canonical_form(&m.permute(&perm).unwrap()));
    }
}
