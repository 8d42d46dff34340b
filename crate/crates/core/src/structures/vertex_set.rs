use crate::error::{input, Result};
use std::cmp::Ordering;
use std::fmt;

/// Most vertices a structure may carry (one machine word of membership bits).
pub const MAX_VERTICES: usize = 64;

/// Dense vertex index within one structure.
pub type VertexId = usize;

/// A set of vertices stored as a 64-bit mask.
///
/// Ordering is lexicographic on the ascending vertex lists, so `{0,2} < {1}`
/// and `{0} < {0,1}`.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Default)]
pub struct VertexSet(pub u64);

impl VertexSet {
    pub const EMPTY: VertexSet = VertexSet(0);

    pub fn full(n: usize) -> Self {
        debug_assert!(n <= MAX_VERTICES);
        if n >= 64 {
            VertexSet(u64::MAX)
        } else {
            VertexSet((1u64 << n) - 1)
        }
    }

    pub fn singleton(v: VertexId) -> Self {
        VertexSet(1u64 << v)
    }

    pub fn bits(self) -> u64 {
        self.0
    }

    pub fn contains(self, v: VertexId) -> bool {
        v < 64 && self.0 >> v & 1 == 1
    }

    pub fn insert(&mut self, v: VertexId) {
        self.0 |= 1u64 << v;
    }

    pub fn remove(&mut self, v: VertexId) {
        self.0 &= !(1u64 << v);
    }

    pub fn with(self, v: VertexId) -> Self {
        VertexSet(self.0 | 1u64 << v)
    }

    pub fn without(self, v: VertexId) -> Self {
        VertexSet(self.0 & !(1u64 << v))
    }

    pub fn union(self, o: Self) -> Self {
        VertexSet(self.0 | o.0)
    }

    pub fn inter(self, o: Self) -> Self {
        VertexSet(self.0 & o.0)
    }

    pub fn minus(self, o: Self) -> Self {
        VertexSet(self.0 & !o.0)
    }

    pub fn is_subset(self, o: Self) -> bool {
        self.0 & !o.0 == 0
    }

    pub fn is_proper_subset(self, o: Self) -> bool {
        self.is_subset(o) && self != o
    }

    pub fn is_disjoint(self, o: Self) -> bool {
        self.0 & o.0 == 0
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn first(self) -> Option<VertexId> {
        (self.0 != 0).then(|| self.0.trailing_zeros() as usize)
    }

    pub fn iter(self) -> VertexIter {
        VertexIter(self.0)
    }

    pub fn to_vec(self) -> Vec<VertexId> {
        self.iter().collect()
    }

    /// All subsets of `self`, in increasing mask order (empty first, `self` last).
    pub fn subsets(self) -> SubsetIter {
        SubsetIter { mask: self.0, next: Some(0) }
    }

    /// Checks that every member is below `n`.
    pub fn check_within(self, n: usize) -> Result<()> {
        if self.is_subset(VertexSet::full(n)) {
            Ok(())
        } else {
            input(format!("vertex set {self} leaves the structure (n = {n})"))
        }
    }

    /// Parses a comma-separated vertex list; the empty string is the empty set.
    pub fn parse(text: &str) -> Result<Self> {
        let t = text.trim().trim_start_matches('{').trim_end_matches('}');
        let mut s = VertexSet::EMPTY;
        for part in t.split(',').map(str::trim).filter(|p| !p.is_empty()) {
            let v: usize = match part.parse() {
                Ok(v) => v,
                Err(_) => return input(format!("bad vertex `{part}`")),
            };
            if v >= MAX_VERTICES {
                return input(format!("vertex {v} exceeds the {MAX_VERTICES}-vertex limit"));
            }
            s.insert(v);
        }
        Ok(s)
    }

    /// Comma-separated list without braces.
    pub fn to_list(self) -> String {
        self.iter().map(|v| v.to_string()).collect::<Vec<_>>().join(",")
    }
}

impl FromIterator<VertexId> for VertexSet {
    fn from_iter<I: IntoIterator<Item = VertexId>>(it: I) -> Self {
        let mut s = VertexSet::EMPTY;
        for v in it {
            s.insert(v);
        }
        s
    }
}

impl Ord for VertexSet {
    fn cmp(&self, other: &Self) -> Ordering {
        self.iter().cmp(other.iter())
    }
}

impl PartialOrd for VertexSet {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for VertexSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{{}}}", self.to_list())
    }
}

impl fmt::Debug for VertexSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

pub struct VertexIter(u64);

impl Iterator for VertexIter {
    type Item = VertexId;
    fn next(&mut self) -> Option<VertexId> {
        if self.0 == 0 {
            return None;
        }
        let v = self.0.trailing_zeros() as usize;
        self.0 &= self.0 - 1;
        Some(v)
    }
    fn size_hint(&self) -> (usize, Option<usize>) {
        let n = self.0.count_ones() as usize;
        (n, Some(n))
    }
}

impl ExactSizeIterator for VertexIter {}

/// Submask enumeration of a fixed mask.
pub struct SubsetIter {
    mask: u64,
    next: Option<u64>,
}

impl Iterator for SubsetIter {
    type Item = VertexSet;
    fn next(&mut self) -> Option<VertexSet> {
        let cur = self.next?;
        self.next = if cur == self.mask {
            None
        } else {
            Some((cur.wrapping_sub(self.mask)) & self.mask)
        };
        Some(VertexSet(cur))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn lexicographic_order() {
        let s = |l: &[usize]| l.iter().copied().collect::<VertexSet>();
        assert!(s(&[0, 2]) < s(&[1]));
        assert!(s(&[0]) < s(&[0, 1]));
        assert!(s(&[]) < s(&[0]));
        assert!(s(&[0, 1]) < s(&[0, 2]));
    }

    #[test]
    fn subsets_enumerates_all() {
        let m = VertexSet::parse("1,3,4").unwrap();
        let all: Vec<_> = m.subsets().collect();
        assert_eq!(all.len(), 8);
        assert!(all.iter().all(|s| s.is_subset(m)));
        assert_eq!(all[0], VertexSet::EMPTY);
        assert_eq!(*all.last().unwrap(), m);
    }

    #[test]
    fn parse_and_print() {
        let s = VertexSet::parse("3, 0,2").unwrap();
        assert_eq!(s.to_string(), "{0,2,3}");
        assert_eq!(VertexSet::parse("").unwrap(), VertexSet::EMPTY);
        assert_eq!(VertexSet::parse("{1,2}").unwrap().to_list(), "1,2");
        assert!(VertexSet::parse("a").is_err());
        assert!(VertexSet::parse("64").is_err());
    }

    #[test]
    fn full_sets() {
        assert_eq!(VertexSet::full(0), VertexSet::EMPTY);
        assert_eq!(VertexSet::full(3).len(), 3);
        assert_eq!(VertexSet::full(64).len(), 64);
    }
}
