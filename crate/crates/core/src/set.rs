//! Content-compared vertex sets.

use std::fmt;

use serde::{Deserialize, Serialize};

/// Index of a vertex of the decomposable graph. Within one sampler run ids
/// are drawn from `0..n`.
pub type VertexId = usize;

/// A finite set of vertex ids, stored sorted and deduplicated.
///
/// Equality, ordering and hashing are by content, so a `VertexSet` can key
/// maps and multisets directly. Cliques, separators and the local sets
/// `S_xy`, `S_x`, `S_y`, `C_xy` of a proposal are all `VertexSet`s.
#[derive(Clone, Default, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct VertexSet(Vec<VertexId>);

impl VertexSet {
    pub fn new() -> Self {
        Self(Vec::new())
    }

    pub fn singleton(v: VertexId) -> Self {
        Self(vec![v])
    }

    /// Builds a set from an already sorted, duplicate-free vector.
    ///
    /// Only checked in debug builds.
    pub fn from_sorted(members: Vec<VertexId>) -> Self {
        debug_assert!(members.windows(2).all(|w| w[0] < w[1]));
        Self(members)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn as_slice(&self) -> &[VertexId] {
        &self.0
    }

    pub fn iter(&self) -> impl Iterator<Item = VertexId> + '_ {
        self.0.iter().copied()
    }

    pub fn contains(&self, v: VertexId) -> bool {
        self.0.binary_search(&v).is_ok()
    }

    /// Inserts `v`, returning whether it was absent.
    pub fn insert(&mut self, v: VertexId) -> bool {
        match self.0.binary_search(&v) {
            Ok(_) => false,
            Err(at) => {
                self.0.insert(at, v);
                true
            }
        }
    }

    /// Removes `v`, returning whether it was present.
    pub fn remove(&mut self, v: VertexId) -> bool {
        match self.0.binary_search(&v) {
            Ok(at) => {
                self.0.remove(at);
                true
            }
            Err(_) => false,
        }
    }

    /// A copy of this set with `v` added.
    pub fn with(&self, v: VertexId) -> Self {
        let mut out = self.clone();
        out.insert(v);
        out
    }

    /// A copy of this set with `v` removed.
    pub fn without(&self, v: VertexId) -> Self {
        let mut out = self.clone();
        out.remove(v);
        out
    }

    /// `self ⊆ other`.
    pub fn is_subset(&self, other: &VertexSet) -> bool {
        if self.len() > other.len() {
            return false;
        }
        let mut rest = other.0.iter();
        'outer: for v in &self.0 {
            for w in rest.by_ref() {
                match w.cmp(v) {
                    std::cmp::Ordering::Less => continue,
                    std::cmp::Ordering::Equal => continue 'outer,
                    std::cmp::Ordering::Greater => return false,
                }
            }
            return false;
        }
        true
    }

    /// `self ⊂ other` (strict).
    pub fn is_proper_subset(&self, other: &VertexSet) -> bool {
        self.len() < other.len() && self.is_subset(other)
    }

    pub fn is_superset(&self, other: &VertexSet) -> bool {
        other.is_subset(self)
    }

    pub fn intersection(&self, other: &VertexSet) -> VertexSet {
        let (a, b) = (&self.0, &other.0);
        let mut out = Vec::with_capacity(a.len().min(b.len()));
        let (mut i, mut j) = (0, 0);
        while i < a.len() && j < b.len() {
            match a[i].cmp(&b[j]) {
                std::cmp::Ordering::Less => i += 1,
                std::cmp::Ordering::Greater => j += 1,
                std::cmp::Ordering::Equal => {
                    out.push(a[i]);
                    i += 1;
                    j += 1;
                }
            }
        }
        VertexSet(out)
    }

    pub fn union(&self, other: &VertexSet) -> VertexSet {
        let (a, b) = (&self.0, &other.0);
        let mut out = Vec::with_capacity(a.len() + b.len());
        let (mut i, mut j) = (0, 0);
        while i < a.len() && j < b.len() {
            match a[i].cmp(&b[j]) {
                std::cmp::Ordering::Less => {
                    out.push(a[i]);
                    i += 1;
                }
                std::cmp::Ordering::Greater => {
                    out.push(b[j]);
                    j += 1;
                }
                std::cmp::Ordering::Equal => {
                    out.push(a[i]);
                    i += 1;
                    j += 1;
                }
            }
        }
        out.extend_from_slice(&a[i..]);
        out.extend_from_slice(&b[j..]);
        VertexSet(out)
    }

    /// Number of unordered pairs inside the set, `|A|(|A|-1)/2`.
    pub fn pair_count(&self) -> usize {
        let k = self.len();
        k * k.saturating_sub(1) / 2
    }
}

impl FromIterator<VertexId> for VertexSet {
    fn from_iter<I: IntoIterator<Item = VertexId>>(iter: I) -> Self {
        let mut v: Vec<VertexId> = iter.into_iter().collect();
        v.sort_unstable();
        v.dedup();
        VertexSet(v)
    }
}

impl<const N: usize> From<[VertexId; N]> for VertexSet {
    fn from(members: [VertexId; N]) -> Self {
        members.into_iter().collect()
    }
}

impl From<Vec<VertexId>> for VertexSet {
    fn from(members: Vec<VertexId>) -> Self {
        members.into_iter().collect()
    }
}

impl<'a> IntoIterator for &'a VertexSet {
    type Item = &'a VertexId;
    type IntoIter = std::slice::Iter<'a, VertexId>;

    fn into_iter(self) -> Self::IntoIter {
        self.0.iter()
    }
}

impl fmt::Debug for VertexSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl fmt::Display for VertexSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        for (i, v) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{v}")?;
        }
        f.write_str("}")
    }
}
