//! Undirected graphs over a fixed vertex universe.

use std::collections::VecDeque;

use crate::error::{Error, Result};
use crate::search::{search, SearchDiscipline};
use crate::set::{VertexId, VertexSet};

/// Symmetric adjacency-set graph on the vertices `0..n`.
///
/// The universe is fixed at construction; only edges change.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct UndirectedGraph {
    adj: Vec<VertexSet>,
    edges: usize,
}

impl UndirectedGraph {
    /// The empty graph on `n` vertices.
    pub fn empty(n: usize) -> Self {
        Self {
            adj: vec![VertexSet::new(); n],
            edges: 0,
        }
    }

    /// Builds a graph from an edge list.
    pub fn from_edges(n: usize, edges: &[(VertexId, VertexId)]) -> Result<Self> {
        let mut g = Self::empty(n);
        for &(x, y) in edges {
            g.add_edge(x, y)?;
        }
        Ok(g)
    }

    pub fn vertex_count(&self) -> usize {
        self.adj.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edges
    }

    pub fn universe(&self) -> VertexSet {
        VertexSet::from_sorted((0..self.adj.len()).collect())
    }

    pub fn neighbours(&self, v: VertexId) -> &VertexSet {
        &self.adj[v]
    }

    pub fn has_edge(&self, x: VertexId, y: VertexId) -> bool {
        x < self.adj.len() && self.adj[x].contains(y)
    }

    fn check_pair(&self, x: VertexId, y: VertexId) -> Result<()> {
        let n = self.adj.len();
        for v in [x, y] {
            if v >= n {
                return Err(Error::UnknownVertex { vertex: v, n });
            }
        }
        if x == y {
            return Err(Error::SelfLoop(x));
        }
        Ok(())
    }

    /// Adds the edge `(x, y)`. Adding an existing edge is a no-op.
    pub fn add_edge(&mut self, x: VertexId, y: VertexId) -> Result<()> {
        self.check_pair(x, y)?;
        if self.adj[x].insert(y) {
            self.adj[y].insert(x);
            self.edges += 1;
        }
        Ok(())
    }

    /// Removes the edge `(x, y)`, which must be present.
    pub fn remove_edge(&mut self, x: VertexId, y: VertexId) -> Result<()> {
        self.check_pair(x, y)?;
        if !self.adj[x].remove(y) {
            return Err(Error::MissingEdge(x, y));
        }
        self.adj[y].remove(x);
        self.edges -= 1;
        Ok(())
    }

    /// All edges `(x, y)` with `x < y`, in lexicographic order.
    pub fn edges(&self) -> impl Iterator<Item = (VertexId, VertexId)> + '_ {
        self.adj
            .iter()
            .enumerate()
            .flat_map(|(x, nb)| nb.iter().filter(move |&y| y > x).map(move |y| (x, y)))
    }

    /// `S_xy`: the vertices adjacent to both `x` and `y`.
    pub fn common_neighbors(&self, x: VertexId, y: VertexId) -> VertexSet {
        self.adj[x].intersection(&self.adj[y])
    }

    /// Whether every pair of vertices in `set` is adjacent.
    pub fn is_complete(&self, set: &VertexSet) -> bool {
        let members = set.as_slice();
        members
            .iter()
            .enumerate()
            .all(|(i, &u)| members[i + 1..].iter().all(|&v| self.adj[u].contains(v)))
    }

    /// Whether every path from `x` to `y` meets `blockers`.
    ///
    /// Breadth-first search from `x` that never enters `blockers`; true iff
    /// `y` is not reached.
    pub fn separates(&self, blockers: &VertexSet, x: VertexId, y: VertexId) -> bool {
        search(
            x,
            SearchDiscipline::Fifo,
            |_| 0,
            |v| self.adj[v].iter(),
            |v| !blockers.contains(v),
            |v| v == y,
        )
        .found
        .is_none()
    }

    /// Number of connected components.
    pub fn component_count(&self) -> usize {
        let n = self.adj.len();
        let mut seen = vec![false; n];
        let mut count = 0;
        let mut queue = VecDeque::new();
        for s in 0..n {
            if seen[s] {
                continue;
            }
            count += 1;
            seen[s] = true;
            queue.push_back(s);
            while let Some(v) = queue.pop_front() {
                for w in self.adj[v].iter() {
                    if !seen[w] {
                        seen[w] = true;
                        queue.push_back(w);
                    }
                }
            }
        }
        count
    }

    /// Full symmetry / loop / range scan of the adjacency structure.
    pub fn check_symmetry(&self) -> bool {
        let n = self.adj.len();
        let mut half_edges = 0;
        for (x, nb) in self.adj.iter().enumerate() {
            for y in nb.iter() {
                if y >= n || y == x || !self.adj[y].contains(x) {
                    return false;
                }
                half_edges += 1;
            }
        }
        half_edges == 2 * self.edges
    }
}

impl std::fmt::Debug for UndirectedGraph {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("UndirectedGraph")
            .field("n", &self.adj.len())
            .field("edges", &self.edges().collect::<Vec<_>>())
            .finish()
    }
}

/// Breadth-first separation test with reusable marks, for the sampler's hot
/// path. Gives the same answers as [`UndirectedGraph::separates`].
#[derive(Debug, Default, Clone)]
pub struct SeparationScratch {
    mark: Vec<u32>,
    stamp: u32,
    queue: VecDeque<VertexId>,
}

impl SeparationScratch {
    pub fn new(n: usize) -> Self {
        Self {
            mark: vec![0; n],
            stamp: 0,
            queue: VecDeque::new(),
        }
    }

    fn next_stamp(&mut self, n: usize) -> u32 {
        if self.mark.len() != n {
            self.mark = vec![0; n];
            self.stamp = 0;
        }
        if self.stamp >= u32::MAX - 2 {
            self.mark.iter_mut().for_each(|m| *m = 0);
            self.stamp = 0;
        }
        self.stamp += 2;
        self.stamp
    }

    /// Whether `blockers` separates `x` from `y` in `g`, searching only
    /// through vertices accepted by `allowed` (pass `|_| true` for the
    /// unrestricted search).
    pub fn separates(
        &mut self,
        g: &UndirectedGraph,
        blockers: &VertexSet,
        x: VertexId,
        y: VertexId,
        mut allowed: impl FnMut(VertexId) -> bool,
    ) -> bool {
        let explored = self.next_stamp(g.vertex_count());
        let blocked = explored - 1;
        for b in blockers.iter() {
            self.mark[b] = blocked;
        }
        self.queue.clear();
        self.mark[x] = explored;
        self.queue.push_back(x);
        while let Some(v) = self.queue.pop_front() {
            if v == y {
                return false;
            }
            for w in g.neighbours(v).iter() {
                let m = self.mark[w];
                if m == explored || m == blocked {
                    continue;
                }
                self.mark[w] = explored;
                if allowed(w) {
                    self.queue.push_back(w);
                }
            }
        }
        true
    }
}

#[cfg(test)]
pub(crate) mod fixtures {
    use super::*;

    pub const A: VertexId = 0;
    pub const B: VertexId = 1;
    pub const C: VertexId = 2;
    pub const D: VertexId = 3;
    pub const E: VertexId = 4;

    /// Triangles {a,b,c} and {b,c,d} sharing the edge (b,c).
    pub fn two_triangles() -> UndirectedGraph {
        UndirectedGraph::from_edges(4, &[(A, B), (A, C), (B, C), (B, D), (C, D)]).unwrap()
    }

    pub fn triangle() -> UndirectedGraph {
        UndirectedGraph::from_edges(3, &[(A, B), (A, C), (B, C)]).unwrap()
    }

    pub fn path(n: usize) -> UndirectedGraph {
        let edges: Vec<_> = (1..n).map(|i| (i - 1, i)).collect();
        UndirectedGraph::from_edges(n, &edges).unwrap()
    }

    pub fn four_cycle() -> UndirectedGraph {
        UndirectedGraph::from_edges(4, &[(A, B), (B, C), (C, D), (D, A)]).unwrap()
    }

    pub fn complete(n: usize) -> UndirectedGraph {
        let mut g = UndirectedGraph::empty(n);
        for x in 0..n {
            for y in x + 1..n {
                g.add_edge(x, y).unwrap();
            }
        }
        g
    }
}
