//! Brute-force ground truth for decomposable graphs.
//!
//! Nothing here shares code paths with the representations: chordality
//! comes from maximum cardinality search, cliques from Bron–Kerbosch, and
//! the Ibarra graph from the pairwise definitional edge test. The routines
//! favour obviousness over speed.

use std::collections::{BTreeMap, BTreeSet, HashSet};

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::graph::UndirectedGraph;
use crate::set::{VertexId, VertexSet};
use crate::setgraph::{SetGraph, SetGraphSnapshot};

/// Cliques in a perfect order with their running-intersection separators.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PerfectOrdering {
    pub cliques: Vec<VertexSet>,
    /// `separators[i - 1] = cliques[i] ∩ (cliques[0] ∪ … ∪ cliques[i-1])`.
    pub separators: Vec<VertexSet>,
}

/// Maximum cardinality search visit order. `tie_seed` shuffles the
/// tie-breaking; `None` breaks ties by smallest id.
fn mcs_order(g: &UndirectedGraph, tie_seed: Option<u64>) -> Vec<VertexId> {
    let n = g.vertex_count();
    let mut weight = vec![0usize; n];
    let mut numbered = vec![false; n];
    let mut order = Vec::with_capacity(n);
    let mut rank: Vec<VertexId> = (0..n).collect();
    if let Some(seed) = tie_seed {
        rank.shuffle(&mut ChaCha8Rng::seed_from_u64(seed));
    }
    for _ in 0..n {
        let best = rank.iter().filter(|&&v| !numbered[v]).map(|&v| weight[v]).max();
        let v = rank
            .iter()
            .copied()
            .find(|&v| !numbered[v] && Some(weight[v]) == best)
            .expect("an unnumbered vertex remains");
        numbered[v] = true;
        order.push(v);
        for w in g.neighbours(v).iter() {
            if !numbered[w] {
                weight[w] += 1;
            }
        }
    }
    order
}

/// Earlier-visited neighbours of each vertex in an MCS order.
fn earlier_neighbours(g: &UndirectedGraph, order: &[VertexId]) -> Vec<VertexSet> {
    let mut pos = vec![0; g.vertex_count()];
    for (i, &v) in order.iter().enumerate() {
        pos[v] = i;
    }
    order
        .iter()
        .enumerate()
        .map(|(i, &v)| g.neighbours(v).iter().filter(|&w| pos[w] < i).collect())
        .collect()
}

/// Whether `g` is decomposable (chordal): the earlier neighbours of every
/// vertex in a maximum cardinality search order are pairwise adjacent.
pub fn is_decomposable(g: &UndirectedGraph) -> bool {
    let order = mcs_order(g, None);
    earlier_neighbours(g, &order).iter().all(|nb| {
        let m = nb.as_slice();
        (0..m.len()).all(|i| (i + 1..m.len()).all(|j| g.has_edge(m[i], m[j])))
    })
}

/// All maximal complete vertex sets, by Bron–Kerbosch with pivoting.
/// Works for any graph; isolated vertices give singleton cliques.
pub fn enumerate_cliques(g: &UndirectedGraph) -> BTreeSet<VertexSet> {
    fn expand(
        g: &UndirectedGraph,
        r: &mut Vec<VertexId>,
        mut p: BTreeSet<VertexId>,
        mut x: BTreeSet<VertexId>,
        out: &mut BTreeSet<VertexSet>,
    ) {
        if p.is_empty() && x.is_empty() {
            out.insert(r.iter().copied().collect());
            return;
        }
        let pivot = p
            .iter()
            .chain(x.iter())
            .copied()
            .max_by_key(|&u| p.iter().filter(|&&v| g.has_edge(u, v)).count())
            .expect("p or x non-empty");
        let candidates: Vec<_> = p.iter().copied().filter(|&v| !g.has_edge(pivot, v)).collect();
        for v in candidates {
            let nb = g.neighbours(v);
            r.push(v);
            expand(
                g,
                r,
                p.iter().copied().filter(|&w| nb.contains(w)).collect(),
                x.iter().copied().filter(|&w| nb.contains(w)).collect(),
                out,
            );
            r.pop();
            p.remove(&v);
            x.insert(v);
        }
    }
    let mut out = BTreeSet::new();
    expand(
        g,
        &mut Vec::new(),
        (0..g.vertex_count()).collect(),
        BTreeSet::new(),
        &mut out,
    );
    out
}

/// A perfect ordering of the cliques of `g`, derived from an MCS order.
pub fn perfect_ordering(g: &UndirectedGraph) -> Result<PerfectOrdering> {
    perfect_ordering_with(g, None)
}

/// As [`perfect_ordering`], with MCS ties broken by a seeded shuffle so that
/// different seeds give different valid orderings.
pub fn perfect_ordering_with(g: &UndirectedGraph, tie_seed: Option<u64>) -> Result<PerfectOrdering> {
    let order = mcs_order(g, tie_seed);
    let earlier = earlier_neighbours(g, &order);
    let candidates: Vec<VertexSet> = order.iter().zip(&earlier).map(|(&v, nb)| nb.with(v)).collect();
    for c in &candidates {
        if !g.is_complete(c) {
            return Err(Error::NotDecomposable);
        }
    }
    let cliques: Vec<VertexSet> = candidates
        .iter()
        .enumerate()
        .filter(|(_, c)| !candidates.iter().any(|d| c.is_proper_subset(d)))
        .map(|(_, c)| c.clone())
        .collect();
    let mut separators = Vec::new();
    let mut seen = VertexSet::new();
    for (i, c) in cliques.iter().enumerate() {
        if i > 0 {
            let s = c.intersection(&seen);
            if !cliques[..i].iter().any(|k| s.is_subset(k)) {
                return Err(Error::NotDecomposable);
            }
            separators.push(s);
        }
        seen = seen.union(c);
    }
    Ok(PerfectOrdering { cliques, separators })
}

/// The separators of `g` with multiplicities.
pub fn separator_multiset(g: &UndirectedGraph) -> Result<BTreeMap<VertexSet, usize>> {
    let po = perfect_ordering(g)?;
    let mut out = BTreeMap::new();
    for s in po.separators {
        *out.entry(s).or_insert(0) += 1;
    }
    Ok(out)
}

/// Whether toggling `(x, y)` leaves `g` decomposable.
pub fn legality_oracle(g: &UndirectedGraph, x: VertexId, y: VertexId) -> bool {
    let mut h = g.clone();
    if h.has_edge(x, y) {
        h.remove_edge(x, y).expect("edge present");
    } else {
        h.add_edge(x, y).expect("valid pair");
    }
    is_decomposable(&h)
}

fn containing_block_connected(sg: &SetGraph, a: &VertexSet) -> bool {
    let members: HashSet<_> = sg.node_ids().filter(|&id| a.is_subset(sg.set(id))).collect();
    let Some(&start) = members.iter().min() else {
        return true;
    };
    let mut seen = HashSet::from([start]);
    let mut stack = vec![start];
    while let Some(id) = stack.pop() {
        for nb in sg.neighbours(id) {
            if members.contains(&nb) && seen.insert(nb) {
                stack.push(nb);
            }
        }
    }
    seen.len() == members.len()
}

/// Junction property: for every `A`, the nodes containing `A` induce a
/// connected subgraph (edge direction ignored).
///
/// Tests `A` over every singleton, every node set, and every pairwise
/// intersection of node sets. [`check_junction_property_exhaustive`] tries
/// every subset instead, for small universes.
pub fn check_junction_property(sg: &SetGraph) -> bool {
    let sets = sg.sets();
    let mut tests: BTreeSet<VertexSet> = BTreeSet::new();
    for s in &sets {
        for v in s.iter() {
            tests.insert(VertexSet::singleton(v));
        }
        tests.insert(s.clone());
    }
    for i in 0..sets.len() {
        for j in i + 1..sets.len() {
            tests.insert(sets[i].intersection(&sets[j]));
        }
    }
    tests.iter().all(|a| containing_block_connected(sg, a))
}

/// Junction property by enumerating every subset of the universe `0..n`.
/// Exponential; for `n ≤ 12` or so.
pub fn check_junction_property_exhaustive(sg: &SetGraph, n: usize) -> bool {
    assert!(n < 20, "exhaustive check is exponential");
    (0u32..(1 << n)).all(|mask| {
        let a: VertexSet = (0..n).filter(|&v| mask & (1 << v) != 0).collect();
        containing_block_connected(sg, &a)
    })
}

/// The Ibarra graph of `g`, built straight from the definition: vertices are
/// the cliques and distinct separators, with an arc `S → T` whenever
/// `S ⊂ T` and no separator `U` has `S ⊂ U ⊂ T`.
pub fn rebuild_ibarra(g: &UndirectedGraph) -> Result<SetGraphSnapshot> {
    let seps: Vec<VertexSet> = separator_multiset(g)?.into_keys().collect();
    let cliques = enumerate_cliques(g);
    let vertices: BTreeSet<VertexSet> = cliques.iter().cloned().chain(seps.iter().cloned()).collect();
    let mut arcs = BTreeSet::new();
    for s in &vertices {
        for t in &vertices {
            if s.is_proper_subset(t) && !seps.iter().any(|u| s.is_proper_subset(u) && u.is_proper_subset(t)) {
                arcs.insert((s.clone(), t.clone()));
            }
        }
    }
    Ok(SetGraphSnapshot { vertices, arcs })
}

/// Number of labelled decomposable graphs on `n` vertices, by enumerating
/// all `2^(n(n-1)/2)` graphs.
pub fn count_decomposable(n: usize) -> usize {
    all_graphs(n).filter(is_decomposable).count()
}

/// Every labelled graph on `n` vertices; bit `k` of the index switches on
/// the `k`-th pair in lexicographic order.
pub fn all_graphs(n: usize) -> impl Iterator<Item = UndirectedGraph> {
    let pairs: Vec<(VertexId, VertexId)> = (0..n).flat_map(|x| (x + 1..n).map(move |y| (x, y))).collect();
    assert!(pairs.len() < 24, "too many graphs to enumerate");
    (0u32..(1 << pairs.len())).map(move |mask| {
        let mut g = UndirectedGraph::empty(n);
        for (k, &(x, y)) in pairs.iter().enumerate() {
            if mask & (1 << k) != 0 {
                g.add_edge(x, y).expect("valid pair");
            }
        }
        g
    })
}
