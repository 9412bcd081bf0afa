//! Graphs whose vertices are vertex sets.
//!
//! Junction trees, Almond trees and Ibarra graphs are all stored in a
//! [`SetGraph`]: an arena of set-labelled nodes with directed arcs and a
//! content index. Undirected structures orient each edge arbitrarily and
//! read adjacency through [`SetGraph::neighbours`].

use std::collections::{BTreeSet, HashMap};

use crate::search::{reachable, search, SearchDiscipline};
use crate::set::{VertexId, VertexSet};

/// Handle to a node of a [`SetGraph`]. Handles of deleted nodes are reused.
pub type NodeId = usize;

#[derive(Debug, Clone)]
struct SetNode {
    set: VertexSet,
    parents: Vec<NodeId>,
    children: Vec<NodeId>,
}

#[derive(Debug, Clone, Default)]
pub struct SetGraph {
    nodes: Vec<Option<SetNode>>,
    free: Vec<NodeId>,
    index: HashMap<VertexSet, NodeId>,
}

impl SetGraph {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn len(&self) -> usize {
        self.index.len()
    }

    pub fn is_empty(&self) -> bool {
        self.index.is_empty()
    }

    /// Adds a node for `set`. The set must not already be present.
    pub fn add_node(&mut self, set: VertexSet) -> NodeId {
        assert!(!self.index.contains_key(&set), "set {set} already present");
        let node = SetNode {
            set: set.clone(),
            parents: Vec::new(),
            children: Vec::new(),
        };
        let id = match self.free.pop() {
            Some(id) => {
                self.nodes[id] = Some(node);
                id
            }
            None => {
                self.nodes.push(Some(node));
                self.nodes.len() - 1
            }
        };
        self.index.insert(set, id);
        id
    }

    /// Deletes a node together with all its arcs.
    pub fn remove_node(&mut self, id: NodeId) {
        let node = self.nodes[id].take().expect("live node");
        for p in &node.parents {
            self.node_mut(*p).children.retain(|&c| c != id);
        }
        for c in &node.children {
            self.node_mut(*c).parents.retain(|&p| p != id);
        }
        self.index.remove(&node.set);
        self.free.push(id);
    }

    fn node(&self, id: NodeId) -> &SetNode {
        self.nodes[id].as_ref().expect("live node")
    }

    fn node_mut(&mut self, id: NodeId) -> &mut SetNode {
        self.nodes[id].as_mut().expect("live node")
    }

    pub fn is_live(&self, id: NodeId) -> bool {
        self.nodes.get(id).is_some_and(Option::is_some)
    }

    pub fn set(&self, id: NodeId) -> &VertexSet {
        &self.node(id).set
    }

    pub fn node_of(&self, set: &VertexSet) -> Option<NodeId> {
        self.index.get(set).copied()
    }

    pub fn contains_set(&self, set: &VertexSet) -> bool {
        self.index.contains_key(set)
    }

    /// Live node handles in ascending order.
    pub fn node_ids(&self) -> impl Iterator<Item = NodeId> + '_ {
        self.nodes.iter().enumerate().filter_map(|(i, n)| n.as_ref().map(|_| i))
    }

    pub fn parents(&self, id: NodeId) -> &[NodeId] {
        &self.node(id).parents
    }

    pub fn children(&self, id: NodeId) -> &[NodeId] {
        &self.node(id).children
    }

    /// Parents then children.
    pub fn neighbours(&self, id: NodeId) -> impl Iterator<Item = NodeId> + '_ {
        let n = self.node(id);
        n.parents.iter().chain(n.children.iter()).copied()
    }

    pub fn degree(&self, id: NodeId) -> usize {
        let n = self.node(id);
        n.parents.len() + n.children.len()
    }

    pub fn has_arc(&self, from: NodeId, to: NodeId) -> bool {
        self.node(from).children.contains(&to)
    }

    pub fn are_adjacent(&self, a: NodeId, b: NodeId) -> bool {
        self.has_arc(a, b) || self.has_arc(b, a)
    }

    /// Adds the arc `from → to` unless it already exists.
    pub fn add_arc(&mut self, from: NodeId, to: NodeId) {
        assert_ne!(from, to, "self arc");
        if self.has_arc(from, to) {
            return;
        }
        self.node_mut(from).children.push(to);
        self.node_mut(to).parents.push(from);
    }

    /// Removes the arc `from → to`, returning whether it existed.
    pub fn remove_arc(&mut self, from: NodeId, to: NodeId) -> bool {
        let before = self.node(from).children.len();
        self.node_mut(from).children.retain(|&c| c != to);
        if self.node(from).children.len() == before {
            return false;
        }
        self.node_mut(to).parents.retain(|&p| p != from);
        true
    }

    /// Removes the edge between `a` and `b` in whichever direction it runs.
    pub fn unlink(&mut self, a: NodeId, b: NodeId) -> bool {
        self.remove_arc(a, b) || self.remove_arc(b, a)
    }

    /// Total number of arcs.
    pub fn arc_count(&self) -> usize {
        self.node_ids().map(|id| self.children(id).len()).sum()
    }

    /// All nodes reachable by following parent arcs (not including `id`).
    pub fn ancestors(&self, id: NodeId) -> Vec<NodeId> {
        let mut out = reachable(id, |n| self.parents(n).to_vec(), |_| true);
        out.remove(0);
        out
    }

    /// All nodes reachable by following child arcs (not including `id`).
    pub fn descendants(&self, id: NodeId) -> Vec<NodeId> {
        let mut out = reachable(id, |n| self.children(n).to_vec(), |_| true);
        out.remove(0);
        out
    }

    /// Whether a directed path leads from `from` to `to`.
    pub fn is_ancestor(&self, from: NodeId, to: NodeId) -> bool {
        if from == to {
            return false;
        }
        let target = self.set(from).clone();
        search(
            to,
            SearchDiscipline::Fifo,
            |_| 0,
            |n| self.parents(n).to_vec(),
            // Ancestors are subsets; prune anything that cannot lie above `from`.
            |n| target.is_subset(self.set(n)),
            |n| n == from,
        )
        .found
        .is_some()
    }

    /// The sets of all live nodes.
    pub fn sets(&self) -> Vec<VertexSet> {
        self.node_ids().map(|id| self.set(id).clone()).collect()
    }

    /// Childless nodes, i.e. those not strictly contained in another node
    /// along an arc. For the directed structures these are the cliques.
    pub fn childless(&self) -> Vec<NodeId> {
        self.node_ids().filter(|&id| self.children(id).is_empty()).collect()
    }

    /// Content-level description of the structure, independent of node
    /// handles and storage order.
    pub fn snapshot(&self) -> SetGraphSnapshot {
        let vertices = self.node_ids().map(|id| self.set(id).clone()).collect();
        let arcs = self
            .node_ids()
            .flat_map(|id| {
                self.children(id)
                    .iter()
                    .map(move |&c| (self.set(id).clone(), self.set(c).clone()))
            })
            .collect();
        SetGraphSnapshot { vertices, arcs }
    }

    /// Whether the undirected shape is a spanning tree.
    pub fn is_tree(&self) -> bool {
        let n = self.len();
        if n == 0 {
            return true;
        }
        if self.arc_count() != n - 1 {
            return false;
        }
        let start = self.node_ids().next().unwrap();
        reachable(start, |id| self.neighbours(id).collect::<Vec<_>>(), |_| true).len() == n
    }

    /// A node reachable from `id` by following child arcs that has no
    /// children. Always succeeds in an acyclic structure.
    pub fn descend_to_leaf(&self, mut id: NodeId) -> NodeId {
        while let Some(&c) = self.children(id).first() {
            id = c;
        }
        id
    }
}

/// Canonical content of a set graph: vertex sets and `(from, to)` arcs.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SetGraphSnapshot {
    pub vertices: BTreeSet<VertexSet>,
    pub arcs: BTreeSet<(VertexSet, VertexSet)>,
}

/// Per-vertex pointer to a node containing that vertex.
#[derive(Debug, Clone)]
pub struct VertexMap {
    targets: Vec<NodeId>,
}

impl VertexMap {
    pub fn new(targets: Vec<NodeId>) -> Self {
        Self { targets }
    }

    pub fn get(&self, v: VertexId) -> NodeId {
        self.targets[v]
    }

    pub fn set(&mut self, v: VertexId, node: NodeId) {
        self.targets[v] = node;
    }

    /// Points every member of `sg.set(node)` at `node`.
    pub fn point_members(&mut self, sg: &SetGraph, node: NodeId) {
        for v in sg.set(node).iter() {
            self.targets[v] = node;
        }
    }

    pub fn len(&self) -> usize {
        self.targets.len()
    }

    pub fn is_empty(&self) -> bool {
        self.targets.is_empty()
    }

    /// Checks that every vertex points at a live childless node containing
    /// it.
    pub fn validate(&self, sg: &SetGraph, is_clique: impl Fn(NodeId) -> bool) -> Result<(), String> {
        for (v, &node) in self.targets.iter().enumerate() {
            if !sg.is_live(node) {
                return Err(format!("vertex {v} maps to a deleted node"));
            }
            if !sg.set(node).contains(v) {
                return Err(format!("vertex {v} maps to {} which does not contain it", sg.set(node)));
            }
            if !is_clique(node) {
                return Err(format!("vertex {v} maps to non-clique {}", sg.set(node)));
            }
        }
        Ok(())
    }
}

/// `S_xy` and adjacency of `(x, y)` read off a set graph with the junction
/// property.
///
/// Searches from the node mapped to `x` until a node containing `y` is
/// processed. If that node also holds `x` the two are adjacent and `S_xy` is
/// the union of the connected block of nodes holding both, minus `{x, y}`.
/// Otherwise the path is backtracked to the node nearest the `y` end that
/// holds `x`, and `S_xy` is its intersection with the `y` node.
pub(crate) fn find_sxy(
    sg: &SetGraph,
    vmap: &VertexMap,
    x: VertexId,
    y: VertexId,
    discipline: SearchDiscipline,
) -> (VertexSet, bool) {
    let start = vmap.get(x);
    let out = search(
        start,
        discipline,
        |n| sg.set(n).len(),
        |n| sg.neighbours(n).collect::<Vec<_>>(),
        |_| true,
        |n| sg.set(n).contains(y),
    );
    let cy = out.found.expect("set graph spans every vertex");
    if sg.set(cy).contains(x) {
        let block = reachable(
            cy,
            |n| sg.neighbours(n).collect::<Vec<_>>(),
            |n| {
                let s = sg.set(n);
                s.contains(x) && s.contains(y)
            },
        );
        let mut union = VertexSet::new();
        for n in block {
            union = union.union(sg.set(n));
        }
        union.remove(x);
        union.remove(y);
        (union, true)
    } else {
        let path = out.path().expect("found node has a path");
        let cx = *path
            .iter()
            .rev()
            .find(|&&n| sg.set(n).contains(x))
            .expect("path starts at a node containing x");
        (sg.set(cx).intersection(sg.set(cy)), false)
    }
}

/// Whether some node holds both `x` and `y`, searching only the block of
/// nodes that contain `x`.
pub(crate) fn holds_pair(sg: &SetGraph, vmap: &VertexMap, x: VertexId, y: VertexId) -> bool {
    search(
        vmap.get(x),
        SearchDiscipline::Fifo,
        |_| 0,
        |n| sg.neighbours(n).collect::<Vec<_>>(),
        |n| sg.set(n).contains(x),
        |n| sg.set(n).contains(y),
    )
    .found
    .is_some()
}

/// Cliques of the represented graph: the childless nodes' sets, sorted.
pub(crate) fn leaf_sets(sg: &SetGraph) -> Vec<VertexSet> {
    let mut out: Vec<_> = sg.childless().into_iter().map(|id| sg.set(id).clone()).collect();
    out.sort();
    out
}
