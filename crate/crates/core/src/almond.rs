//! Almond-tree backend.
//!
//! A spanning tree over cliques and distinct separators with the junction
//! property, every edge directed from subset to superset. Cliques are the
//! childless nodes; a separator of multiplicity `m` has `m + 1` children.

use std::collections::BTreeSet;

use crate::dot;
use crate::error::{Error, Result};
use crate::oracle;
use crate::repr::{BackendKind, MoveKind, MoveReport, Representation};
use crate::search::{search, SearchDiscipline};
use crate::set::{VertexId, VertexSet};
use crate::setgraph::{self, NodeId, SetGraph, VertexMap};

#[derive(Debug, Clone)]
pub struct AlmondTree {
    tree: SetGraph,
    vmap: VertexMap,
}

impl AlmondTree {
    /// `∅` with an arc to every singleton. A single vertex is just `{0}`.
    pub fn trivial(n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::EmptyUniverse);
        }
        let mut tree = SetGraph::new();
        let ids: Vec<NodeId> = (0..n).map(|v| tree.add_node(VertexSet::singleton(v))).collect();
        if n > 1 {
            let root = tree.add_node(VertexSet::new());
            for &id in &ids {
                tree.add_arc(root, id);
            }
        }
        Ok(Self {
            tree,
            vmap: VertexMap::new(ids),
        })
    }

    pub fn tree(&self) -> &SetGraph {
        &self.tree
    }

    /// Removes `s` if it has exactly one child, linking its parents to that
    /// child. Returns the child when `s` was removed.
    pub fn remove_redundant(&mut self, s: NodeId) -> Option<NodeId> {
        let &[child] = self.tree.children(s) else {
            return None;
        };
        for p in self.tree.parents(s).to_vec() {
            self.tree.add_arc(p, child);
        }
        self.tree.remove_node(s);
        Some(child)
    }

    fn path(&self, from: NodeId, to: NodeId, keep: impl Fn(NodeId) -> bool) -> Vec<NodeId> {
        let t = &self.tree;
        search(
            from,
            SearchDiscipline::Fifo,
            |_| 0,
            |n| t.neighbours(n).collect::<Vec<_>>(),
            keep,
            |n| n == to,
        )
        .path()
        .expect("the tree is connected")
    }

    /// The node standing in for `S_x` once `(x, y)` is removed: a fresh
    /// clique if `S_x` was absent, else `S_x` detached from `C_xy` or, if
    /// that leaves it redundant, its remaining child.
    fn resolve_side(&mut self, cxy: NodeId, s: &VertexSet) -> NodeId {
        match self.tree.node_of(s) {
            None => self.tree.add_node(s.clone()),
            Some(id) => {
                let had = self.tree.remove_arc(id, cxy);
                debug_assert!(had, "{s} is not a parent of the enabling clique");
                self.remove_redundant(id).unwrap_or(id)
            }
        }
    }

    /// Last node holding `v` on the path from `v`'s clique to `target`, and
    /// the node just before `target` on that path.
    fn approach(&self, v: VertexId, target: NodeId) -> (NodeId, NodeId) {
        let path = self.path(self.vmap.get(v), target, |_| true);
        let t = &self.tree;
        let c = *path
            .iter()
            .rev()
            .find(|&&n| t.set(n).contains(v))
            .expect("path starts at v's clique");
        (c, path[path.len() - 2])
    }

    fn point_to_clique(&mut self, node: NodeId) {
        let leaf = self.tree.descend_to_leaf(node);
        for v in self.tree.set(node).iter() {
            self.vmap.set(v, leaf);
        }
    }
}

impl Representation for AlmondTree {
    fn kind(&self) -> BackendKind {
        BackendKind::Almond
    }

    fn vertex_count(&self) -> usize {
        self.vmap.len()
    }

    fn find_sxy(&self, x: VertexId, y: VertexId) -> (VertexSet, bool) {
        setgraph::find_sxy(&self.tree, &self.vmap, x, y, SearchDiscipline::Fifo)
    }

    fn has_edge(&self, x: VertexId, y: VertexId) -> bool {
        setgraph::holds_pair(&self.tree, &self.vmap, x, y)
    }

    fn try_disconnect(&mut self, x: VertexId, y: VertexId, cxy: &VertexSet) -> Result<MoveReport> {
        let Some(c) = self.tree.node_of(cxy) else {
            return Ok(MoveReport::rejected(MoveKind::Disconnect, cxy));
        };
        let sxy = cxy.without(x).without(y);
        if let Some(s) = self.tree.node_of(&sxy) {
            let t = &self.tree;
            let path = self.path(c, s, |n| sxy.is_subset(t.set(n)));
            self.tree.unlink(s, path[path.len() - 2]);
        }
        let cx = self.resolve_side(c, &sxy.with(x));
        let cy = self.resolve_side(c, &sxy.with(y));
        for p in self.tree.parents(c).to_vec() {
            self.tree.remove_arc(p, c);
            let side = if self.tree.set(p).contains(x) { cx } else { cy };
            self.tree.add_arc(p, side);
        }
        self.tree.remove_node(c);
        let s = match self.tree.node_of(&sxy) {
            Some(s) => s,
            None => self.tree.add_node(sxy),
        };
        self.tree.add_arc(s, cx);
        self.tree.add_arc(s, cy);
        self.point_to_clique(cx);
        self.point_to_clique(cy);
        Ok(MoveReport::applied(MoveKind::Disconnect, cxy))
    }

    fn try_connect(&mut self, x: VertexId, y: VertexId, sxy: &VertexSet) -> Result<MoveReport> {
        let Some(s) = self.tree.node_of(sxy) else {
            return Ok(MoveReport::rejected(MoveKind::Connect, sxy));
        };
        let (cx, px) = self.approach(x, s);
        let (cy, py) = self.approach(y, s);
        if px == py {
            return Ok(MoveReport::rejected(MoveKind::Connect, sxy));
        }
        self.tree.unlink(s, px);
        self.tree.unlink(s, py);
        let cxy = sxy.with(x).with(y);
        let new = self.tree.add_node(cxy);
        for (side, c) in [(sxy.with(x), cx), (sxy.with(y), cy)] {
            match self.tree.node_of(&side) {
                Some(id) => {
                    self.tree.add_arc(id, new);
                    self.remove_redundant(id);
                }
                None => {
                    let id = self.tree.add_node(side);
                    self.tree.add_arc(id, new);
                    self.tree.add_arc(id, c);
                }
            }
        }
        self.tree.add_arc(s, new);
        self.remove_redundant(s);
        self.vmap.point_members(&self.tree, new);
        Ok(MoveReport::applied(MoveKind::Connect, sxy))
    }

    fn cliques(&self) -> Vec<VertexSet> {
        setgraph::leaf_sets(&self.tree)
    }

    fn mapped_clique(&self, v: VertexId) -> VertexSet {
        self.tree.set(self.vmap.get(v)).clone()
    }

    fn validate(&self) -> std::result::Result<(), String> {
        let t = &self.tree;
        if !t.is_tree() {
            return Err("Almond tree is not a tree".into());
        }
        for id in t.node_ids() {
            for &c in t.children(id) {
                if !t.set(id).is_proper_subset(t.set(c)) {
                    return Err(format!("arc {} -> {} is not subset to superset", t.set(id), t.set(c)));
                }
            }
        }
        let g = self.export_graph();
        let cliques = oracle::enumerate_cliques(&g);
        let leaves: BTreeSet<_> = self.cliques().into_iter().collect();
        if leaves != cliques {
            return Err(format!("childless nodes {leaves:?} are not the cliques {cliques:?}"));
        }
        let seps = oracle::separator_multiset(&g).map_err(|e| e.to_string())?;
        if t.len() != cliques.len() + seps.len() {
            return Err("node count differs from cliques plus distinct separators".into());
        }
        for (s, m) in &seps {
            let Some(id) = t.node_of(s) else {
                return Err(format!("separator {s} missing"));
            };
            if t.children(id).len() != m + 1 {
                return Err(format!(
                    "separator {s} of multiplicity {m} has {} children",
                    t.children(id).len()
                ));
            }
        }
        if !oracle::check_junction_property(t) {
            return Err("junction property fails".into());
        }
        self.vmap.validate(t, |id| t.children(id).is_empty())
    }

    fn to_dot(&self) -> String {
        dot::set_dag_dot(&self.tree, "AlmondTree")
    }
}
