//! Junction-tree backend.
//!
//! A tree over the cliques with the junction property. Separators are
//! implicit: each tree edge stands for the intersection of its endpoints.
//! Edges are stored as arcs in whatever direction they were created and
//! read undirected.

use std::collections::BTreeSet;

use crate::dot;
use crate::error::{Error, Result};
use crate::oracle;
use crate::repr::{BackendKind, MoveKind, MoveReport, Representation};
use crate::search::{search, SearchDiscipline};
use crate::set::{VertexId, VertexSet};
use crate::setgraph::{self, NodeId, SetGraph, VertexMap};

#[derive(Debug, Clone)]
pub struct JunctionTree {
    tree: SetGraph,
    vmap: VertexMap,
}

impl JunctionTree {
    /// A star over the singletons, centred on `{0}`.
    pub fn trivial(n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::EmptyUniverse);
        }
        let mut tree = SetGraph::new();
        let ids: Vec<NodeId> = (0..n).map(|v| tree.add_node(VertexSet::singleton(v))).collect();
        for &id in &ids[1..] {
            tree.add_arc(ids[0], id);
        }
        Ok(Self {
            tree,
            vmap: VertexMap::new(ids),
        })
    }

    pub fn tree(&self) -> &SetGraph {
        &self.tree
    }

    fn neighbours(&self, id: NodeId) -> Vec<NodeId> {
        self.tree.neighbours(id).collect()
    }

    /// `C_xy`'s neighbour containing `s`, detached from `C_xy`, or a fresh
    /// node for `s`.
    fn split_side(&mut self, cxy: NodeId, s: &VertexSet) -> NodeId {
        let found = self.tree.neighbours(cxy).find(|&nb| s.is_subset(self.tree.set(nb)));
        match found {
            Some(nb) => {
                self.tree.unlink(cxy, nb);
                nb
            }
            None => self.tree.add_node(s.clone()),
        }
    }

    /// Replaces `inner` by `outer ⊃ inner`, handing over all of its edges.
    fn absorb(&mut self, inner: NodeId, outer: NodeId) {
        for nb in self.neighbours(inner) {
            self.tree.unlink(inner, nb);
            self.tree.add_arc(outer, nb);
        }
        self.tree.remove_node(inner);
    }

    /// Shortest tree path from a clique holding `x` to one holding `y`,
    /// trimmed so that only its first node contains `x`.
    fn xy_path(&self, x: VertexId, y: VertexId) -> Vec<NodeId> {
        let t = &self.tree;
        let out = search(
            self.vmap.get(x),
            SearchDiscipline::Fifo,
            |_| 0,
            |n| t.neighbours(n).collect::<Vec<_>>(),
            |_| true,
            |n| t.set(n).contains(y),
        );
        let path = out.path().expect("the tree spans every vertex");
        let last_x = path
            .iter()
            .rposition(|&n| t.set(n).contains(x))
            .expect("path starts at a clique containing x");
        path[last_x..].to_vec()
    }
}

impl Representation for JunctionTree {
    fn kind(&self) -> BackendKind {
        BackendKind::Junction
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
        let cx = self.split_side(c, &cxy.without(y));
        let cy = self.split_side(c, &cxy.without(x));
        for nb in self.neighbours(c) {
            self.tree.unlink(c, nb);
            let side = if self.tree.set(nb).contains(x) { cx } else { cy };
            self.tree.add_arc(side, nb);
        }
        self.tree.remove_node(c);
        self.tree.add_arc(cx, cy);
        self.vmap.point_members(&self.tree, cx);
        self.vmap.point_members(&self.tree, cy);
        Ok(MoveReport::applied(MoveKind::Disconnect, cxy))
    }

    fn try_connect(&mut self, x: VertexId, y: VertexId, sxy: &VertexSet) -> Result<MoveReport> {
        let path = self.xy_path(x, y);
        let t = &self.tree;
        let cut = path
            .windows(2)
            .find(|w| t.set(w[0]).intersection(t.set(w[1])).len() == sxy.len());
        let Some(&[a, b]) = cut else {
            return Ok(MoveReport::rejected(MoveKind::Connect, sxy));
        };
        debug_assert_eq!(&t.set(a).intersection(t.set(b)), sxy);
        let (cx, cy) = (path[0], *path.last().unwrap());
        self.tree.unlink(a, b);
        let cxy = sxy.with(x).with(y);
        let new = self.tree.add_node(cxy.clone());
        for side in [cx, cy] {
            if self.tree.set(side).len() < cxy.len() {
                self.absorb(side, new);
            } else {
                self.tree.add_arc(side, new);
            }
        }
        self.vmap.point_members(&self.tree, new);
        Ok(MoveReport::applied(MoveKind::Connect, sxy))
    }

    fn cliques(&self) -> Vec<VertexSet> {
        let mut out = self.tree.sets();
        out.sort();
        out
    }

    fn mapped_clique(&self, v: VertexId) -> VertexSet {
        self.tree.set(self.vmap.get(v)).clone()
    }

    fn validate(&self) -> std::result::Result<(), String> {
        if !self.tree.is_tree() {
            return Err("junction tree is not a tree".into());
        }
        let have: BTreeSet<_> = self.tree.sets().into_iter().collect();
        let want = oracle::enumerate_cliques(&self.export_graph());
        if have != want {
            return Err(format!("tree vertices {have:?} are not the cliques {want:?}"));
        }
        if !oracle::check_junction_property(&self.tree) {
            return Err("junction property fails".into());
        }
        self.vmap.validate(&self.tree, |_| true)
    }

    fn to_dot(&self) -> String {
        dot::junction_tree_dot(&self.tree)
    }
}
