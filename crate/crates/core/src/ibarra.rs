//! Ibarra-graph backend.
//!
//! The unique DAG over cliques and distinct separators with an arc `S → T`
//! whenever `S ⊂ T` and no separator lies strictly between them. Subsets of
//! a node are exactly its ancestors and supersets its descendants. `∅` is a
//! node precisely while the graph is disconnected.

use std::cmp::Reverse;
use std::collections::HashSet;

use crate::dot;
use crate::error::{Error, Result};
use crate::oracle;
use crate::repr::{BackendKind, MoveKind, MoveReport, Representation};
use crate::search::{reachable, search, SearchDiscipline};
use crate::set::{VertexId, VertexSet};
use crate::setgraph::{self, NodeId, SetGraph, VertexMap};

#[derive(Debug, Clone)]
pub struct IbarraGraph {
    dag: SetGraph,
    vmap: VertexMap,
}

impl IbarraGraph {
    /// `∅` with an arc to every singleton. A single vertex is just `{0}`.
    pub fn trivial(n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::EmptyUniverse);
        }
        let mut dag = SetGraph::new();
        let ids: Vec<NodeId> = (0..n).map(|v| dag.add_node(VertexSet::singleton(v))).collect();
        if n > 1 {
            let root = dag.add_node(VertexSet::new());
            for &id in &ids {
                dag.add_arc(root, id);
            }
        }
        Ok(Self {
            dag,
            vmap: VertexMap::new(ids),
        })
    }

    pub fn dag(&self) -> &SetGraph {
        &self.dag
    }

    /// Inserts `x` given a node `c` with `x ⊂ c`, wiring it below its
    /// maximal subsets and above its minimal supersets. Returns the node
    /// for `x`, which is left alone if already present.
    pub fn add_above(&mut self, x: &VertexSet, c: NodeId) -> Result<NodeId> {
        if let Some(id) = self.dag.node_of(x) {
            return Ok(id);
        }
        if !x.is_proper_subset(self.dag.set(c)) {
            return Err(Error::ContractViolation(format!(
                "{x} cannot be added above {}",
                self.dag.set(c)
            )));
        }
        let mut below = self.dag.ancestors(c);
        below.sort_by_key(|&a| (Reverse(self.dag.set(a).len()), self.dag.set(a).clone()));
        let mut above = {
            let d = &self.dag;
            reachable(c, |n| d.neighbours(n).collect::<Vec<_>>(), |n| x.is_subset(d.set(n)))
        };
        above.sort_by_key(|&a| (self.dag.set(a).len(), self.dag.set(a).clone()));

        let id = self.dag.add_node(x.clone());
        let mut skip = HashSet::new();
        for a in below {
            if skip.contains(&a) || !self.dag.set(a).is_proper_subset(x) {
                continue;
            }
            self.dag.add_arc(a, id);
            skip.extend(self.dag.ancestors(a));
        }
        skip.clear();
        for a in above {
            if skip.contains(&a) {
                continue;
            }
            self.dag.add_arc(id, a);
            skip.extend(self.dag.descendants(a));
        }
        for p in self.dag.parents(id).to_vec() {
            for q in self.dag.children(id).to_vec() {
                self.dag.remove_arc(p, q);
            }
        }
        Ok(id)
    }

    /// Removes `s` if its descendants form a single connected piece,
    /// linking each parent to each child not already below it. Childless
    /// nodes are cliques and never removed.
    pub fn remove_redundant(&mut self, s: NodeId) -> bool {
        if self.dag.children(s).is_empty() {
            return false;
        }
        let below: HashSet<NodeId> = self.dag.descendants(s).into_iter().collect();
        let start = self.dag.children(s)[0];
        let d = &self.dag;
        let reached = reachable(start, |n| d.neighbours(n).collect::<Vec<_>>(), |n| below.contains(&n));
        if reached.len() < below.len() {
            return false;
        }
        let parents = self.dag.parents(s).to_vec();
        let children = self.dag.children(s).to_vec();
        self.dag.remove_node(s);
        for &p in &parents {
            for &c in &children {
                if !self.dag.is_ancestor(p, c) {
                    self.dag.add_arc(p, c);
                }
            }
        }
        true
    }

    /// A node strictly containing `set ∋ v`: `start` itself when it
    /// qualifies, else the nearest one among the nodes holding `v`.
    fn superset_near(&self, start: NodeId, set: &VertexSet, v: VertexId) -> NodeId {
        if set.is_proper_subset(self.dag.set(start)) {
            return start;
        }
        let d = &self.dag;
        search(
            start,
            SearchDiscipline::Fifo,
            |_| 0,
            |n| d.neighbours(n).collect::<Vec<_>>(),
            |n| d.set(n).contains(v),
            |n| set.is_proper_subset(d.set(n)),
        )
        .found
        .expect("a complete set lies inside some clique")
    }

    fn point_to_clique(&mut self, node: NodeId, members: &VertexSet) {
        let leaf = self.dag.descend_to_leaf(node);
        for v in members.iter() {
            self.vmap.set(v, leaf);
        }
    }

    /// Resolves a side of a disconnection: removes `s` if redundant and
    /// returns a clique containing its set.
    fn settle_side(&mut self, s: NodeId) -> NodeId {
        let first_child = self.dag.children(s).first().copied();
        if self.remove_redundant(s) {
            self.dag
                .descend_to_leaf(first_child.expect("redundant nodes have children"))
        } else {
            self.dag.descend_to_leaf(s)
        }
    }
}

impl Representation for IbarraGraph {
    fn kind(&self) -> BackendKind {
        BackendKind::Ibarra
    }

    fn vertex_count(&self) -> usize {
        self.vmap.len()
    }

    fn find_sxy(&self, x: VertexId, y: VertexId) -> (VertexSet, bool) {
        setgraph::find_sxy(&self.dag, &self.vmap, x, y, SearchDiscipline::HeaviestFirst)
    }

    fn has_edge(&self, x: VertexId, y: VertexId) -> bool {
        setgraph::holds_pair(&self.dag, &self.vmap, x, y)
    }

    fn try_disconnect(&mut self, x: VertexId, y: VertexId, cxy: &VertexSet) -> Result<MoveReport> {
        let Some(c) = self.dag.node_of(cxy) else {
            return Ok(MoveReport::rejected(MoveKind::Disconnect, cxy));
        };
        let sxy = cxy.without(x).without(y);
        let (sx, sy) = (sxy.with(x), sxy.with(y));
        self.add_above(&sxy, c)?;
        let sx_id = self.add_above(&sx, c)?;
        let sy_id = self.add_above(&sy, c)?;
        self.dag.remove_node(c);
        let cx = self.settle_side(sx_id);
        let cy = self.settle_side(sy_id);
        self.point_to_clique(cx, &sx);
        self.point_to_clique(cy, &sy);
        Ok(MoveReport::applied(MoveKind::Disconnect, cxy))
    }

    fn try_connect(&mut self, x: VertexId, y: VertexId, sxy: &VertexSet) -> Result<MoveReport> {
        let Some(s) = self.dag.node_of(sxy) else {
            return Ok(MoveReport::rejected(MoveKind::Connect, sxy));
        };
        let d = &self.dag;
        let path = search(
            self.vmap.get(y),
            SearchDiscipline::HeaviestFirst,
            |n| d.set(n).len(),
            |n| d.neighbours(n).collect::<Vec<_>>(),
            |_| true,
            |n| d.set(n).contains(x),
        )
        .path()
        .expect("the Ibarra graph is connected");
        let first_y = path
            .iter()
            .rposition(|&n| d.set(n).contains(y))
            .expect("path starts at y's clique");
        let path = &path[first_y..];
        if !path.contains(&s) {
            return Ok(MoveReport::rejected(MoveKind::Connect, sxy));
        }
        let (cy, cx) = (path[0], *path.last().unwrap());
        let (sx, sy) = (sxy.with(x), sxy.with(y));
        let sx_id = match self.dag.node_of(&sx) {
            Some(id) => id,
            None => {
                let above = self.superset_near(cx, &sx, x);
                self.add_above(&sx, above)?
            }
        };
        let sy_id = match self.dag.node_of(&sy) {
            Some(id) => id,
            None => {
                let above = self.superset_near(cy, &sy, y);
                self.add_above(&sy, above)?
            }
        };
        let new = self.dag.add_node(sxy.with(x).with(y));
        self.dag.add_arc(sx_id, new);
        self.dag.add_arc(sy_id, new);
        self.remove_redundant(sx_id);
        self.remove_redundant(sy_id);
        self.remove_redundant(s);
        self.vmap.point_members(&self.dag, new);
        Ok(MoveReport::applied(MoveKind::Connect, sxy))
    }

    fn cliques(&self) -> Vec<VertexSet> {
        setgraph::leaf_sets(&self.dag)
    }

    fn mapped_clique(&self, v: VertexId) -> VertexSet {
        self.dag.set(self.vmap.get(v)).clone()
    }

    fn validate(&self) -> std::result::Result<(), String> {
        let want = oracle::rebuild_ibarra(&self.export_graph()).map_err(|e| e.to_string())?;
        let have = self.dag.snapshot();
        if have != want {
            return Err(format!("Ibarra graph {have:?} differs from its definition {want:?}"));
        }
        if !oracle::check_junction_property(&self.dag) {
            return Err("junction property fails".into());
        }
        let d = &self.dag;
        self.vmap.validate(d, |id| d.children(id).is_empty())
    }

    fn to_dot(&self) -> String {
        dot::set_dag_dot(&self.dag, "IbarraGraph")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::fixtures::*;
    use crate::graph::UndirectedGraph;
    use crate::testkit;
    use std::collections::BTreeSet;

    fn build(n: usize, edges: &[(VertexId, VertexId)]) -> IbarraGraph {
        let mut ig = IbarraGraph::trivial(n).unwrap();
        testkit::connect_all(&mut ig, edges);
        ig
    }

    fn vs<const N: usize>(m: [VertexId; N]) -> VertexSet {
        VertexSet::from(m)
    }

    #[test]
    fn trivial_graph() {
        let ig = IbarraGraph::trivial(3).unwrap();
        assert_eq!(
            ig.dag().snapshot(),
            oracle::rebuild_ibarra(&UndirectedGraph::empty(3)).unwrap()
        );
        ig.validate().unwrap();
        IbarraGraph::trivial(1).unwrap().validate().unwrap();
    }

    #[test]
    fn two_triangles_structure() {
        let ig = build(4, &testkit::TWO_TRIANGLES);
        let snap = ig.dag().snapshot();
        assert_eq!(
            snap.vertices,
            BTreeSet::from([vs([A, B, C]), vs([B, C, D]), vs([B, C])])
        );
        assert_eq!(
            snap.arcs,
            BTreeSet::from([(vs([B, C]), vs([A, B, C])), (vs([B, C]), vs([B, C, D]))])
        );
        assert_eq!(ig.find_sxy(A, D), (vs([B, C]), false));
        assert_eq!(ig.find_sxy(B, C), (vs([A, D]), true));
        assert_eq!(
            IbarraGraph::trivial(4).unwrap().find_sxy(1, 3),
            (VertexSet::new(), false)
        );
    }

    #[test]
    fn add_above_examples() {
        let mut ig = build(4, &testkit::TWO_TRIANGLES);
        let bc = ig.dag().node_of(&vs([B, C])).unwrap();
        let c = ig.add_above(&vs([C]), bc).unwrap();
        let snap = ig.dag().snapshot();
        assert!(snap.arcs.contains(&(vs([C]), vs([B, C]))));
        assert_eq!(snap.arcs.iter().filter(|(s, _)| s == &vs([C])).count(), 1);
        assert_eq!(ig.dag().parents(c).len(), 0);
        assert_eq!(ig.add_above(&vs([C]), bc).unwrap(), c);
        assert!(ig.add_above(&vs([A]), bc).is_err());

        // Only ∅ below and only the clique above.
        let mut ig = build(3, &[(A, B)]);
        let ab = ig.dag().node_of(&vs([A, B])).unwrap();
        let a = ig.add_above(&vs([A]), ab).unwrap();
        let root = ig.dag().node_of(&VertexSet::new()).unwrap();
        assert_eq!(ig.dag().parents(a), &[root]);
        assert_eq!(ig.dag().children(a), &[ab]);
        assert!(!ig.dag().has_arc(root, ab));
    }

    #[test]
    fn remove_redundant_examples() {
        // Star centred on b: {b} separates its children.
        let mut ig = build(4, &[(A, B), (B, C), (B, D)]);
        let b = ig.dag().node_of(&vs([B])).unwrap();
        assert!(!ig.remove_redundant(b));
        let leaf = ig.dag().node_of(&vs([A, B])).unwrap();
        assert!(!ig.remove_redundant(leaf));

        // A separator with a single child goes, its parent takes the child.
        let mut ig = build(3, &[(A, B)]);
        let ab = ig.dag().node_of(&vs([A, B])).unwrap();
        let a = ig.add_above(&vs([A]), ab).unwrap();
        assert!(ig.remove_redundant(a));
        ig.validate().unwrap();
    }

    #[test]
    fn disconnect_examples() {
        let mut ig = build(3, &[(A, B), (A, C), (B, C)]);
        assert!(ig.try_disconnect(A, B, &vs([A, B, C])).unwrap().applied);
        assert_eq!(ig.cliques(), vec![vs([A, C]), vs([B, C])]);
        ig.validate().unwrap();

        let mut ig = build(4, &testkit::TWO_TRIANGLES);
        assert!(!ig.try_disconnect(B, C, &vs([A, B, C, D])).unwrap().applied);

        let mut ig = build(2, &[(A, B)]);
        assert!(ig.try_disconnect(A, B, &vs([A, B])).unwrap().applied);
        assert_eq!(ig.dag().snapshot(), IbarraGraph::trivial(2).unwrap().dag().snapshot());
    }

    #[test]
    fn connect_examples() {
        let mut ig = build(3, &[(A, B), (B, C)]);
        assert!(ig.try_connect(A, C, &vs([B])).unwrap().applied);
        assert_eq!(ig.cliques(), vec![vs([A, B, C])]);
        ig.validate().unwrap();

        let mut ig = build(4, &[(A, B), (B, C), (C, D)]);
        assert!(!ig.dag().contains_set(&VertexSet::new()));
        assert!(!ig.try_connect(A, D, &VertexSet::new()).unwrap().applied);

        let mut star = build(4, &[(A, B), (B, C), (B, D)]);
        assert!(star.try_connect(A, C, &vs([B])).unwrap().applied);
        assert!(oracle::is_decomposable(&star.export_graph()));
        star.validate().unwrap();
    }

    #[test]
    fn lockstep_with_graph_backend() {
        for seed in 0..6 {
            testkit::lockstep_walk(&mut IbarraGraph::trivial(8).unwrap(), 1500, seed, true);
        }
        testkit::lockstep_walk(&mut IbarraGraph::trivial(15).unwrap(), 3000, 41, true);
        testkit::lockstep_walk(&mut IbarraGraph::trivial(25).unwrap(), 4000, 99, false);
        let mut ig = IbarraGraph::trivial(7).unwrap();
        testkit::lockstep_walk_with(&mut ig, 800, 5, |rep| {
            assert!(oracle::check_junction_property_exhaustive(rep.dag(), 7));
        });
    }

    #[test]
    fn ancestors_are_exactly_subsets() {
        let mut ig = IbarraGraph::trivial(9).unwrap();
        testkit::lockstep_walk_with(&mut ig, 1000, 3, |rep| {
            let d = rep.dag();
            for id in d.node_ids() {
                let anc: BTreeSet<_> = d.ancestors(id).into_iter().map(|a| d.set(a).clone()).collect();
                let subs: BTreeSet<_> = d
                    .node_ids()
                    .map(|o| d.set(o).clone())
                    .filter(|o| o.is_proper_subset(d.set(id)))
                    .collect();
                assert_eq!(anc, subs);
            }
        });
    }
}
