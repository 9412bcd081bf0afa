//! The graph-only backend.
//!
//! Legality is decided on the graph itself: a disconnection is legal iff
//! `C_xy` is a clique, a connection iff `S_xy` is a separator that separates
//! `x` from `y`. The clique set, separator multiset and `log π` are updated
//! locally from the four sets `S_xy`, `S_x`, `S_y`, `C_xy`.

use std::cell::RefCell;
use std::collections::{BTreeMap, HashMap, HashSet};
use std::marker::PhantomData;

use crate::dot;
use crate::error::{Error, Result};
use crate::graph::{SeparationScratch, UndirectedGraph};
use crate::oracle;
use crate::potentials::{graph_log_prob, LocalSets, Potential};
use crate::repr::{BackendKind, MoveKind, MoveReport, Representation};
use crate::scalar::Scalar;
use crate::set::{VertexId, VertexSet};

pub struct GraphState<T: Scalar, P: Potential<T>> {
    g: UndirectedGraph,
    cliques: HashSet<VertexSet>,
    separators: HashMap<VertexSet, usize>,
    log_pi: T,
    model: P,
    restricted: bool,
    scratch: RefCell<SeparationScratch>,
    _scalar: PhantomData<T>,
}

impl<T: Scalar, P: Potential<T>> GraphState<T, P> {
    /// The empty graph on `0..n`: cliques `{v}`, and `n − 1` copies of `∅`
    /// as separators.
    pub fn trivial(n: usize, model: P) -> Result<Self> {
        if n == 0 {
            return Err(Error::EmptyUniverse);
        }
        let cliques: HashSet<_> = (0..n).map(VertexSet::singleton).collect();
        let mut separators = HashMap::new();
        if n > 1 {
            separators.insert(VertexSet::new(), n - 1);
        }
        let log_pi = graph_log_prob(&model, &cliques, &separators)?;
        Ok(Self {
            g: UndirectedGraph::empty(n),
            cliques,
            separators,
            log_pi,
            model,
            restricted: false,
            scratch: RefCell::new(SeparationScratch::new(n)),
            _scalar: PhantomData,
        })
    }

    /// Use the search restricted to `N_xy` for connection legality.
    pub fn with_restricted_search(mut self, on: bool) -> Self {
        self.restricted = on;
        self
    }

    pub fn graph(&self) -> &UndirectedGraph {
        &self.g
    }

    pub fn model(&self) -> &P {
        &self.model
    }

    pub fn log_pi(&self) -> T {
        self.log_pi
    }

    pub fn clique_set(&self) -> &HashSet<VertexSet> {
        &self.cliques
    }

    pub fn separator_counts(&self) -> BTreeMap<VertexSet, usize> {
        self.separators.iter().map(|(s, &m)| (s.clone(), m)).collect()
    }

    /// Separators counted with multiplicity.
    pub fn separator_total(&self) -> usize {
        self.separators.values().sum()
    }

    /// `log π` recomputed from the tracked cliques and separators.
    pub fn recompute_log_pi(&self) -> Result<T> {
        graph_log_prob(&self.model, &self.cliques, &self.separators)
    }

    pub fn local_sets(&self, x: VertexId, y: VertexId) -> LocalSets {
        LocalSets::new(x, y, self.g.common_neighbors(x, y))
    }

    /// Whether removing the edge `(x, y)` keeps the graph decomposable.
    pub fn legality_disconnect(&self, x: VertexId, y: VertexId) -> bool {
        let cxy = self.g.common_neighbors(x, y).with(x).with(y);
        self.cliques.contains(&cxy)
    }

    /// Whether adding the edge `(x, y)` keeps the graph decomposable.
    pub fn legality_connect(&self, x: VertexId, y: VertexId) -> bool {
        let sxy = self.g.common_neighbors(x, y);
        self.separators.contains_key(&sxy) && self.sxy_separates(&sxy, x, y)
    }

    fn sxy_separates(&self, sxy: &VertexSet, x: VertexId, y: VertexId) -> bool {
        if self.restricted {
            self.restricted_separates(sxy, x, y)
        } else {
            self.scratch.borrow_mut().separates(&self.g, sxy, x, y, |_| true)
        }
    }

    /// Separation of `x` and `y` by the complete set `sxy`, searching only
    /// the subgraph induced by the vertices adjacent to all of `sxy`.
    pub fn restricted_separates(&self, sxy: &VertexSet, x: VertexId, y: VertexId) -> bool {
        let g = &self.g;
        if sxy.is_empty() {
            return self.scratch.borrow_mut().separates(g, sxy, x, y, |_| true);
        }
        self.scratch
            .borrow_mut()
            .separates(g, sxy, x, y, |w| sxy.is_subset(g.neighbours(w)))
    }

    /// Removes `(x, y)`, which must be a legal disconnection.
    pub fn apply_disconnect(&mut self, x: VertexId, y: VertexId) -> Result<()> {
        if !self.g.has_edge(x, y) || !self.legality_disconnect(x, y) {
            return Err(Error::ContractViolation(format!("illegal disconnection of ({x}, {y})")));
        }
        let local = self.local_sets(x, y);
        self.disconnect_unchecked(x, y, local);
        Ok(())
    }

    /// Adds `(x, y)`, which must be a legal connection.
    pub fn apply_connect(&mut self, x: VertexId, y: VertexId) -> Result<()> {
        if self.g.has_edge(x, y) || !self.legality_connect(x, y) {
            return Err(Error::ContractViolation(format!("illegal connection of ({x}, {y})")));
        }
        let local = self.local_sets(x, y);
        self.connect_unchecked(x, y, local);
        Ok(())
    }

    fn disconnect_unchecked(&mut self, x: VertexId, y: VertexId, local: LocalSets) {
        let ratio = self.model.log_ratio_disconnect(&local);
        self.g.remove_edge(x, y).expect("edge present");
        let LocalSets { sxy, sx, sy, cxy } = local;
        self.cliques.remove(&cxy);
        *self.separators.entry(sxy).or_insert(0) += 1;
        for s in [sx, sy] {
            if !self.take_separator(&s) {
                self.cliques.insert(s);
            }
        }
        self.log_pi = self.log_pi + ratio;
    }

    fn connect_unchecked(&mut self, x: VertexId, y: VertexId, local: LocalSets) {
        let ratio = self.model.log_ratio_connect(&local);
        self.g.add_edge(x, y).expect("valid pair");
        let LocalSets { sxy, sx, sy, cxy } = local;
        self.cliques.insert(cxy);
        let had = self.take_separator(&sxy);
        debug_assert!(had, "connection without separator {sxy}");
        for s in [sx, sy] {
            if !self.cliques.remove(&s) {
                *self.separators.entry(s).or_insert(0) += 1;
            }
        }
        self.log_pi = self.log_pi + ratio;
    }

    /// Drops one instance of `s` from the separator multiset.
    fn take_separator(&mut self, s: &VertexSet) -> bool {
        match self.separators.get_mut(s) {
            Some(m) if *m > 1 => {
                *m -= 1;
                true
            }
            Some(_) => {
                self.separators.remove(s);
                true
            }
            None => false,
        }
    }
}

impl<T: Scalar, P: Potential<T>> Representation for GraphState<T, P> {
    fn kind(&self) -> BackendKind {
        BackendKind::Graph
    }

    fn vertex_count(&self) -> usize {
        self.g.vertex_count()
    }

    fn find_sxy(&self, x: VertexId, y: VertexId) -> (VertexSet, bool) {
        (self.g.common_neighbors(x, y), self.g.has_edge(x, y))
    }

    fn has_edge(&self, x: VertexId, y: VertexId) -> bool {
        self.g.has_edge(x, y)
    }

    fn try_disconnect(&mut self, x: VertexId, y: VertexId, cxy: &VertexSet) -> Result<MoveReport> {
        if !self.cliques.contains(cxy) {
            return Ok(MoveReport::rejected(MoveKind::Disconnect, cxy));
        }
        let sxy = cxy.without(x).without(y);
        self.disconnect_unchecked(x, y, LocalSets::new(x, y, sxy));
        Ok(MoveReport::applied(MoveKind::Disconnect, cxy))
    }

    fn try_connect(&mut self, x: VertexId, y: VertexId, sxy: &VertexSet) -> Result<MoveReport> {
        if !self.separators.contains_key(sxy) || !self.sxy_separates(sxy, x, y) {
            return Ok(MoveReport::rejected(MoveKind::Connect, sxy));
        }
        self.connect_unchecked(x, y, LocalSets::new(x, y, sxy.clone()));
        Ok(MoveReport::applied(MoveKind::Connect, sxy))
    }

    fn cliques(&self) -> Vec<VertexSet> {
        let mut out: Vec<_> = self.cliques.iter().cloned().collect();
        out.sort();
        out
    }

    fn mapped_clique(&self, v: VertexId) -> VertexSet {
        self.cliques
            .iter()
            .filter(|c| c.contains(v))
            .min()
            .cloned()
            .expect("every vertex lies in a clique")
    }

    fn validate(&self) -> std::result::Result<(), String> {
        if !self.g.check_symmetry() {
            return Err("adjacency is not symmetric".into());
        }
        let cliques: std::collections::BTreeSet<_> = self.cliques.iter().cloned().collect();
        let expected = oracle::enumerate_cliques(&self.g);
        if cliques != expected {
            return Err(format!("tracked cliques {cliques:?} differ from {expected:?}"));
        }
        let seps = oracle::separator_multiset(&self.g).map_err(|e| e.to_string())?;
        if self.separator_counts() != seps {
            return Err(format!(
                "tracked separators {:?} differ from {seps:?}",
                self.separator_counts()
            ));
        }
        if self.separator_total() + 1 != self.cliques.len() {
            return Err("separator count is not one less than clique count".into());
        }
        Ok(())
    }

    fn to_dot(&self) -> String {
        dot::graph_dot(&self.g)
    }

    fn export_graph(&self) -> UndirectedGraph {
        self.g.clone()
    }
}
