//! The interface every graph representation implements.
//!
//! The sampler and the verification harness only talk to representations
//! through [`Representation`], so any backend can drive a chain alone or
//! run in lockstep with the others.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::UndirectedGraph;
use crate::set::{VertexId, VertexSet};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum BackendKind {
    Graph,
    Junction,
    Almond,
    Ibarra,
}

impl BackendKind {
    pub const ALL: [BackendKind; 4] = [
        BackendKind::Graph,
        BackendKind::Junction,
        BackendKind::Almond,
        BackendKind::Ibarra,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            BackendKind::Graph => "graph",
            BackendKind::Junction => "junction",
            BackendKind::Almond => "almond",
            BackendKind::Ibarra => "ibarra",
        }
    }
}

impl fmt::Display for BackendKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for BackendKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        BackendKind::ALL
            .into_iter()
            .find(|k| k.as_str() == s)
            .ok_or_else(|| Error::InvalidConfig(format!("unknown backend '{s}'")))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum MoveKind {
    Connect,
    Disconnect,
}

/// Outcome of a connect or disconnect attempt.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MoveReport {
    pub applied: bool,
    /// `C_xy` for a disconnection, `S_xy` for a connection.
    pub enabler: VertexSet,
    pub kind: MoveKind,
}

impl MoveReport {
    pub fn applied(kind: MoveKind, enabler: &VertexSet) -> Self {
        Self {
            applied: true,
            enabler: enabler.clone(),
            kind,
        }
    }

    pub fn rejected(kind: MoveKind, enabler: &VertexSet) -> Self {
        Self {
            applied: false,
            enabler: enabler.clone(),
            kind,
        }
    }
}

/// A dynamic representation of a decomposable graph on `0..n`.
///
/// Implementations start from the empty graph and change only through
/// [`connect_if_enabled`](Self::connect_if_enabled) and
/// [`disconnect_if_enabled`](Self::disconnect_if_enabled). A rejected move
/// leaves the representation untouched.
pub trait Representation: Send {
    fn kind(&self) -> BackendKind;

    fn vertex_count(&self) -> usize;

    /// `S_xy` together with whether `(x, y)` is currently an edge, computed
    /// from this representation alone.
    fn find_sxy(&self, x: VertexId, y: VertexId) -> (VertexSet, bool);

    fn has_edge(&self, x: VertexId, y: VertexId) -> bool;

    /// Removes `(x, y)` if `cxy` is a clique. The caller guarantees that
    /// `(x, y)` is an edge and `cxy = S_xy ∪ {x, y}`.
    fn try_disconnect(&mut self, x: VertexId, y: VertexId, cxy: &VertexSet) -> Result<MoveReport>;

    /// Adds `(x, y)` if `sxy` is a separator separating `x` from `y`. The
    /// caller guarantees that `(x, y)` is a non-edge and `sxy = S_xy`.
    fn try_connect(&mut self, x: VertexId, y: VertexId, sxy: &VertexSet) -> Result<MoveReport>;

    /// Current cliques, sorted.
    fn cliques(&self) -> Vec<VertexSet>;

    /// The clique the vertex map currently assigns to `v`.
    fn mapped_clique(&self, v: VertexId) -> VertexSet;

    /// Structural self-check of every representation invariant.
    fn validate(&self) -> std::result::Result<(), String>;

    /// Graphviz rendering of the structure.
    fn to_dot(&self) -> String;

    /// The represented graph: the union of the pairwise adjacencies implied
    /// by the cliques.
    fn export_graph(&self) -> UndirectedGraph {
        let mut g = UndirectedGraph::empty(self.vertex_count());
        for c in self.cliques() {
            let m = c.as_slice();
            for i in 0..m.len() {
                for j in i + 1..m.len() {
                    g.add_edge(m[i], m[j])
                        .expect("clique members are distinct and in range");
                }
            }
        }
        g
    }

    /// Checked form of [`try_disconnect`](Self::try_disconnect).
    fn disconnect_if_enabled(&mut self, x: VertexId, y: VertexId, cxy: &VertexSet) -> Result<MoveReport> {
        check_pair(self.vertex_count(), x, y)?;
        if !(cxy.contains(x) && cxy.contains(y)) {
            return Err(Error::ContractViolation(format!(
                "enabling clique {cxy} must contain both {x} and {y}"
            )));
        }
        if !self.has_edge(x, y) {
            return Err(Error::ContractViolation(format!(
                "disconnect requested for non-edge ({x}, {y})"
            )));
        }
        self.try_disconnect(x, y, cxy)
    }

    /// Checked form of [`try_connect`](Self::try_connect).
    fn connect_if_enabled(&mut self, x: VertexId, y: VertexId, sxy: &VertexSet) -> Result<MoveReport> {
        check_pair(self.vertex_count(), x, y)?;
        if sxy.contains(x) || sxy.contains(y) {
            return Err(Error::ContractViolation(format!(
                "enabling separator {sxy} must exclude {x} and {y}"
            )));
        }
        if self.has_edge(x, y) {
            return Err(Error::ContractViolation(format!(
                "connect requested for existing edge ({x}, {y})"
            )));
        }
        self.try_connect(x, y, sxy)
    }
}

pub(crate) fn check_pair(n: usize, x: VertexId, y: VertexId) -> Result<()> {
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
