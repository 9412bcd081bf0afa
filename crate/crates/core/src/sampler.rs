//! The Metropolis chain over decomposable graphs.
//!
//! Each iteration proposes an unordered pair uniformly, draws `U ∈ (0, 1)`,
//! and applies the edge toggle when `log U` is at most the log ratio and the
//! toggle is legal. The draw is tested first; exactly one `U` is consumed
//! per iteration either way.

use std::collections::VecDeque;
use std::fmt;
use std::str::FromStr;

use rand::{Rng, RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::almond::AlmondTree;
use crate::error::{Error, Result};
use crate::graph::UndirectedGraph;
use crate::ibarra::IbarraGraph;
use crate::junction::JunctionTree;
use crate::potentials::{graph_log_prob, LocalSets, ModelSpec, Potential, PotentialModel};
use crate::rep_graph::GraphState;
use crate::repr::{BackendKind, MoveKind, MoveReport, Representation};
use crate::scalar::Scalar;
use crate::set::{VertexId, VertexSet};

/// Iterations in the trailing acceptance window.
pub const ACCEPTANCE_WINDOW: usize = 10_000;

/// Which backends drive the chain.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum BackendSelection {
    Graph,
    Junction,
    Almond,
    Ibarra,
    /// All four in lockstep, checked against each other.
    All,
}

impl BackendSelection {
    pub fn kinds(self) -> Vec<BackendKind> {
        match self {
            BackendSelection::Graph => vec![BackendKind::Graph],
            BackendSelection::Junction => vec![BackendKind::Junction],
            BackendSelection::Almond => vec![BackendKind::Almond],
            BackendSelection::Ibarra => vec![BackendKind::Ibarra],
            BackendSelection::All => BackendKind::ALL.to_vec(),
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            BackendSelection::Graph => "graph",
            BackendSelection::Junction => "junction",
            BackendSelection::Almond => "almond",
            BackendSelection::Ibarra => "ibarra",
            BackendSelection::All => "all",
        }
    }
}

impl From<BackendKind> for BackendSelection {
    fn from(kind: BackendKind) -> Self {
        match kind {
            BackendKind::Graph => BackendSelection::Graph,
            BackendKind::Junction => BackendSelection::Junction,
            BackendKind::Almond => BackendSelection::Almond,
            BackendKind::Ibarra => BackendSelection::Ibarra,
        }
    }
}

impl fmt::Display for BackendSelection {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for BackendSelection {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        if s == "all" {
            return Ok(BackendSelection::All);
        }
        s.parse::<BackendKind>().map(Into::into)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SamplerConfig {
    pub n: usize,
    pub iterations: u64,
    pub seed: u64,
    pub model: ModelSpec,
    pub backend: BackendSelection,
    /// Record every `trace_thin`-th iteration.
    pub trace_thin: u64,
    pub restricted_search: bool,
    /// In lockstep mode, compare the exported graphs every this many
    /// iterations.
    pub check_every: u64,
}

impl SamplerConfig {
    pub fn new(n: usize, iterations: u64, seed: u64) -> Self {
        Self {
            n,
            iterations,
            seed,
            model: ModelSpec::Uniform,
            backend: BackendSelection::Graph,
            trace_thin: 1,
            restricted_search: false,
            check_every: 1000,
        }
    }

    pub fn with_model(mut self, model: ModelSpec) -> Self {
        self.model = model;
        self
    }

    pub fn with_backend(mut self, backend: BackendSelection) -> Self {
        self.backend = backend;
        self
    }

    pub fn with_thin(mut self, thin: u64) -> Self {
        self.trace_thin = thin;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if self.n == 0 {
            return Err(Error::InvalidConfig("n must be at least 1".into()));
        }
        if self.n < 2 && self.iterations > 0 {
            return Err(Error::InvalidConfig("proposals need at least 2 vertices".into()));
        }
        if self.trace_thin == 0 {
            return Err(Error::InvalidConfig("trace thinning must be at least 1".into()));
        }
        if self.check_every == 0 {
            return Err(Error::InvalidConfig("check interval must be at least 1".into()));
        }
        self.model.build::<f64>().map(|_| ())
    }
}

/// One iteration of the chain.
#[derive(Debug, Clone, PartialEq)]
pub struct TraceRecord<T> {
    /// 1-based.
    pub iteration: u64,
    pub x: VertexId,
    pub y: VertexId,
    pub kind: MoveKind,
    /// Whether `log U` cleared the Metropolis ratio.
    pub passed: bool,
    /// Legality of the toggle; only assessed when the draw passed.
    pub legal: Option<bool>,
    pub applied: bool,
    pub edges: usize,
    pub log_pi: T,
    /// Proportion of applied moves over the trailing window.
    pub acceptance: f64,
}

/// Applied-move proportion over the last `capacity` iterations.
#[derive(Debug, Clone)]
pub struct AcceptanceWindow {
    recent: VecDeque<bool>,
    capacity: usize,
    hits: usize,
    total_hits: u64,
    total: u64,
}

impl AcceptanceWindow {
    pub fn new(capacity: usize) -> Self {
        assert!(capacity > 0);
        Self {
            recent: VecDeque::with_capacity(capacity),
            capacity,
            hits: 0,
            total_hits: 0,
            total: 0,
        }
    }

    pub fn push(&mut self, applied: bool) {
        if self.recent.len() == self.capacity && self.recent.pop_front() == Some(true) {
            self.hits -= 1;
        }
        self.recent.push_back(applied);
        self.hits += usize::from(applied);
        self.total_hits += u64::from(applied);
        self.total += 1;
    }

    pub fn proportion(&self) -> f64 {
        if self.recent.is_empty() {
            0.0
        } else {
            self.hits as f64 / self.recent.len() as f64
        }
    }

    /// Applied proportion over everything pushed so far.
    pub fn overall(&self) -> f64 {
        if self.total == 0 {
            0.0
        } else {
            self.total_hits as f64 / self.total as f64
        }
    }
}

/// The pair with index `k` in the order (0,1), (0,2), (1,2), (0,3), …
pub fn pair_from_index(k: u64) -> (VertexId, VertexId) {
    // y is the largest integer with y(y-1)/2 <= k.
    let mut y = ((1.0 + (1.0 + 8.0 * k as f64).sqrt()) / 2.0) as u64;
    while y * (y - 1) / 2 > k {
        y -= 1;
    }
    while (y + 1) * y / 2 <= k {
        y += 1;
    }
    let x = k - y * (y - 1) / 2;
    (x as VertexId, y as VertexId)
}

/// A uniformly random unordered pair of distinct vertices from one draw.
pub fn propose_pair(rng: &mut impl RngCore, n: usize) -> Result<(VertexId, VertexId)> {
    if n < 2 {
        return Err(Error::InvalidConfig("proposals need at least 2 vertices".into()));
    }
    let pairs = (n as u64) * (n as u64 - 1) / 2;
    Ok(pair_from_index(rng.gen_range(0..pairs)))
}

/// `U ∈ (0, 1)` with 53 random bits, never 0 or 1.
pub fn open_unit(rng: &mut impl RngCore) -> f64 {
    ((rng.next_u64() >> 11) as f64 + 0.5) * (1.0 / (1u64 << 53) as f64)
}

/// A representation of the empty graph on `0..n`.
pub fn build_representation(kind: BackendKind, n: usize) -> Result<Box<dyn Representation>> {
    Ok(match kind {
        BackendKind::Graph => Box::new(GraphState::<f64, _>::trivial(n, PotentialModel::uniform())?),
        BackendKind::Junction => Box::new(JunctionTree::trivial(n)?),
        BackendKind::Almond => Box::new(AlmondTree::trivial(n)?),
        BackendKind::Ibarra => Box::new(IbarraGraph::trivial(n)?),
    })
}

/// A running chain.
pub struct Sampler<T: Scalar> {
    config: SamplerConfig,
    model: PotentialModel<T>,
    rng: ChaCha8Rng,
    graph: Option<GraphState<T, PotentialModel<T>>>,
    structures: Vec<Box<dyn Representation>>,
    log_pi: T,
    edges: usize,
    iteration: u64,
    window: AcceptanceWindow,
}

impl<T: Scalar> Sampler<T> {
    pub fn new(config: SamplerConfig) -> Result<Self> {
        config.validate()?;
        let n = config.n;
        let model = config.model.build::<T>()?;
        let mut graph = None;
        let mut structures = Vec::new();
        for kind in config.backend.kinds() {
            match kind {
                BackendKind::Graph => {
                    graph = Some(GraphState::trivial(n, model)?.with_restricted_search(config.restricted_search));
                }
                other => structures.push(build_representation(other, n)?),
            }
        }
        let cliques: Vec<VertexSet> = (0..n).map(VertexSet::singleton).collect();
        let separators = if n > 1 {
            [(VertexSet::new(), n - 1)].into_iter().collect()
        } else {
            Default::default()
        };
        let log_pi = graph_log_prob(&model, &cliques, &separators)?;
        Ok(Self {
            rng: ChaCha8Rng::seed_from_u64(config.seed),
            config,
            model,
            graph,
            structures,
            log_pi,
            edges: 0,
            iteration: 0,
            window: AcceptanceWindow::new(ACCEPTANCE_WINDOW),
        })
    }

    pub fn config(&self) -> &SamplerConfig {
        &self.config
    }

    pub fn iteration(&self) -> u64 {
        self.iteration
    }

    pub fn edge_count(&self) -> usize {
        self.edges
    }

    pub fn log_pi(&self) -> T {
        self.log_pi
    }

    pub fn acceptance(&self) -> &AcceptanceWindow {
        &self.window
    }

    /// The graph backend, when it is part of the run.
    pub fn graph_state(&self) -> Option<&GraphState<T, PotentialModel<T>>> {
        self.graph.as_ref()
    }

    /// Every backend in the run, graph first.
    pub fn representations(&self) -> Vec<&dyn Representation> {
        let mut out: Vec<&dyn Representation> = Vec::new();
        if let Some(g) = &self.graph {
            out.push(g);
        }
        out.extend(self.structures.iter().map(|s| s.as_ref()));
        out
    }

    /// The current graph, read from the leading backend.
    pub fn current_graph(&self) -> UndirectedGraph {
        match &self.graph {
            Some(g) => g.graph().clone(),
            None => self.structures[0].export_graph(),
        }
    }

    fn lead(&self) -> &dyn Representation {
        match &self.graph {
            Some(g) => g,
            None => self.structures[0].as_ref(),
        }
    }

    fn mismatch(&self, x: VertexId, y: VertexId, detail: String) -> Error {
        Error::Verification {
            iteration: self.iteration,
            x,
            y,
            detail,
        }
    }

    /// Runs one iteration.
    pub fn step(&mut self) -> Result<TraceRecord<T>> {
        let n = self.config.n;
        let (x, y) = propose_pair(&mut self.rng, n)?;
        let u = open_unit(&mut self.rng);
        self.iteration += 1;

        let (sxy, adjacent) = self.lead().find_sxy(x, y);
        if self.config.backend == BackendSelection::All {
            for s in &self.structures {
                let theirs = s.find_sxy(x, y);
                if theirs != (sxy.clone(), adjacent) {
                    return Err(self.mismatch(
                        x,
                        y,
                        format!(
                            "{} found S_xy {:?}, graph found {:?}",
                            s.kind(),
                            theirs,
                            (&sxy, adjacent)
                        ),
                    ));
                }
            }
        }
        let local = LocalSets::new(x, y, sxy);
        let (kind, ratio) = if adjacent {
            (MoveKind::Disconnect, self.model.log_ratio_disconnect(&local))
        } else {
            (MoveKind::Connect, self.model.log_ratio_connect(&local))
        };
        let passed = T::of(u.ln()) <= ratio;
        let mut legal = None;
        let mut applied = false;
        if passed {
            let enabler = if adjacent { &local.cxy } else { &local.sxy };
            let mut reports: Vec<(BackendKind, MoveReport)> = Vec::new();
            if let Some(g) = &mut self.graph {
                reports.push((BackendKind::Graph, toggle(g, kind, x, y, enabler)?));
            }
            for s in &mut self.structures {
                reports.push((s.kind(), toggle(s.as_mut(), kind, x, y, enabler)?));
            }
            applied = reports[0].1.applied;
            if let Some((k, _)) = reports.iter().find(|(_, r)| r.applied != applied) {
                let detail = format!(
                    "{} {} the {:?} while {} {}",
                    k,
                    if applied { "rejected" } else { "applied" },
                    kind,
                    reports[0].0,
                    if applied { "applied it" } else { "rejected it" },
                );
                return Err(self.mismatch(x, y, detail));
            }
            legal = Some(applied);
            if applied {
                self.log_pi = self.log_pi + ratio;
                match kind {
                    MoveKind::Connect => self.edges += 1,
                    MoveKind::Disconnect => self.edges -= 1,
                }
            }
        }
        self.window.push(applied);
        if self.config.backend == BackendSelection::All && self.iteration.is_multiple_of(self.config.check_every) {
            self.check_agreement(x, y)?;
        }
        Ok(TraceRecord {
            iteration: self.iteration,
            x,
            y,
            kind,
            passed,
            legal,
            applied,
            edges: self.edges,
            log_pi: self.log_pi,
            acceptance: self.window.proportion(),
        })
    }

    /// Compares the graphs exported by every backend.
    pub fn check_agreement(&self, x: VertexId, y: VertexId) -> Result<()> {
        let reps = self.representations();
        let reference = reps[0].export_graph();
        for r in &reps[1..] {
            if r.export_graph() != reference {
                return Err(self.mismatch(x, y, format!("{} exports a different graph", r.kind())));
            }
        }
        Ok(())
    }

    /// Runs the remaining configured iterations, handing each thinned
    /// record to `observer`.
    pub fn run_with(&mut self, mut observer: impl FnMut(&TraceRecord<T>) -> Result<()>) -> Result<()> {
        while self.iteration < self.config.iterations {
            let rec = self.step()?;
            if rec.iteration.is_multiple_of(self.config.trace_thin) {
                observer(&rec)?;
            }
        }
        Ok(())
    }

    /// Runs the remaining configured iterations and collects the thinned
    /// trace.
    pub fn run(&mut self) -> Result<Vec<TraceRecord<T>>> {
        let mut out = Vec::new();
        self.run_with(|r| {
            out.push(r.clone());
            Ok(())
        })?;
        Ok(out)
    }
}

fn toggle(
    rep: &mut dyn Representation,
    kind: MoveKind,
    x: VertexId,
    y: VertexId,
    enabler: &VertexSet,
) -> Result<MoveReport> {
    match kind {
        MoveKind::Disconnect => rep.disconnect_if_enabled(x, y, enabler),
        MoveKind::Connect => rep.connect_if_enabled(x, y, enabler),
    }
}
