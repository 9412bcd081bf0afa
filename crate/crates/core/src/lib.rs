//! Metropolis sampling over decomposable graphs with four interchangeable
//! state representations.

pub mod almond;
pub mod dot;
pub mod error;
pub mod graph;
pub mod ibarra;
pub mod junction;
pub mod oracle;
pub mod potentials;
pub mod rep_graph;
pub mod report;
pub mod repr;
pub mod sampler;
pub mod scalar;
pub mod search;
pub mod set;
pub mod setgraph;
#[cfg(test)]
mod testkit;

pub use error::{Error, Result};
pub use graph::UndirectedGraph;
pub use potentials::{ModelSpec, Potential, PotentialModel};
pub use repr::{BackendKind, MoveKind, MoveReport, Representation};
pub use sampler::{BackendSelection, SamplerConfig, TraceRecord};
pub use scalar::Scalar;
pub use set::{VertexId, VertexSet};

/// Double-precision chain.
pub type Sampler = sampler::Sampler<f64>;
/// Single-precision chain.
pub type Sampler32 = sampler::Sampler<f32>;
pub type GraphState = rep_graph::GraphState<f64, PotentialModel<f64>>;
