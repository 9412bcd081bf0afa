use thiserror::Error;

use crate::set::{VertexId, VertexSet};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("self-loop at vertex {0}")]
    SelfLoop(VertexId),

    #[error("vertex {vertex} is outside the universe 0..{n}")]
    UnknownVertex { vertex: VertexId, n: usize },

    #[error("({0}, {1}) is not an edge")]
    MissingEdge(VertexId, VertexId),

    #[error("vertex universe must be non-empty")]
    EmptyUniverse,

    #[error("graph is not decomposable")]
    NotDecomposable,

    #[error("contract violation: {0}")]
    ContractViolation(String),

    #[error("zero potential on separator {0} while all cliques are positive; the distribution is undefined")]
    ModelMisuse(VertexSet),

    #[error("invalid configuration: {0}")]
    InvalidConfig(String),

    #[error("representations disagree at iteration {iteration} on pair ({x}, {y}): {detail}")]
    Verification {
        iteration: u64,
        x: VertexId,
        y: VertexId,
        detail: String,
    },

    #[error("i/o error: {0}")]
    Io(String),
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

impl From<csv::Error> for Error {
    fn from(e: csv::Error) -> Self {
        Error::Io(e.to_string())
    }
}

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        Error::Io(e.to_string())
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
