use std::io;
use std::path::PathBuf;

use thiserror::Error;

/// Errors raised by the graph, community, objective, swarm, centrality and
/// diffusion layers.
#[derive(Debug, Error)]
pub enum Error {
    #[error("failed to read {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: io::Error,
    },

    #[error("{path}:{line}: {reason}")]
    Parse {
        path: PathBuf,
        line: usize,
        reason: String,
    },

    #[error("graph {0:?} has no nodes")]
    EmptyGraph(String),

    #[error("graph has no edges")]
    NoEdges,

    #[error("node {node} out of range for graph with {n} nodes")]
    NodeOutOfRange { node: usize, n: usize },

    #[error("duplicate node {0} in seed set")]
    DuplicateSeed(usize),

    #[error("seed-set size {k} exceeds {available}")]
    SeedSetTooLarge { k: usize, available: usize },

    #[error("invalid parameter `{name}`: {reason}")]
    InvalidParameter { name: &'static str, reason: String },

    #[error("exact enumeration limited to {limit} edges, graph has {m}")]
    TooManyEdges { m: usize, limit: usize },
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

pub(crate) fn invalid(name: &'static str, reason: impl Into<String>) -> Error {
    Error::InvalidParameter {
        name,
        reason: reason.into(),
    }
}
