use std::path::PathBuf;

use thiserror::Error;

use crate::hypergraph::NodeId;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("node {node} is out of range for a hypergraph with {n} nodes")]
    NodeOutOfRange { node: u32, n: usize },

    #[error("connected component requested from an empty start set")]
    EmptyStart,

    #[error("hypergraph is empty after cleaning")]
    EmptyHypergraph,

    #[error("seed {0} is not a hyperedge of the hypergraph")]
    SeedNotFound(String),

    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("simplices file lists {actual} node ids but nverts sums to {expected}")]
    LengthMismatch { expected: u64, actual: u64 },

    #[error("{}: {source}", path.display())]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error(transparent)]
    Stream(#[from] std::io::Error),

    #[error("triple ({0}, {1}, {2}) does not consist of distinct nodes")]
    NonDistinctTriple(NodeId, NodeId, NodeId),

    #[error("motif occurrence {0:?} has no node inside the ball")]
    OccurrenceOutsideBall([NodeId; 3]),

    #[error("partition leaves block {0} empty")]
    EmptyBlock(u8),

    #[error("{fixed} fixed nodes do not fit a block bound of {bound}")]
    InfeasibleConstraint { fixed: usize, bound: usize },

    #[error("motif conductance is undefined: {0}")]
    UndefinedConductance(&'static str),

    #[error(
        "volume hypothesis violated: cluster volume {cluster} exceeds complement volume {complement}"
    )]
    HypothesisViolated { cluster: u64, complement: u64 },

    #[error("global enumeration refused: {edges} hyperedges exceed the limit of {limit}")]
    VerificationRefused { edges: usize, limit: usize },

    #[error("oracle budget exceeded: {0}")]
    BudgetExceeded(String),

    #[error("invalid configuration: {0}")]
    InvalidConfig(String),

    #[error("report serialization failed: {0}")]
    Json(#[from] serde_json::Error),
}

impl Error {
    /// Errors caused by bad user input rather than an internal failure.
    pub fn is_input_error(&self) -> bool {
        matches!(
            self,
            Error::NodeOutOfRange { .. }
                | Error::EmptyStart
                | Error::EmptyHypergraph
                | Error::SeedNotFound(_)
                | Error::Parse { .. }
                | Error::LengthMismatch { .. }
                | Error::Io { .. }
                | Error::NonDistinctTriple(..)
                | Error::InvalidConfig(_)
                | Error::VerificationRefused { .. }
        )
    }
}
