//! Local clustering of hypergraphs by order-3 higher-order motif conductance.
//!
//! The pipeline has four phases: select a ball of nodes around a seed
//! hyperedge ([`ball`]), enumerate motif occurrences near it ([`motif`]),
//! contract everything outside the ball into an auxiliary hypergraph
//! ([`auxiliary`]), and search for a low-conductance 2-way split of that
//! hypergraph ([`partition`], [`conductance`]). [`pipeline`] wires them
//! together and [`harness`] runs batches.

pub mod auxiliary;
pub mod ball;
pub mod conductance;
pub mod diagnostics;
pub mod error;
pub mod generate;
pub mod harness;
pub mod hypergraph;
pub mod io;
pub mod motif;
#[cfg(any(test, feature = "oracle"))]
pub mod oracle;
pub mod partition;
pub mod pipeline;

pub use auxiliary::{build_aux, AuxHypergraph, AuxNode};
pub use ball::{Ball, BallDetail, BallMethod};
pub use conductance::{ConductanceResult, Side};
pub use error::{Error, Result};
pub use hypergraph::{EdgeId, Hyperedge, Hypergraph, HypergraphBuilder, NodeId};
pub use io::{ClusterReport, Dataset, InputFormat, Labels, RunStatus};
pub use motif::{MotifOccurrence, MotifPattern, Scope};
pub use partition::{Partition, SeedMode};
pub use pipeline::{run_local_clustering, RunConfig, SeedSpec};
