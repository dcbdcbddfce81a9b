//! Dataset ingestion, debug writers and the structured run report.

mod arb;
mod edgelist;
mod report;

use std::fs::File;
use std::io::{BufReader, BufWriter, Write};
use std::path::Path;

use crate::error::{Error, Result};
use crate::hypergraph::{CleaningStats, Hypergraph, NodeId};

pub use arb::{arb_paths, load_arb, parse_arb_simplices};
pub use edgelist::{load_edge_list, parse_edge_list, write_edge_list};
pub use report::{
    format_phi, read_report, write_report, AssumptionStatus, ClusterReport, Evaluation,
    ParamEcho, PhaseTimings, RunStatus,
};

/// Original node labels, indexed by dense node id.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Labels(Vec<String>);

impl Labels {
    pub fn new(labels: Vec<String>) -> Self {
        Labels(labels)
    }

    /// Labels equal to the decimal node ids.
    pub fn identity(n: usize) -> Self {
        Labels((0..n).map(|i| i.to_string()).collect())
    }

    pub fn get(&self, v: NodeId) -> &str {
        &self.0[v.index()]
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn map(&self, nodes: &[NodeId]) -> Vec<String> {
        nodes.iter().map(|&v| self.get(v).to_owned()).collect()
    }

    /// Reverse lookup; linear in the label count.
    pub fn resolve(&self, label: &str) -> Option<NodeId> {
        self.0.iter().position(|l| l == label).map(|i| NodeId(i as u32))
    }
}

/// A cleaned hypergraph with its label map.
#[derive(Clone, Debug)]
pub struct Dataset {
    pub graph: Hypergraph,
    pub labels: Labels,
    pub stats: CleaningStats,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum InputFormat {
    EdgeList,
    Arb,
}

impl std::str::FromStr for InputFormat {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "edgelist" => Ok(InputFormat::EdgeList),
            "arb" => Ok(InputFormat::Arb),
            other => Err(Error::InvalidConfig(format!("unknown input format `{other}`"))),
        }
    }
}

pub fn load(path: &Path, format: InputFormat) -> Result<Dataset> {
    match format {
        InputFormat::EdgeList => load_edge_list(path),
        InputFormat::Arb => load_arb(path),
    }
}

pub(crate) fn open(path: &Path) -> Result<BufReader<File>> {
    File::open(path).map(BufReader::new).map_err(|source| Error::Io {
        path: path.to_owned(),
        source,
    })
}

/// Creates `path` and runs `f` on a buffered writer, attaching the path to I/O errors.
pub fn with_output<F>(path: &Path, f: F) -> Result<()>
where
    F: FnOnce(&mut BufWriter<File>) -> Result<()>,
{
    let io_err = |source| Error::Io {
        path: path.to_owned(),
        source,
    };
    let file = File::create(path).map_err(io_err)?;
    let mut w = BufWriter::new(file);
    match f(&mut w) {
        Err(Error::Stream(source)) => return Err(io_err(source)),
        other => other?,
    }
    w.flush().map_err(io_err)
}
