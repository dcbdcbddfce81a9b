use std::io::{BufRead, Write};
use std::path::Path;

use rustc_hash::FxHashMap;

use super::{open, Dataset, Labels};
use crate::error::{Error, Result};
use crate::hypergraph::{Hypergraph, HypergraphBuilder, NodeId};

/// Assigns dense ids to labels in order of first appearance.
#[derive(Default)]
pub(super) struct LabelInterner {
    ids: FxHashMap<String, u32>,
    labels: Vec<String>,
}

impl LabelInterner {
    pub(super) fn intern(&mut self, label: &str) -> NodeId {
        if let Some(&id) = self.ids.get(label) {
            return NodeId(id);
        }
        let id = self.labels.len() as u32;
        self.ids.insert(label.to_owned(), id);
        self.labels.push(label.to_owned());
        NodeId(id)
    }

    pub(super) fn finish(self, builder: HypergraphBuilder) -> Result<Dataset> {
        let stats = builder.stats();
        let graph = builder.build();
        if graph.edge_count() == 0 {
            return Err(Error::EmptyHypergraph);
        }
        if stats.dropped_small > 0 {
            log::warn!("dropped {} hyperedges with fewer than two nodes", stats.dropped_small);
        }
        Ok(Dataset {
            graph,
            labels: Labels::new(self.labels),
            stats,
        })
    }
}

/// Reads one hyperedge per line. Labels are separated by whitespace or commas;
/// blank lines and lines starting with `#` are skipped.
pub fn parse_edge_list<R: BufRead>(mut reader: R) -> Result<Dataset> {
    let mut interner = LabelInterner::default();
    let mut builder = HypergraphBuilder::new(0);
    let mut buf = Vec::new();
    let mut line_no = 0;
    loop {
        buf.clear();
        if reader.read_until(b'\n', &mut buf)? == 0 {
            break;
        }
        line_no += 1;
        let line = std::str::from_utf8(&buf).map_err(|_| Error::Parse {
            line: line_no,
            message: "line is not valid UTF-8".into(),
        })?;
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let mut members = Vec::new();
        for token in line.split(|c: char| c == ',' || c.is_whitespace()) {
            if token.is_empty() {
                continue;
            }
            if token.chars().any(char::is_control) {
                return Err(Error::Parse {
                    line: line_no,
                    message: format!("label {token:?} contains a control character"),
                });
            }
            let v = interner.intern(token);
            builder.ensure_node(v);
            members.push(v);
        }
        builder.add_edge(members, 1)?;
    }
    interner.finish(builder)
}

pub fn load_edge_list(path: &Path) -> Result<Dataset> {
    parse_edge_list(open(path)?).map_err(|e| match e {
        Error::Stream(source) => Error::Io {
            path: path.to_owned(),
            source,
        },
        other => other,
    })
}

/// Writes each hyperedge as a line of labels, repeated `weight` times so the
/// parser's merge rule restores the weights.
pub fn write_edge_list<W: Write>(graph: &Hypergraph, labels: &Labels, mut w: W) -> Result<()> {
    for edge in graph.edges() {
        let line = labels.map(edge.members()).join(" ");
        for _ in 0..edge.weight() {
            writeln!(w, "{line}")?;
        }
    }
    Ok(())
}
