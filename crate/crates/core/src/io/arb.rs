//! The two-file simplex format: a `-nverts` file with one hyperedge size per
//! line and a `-simplices` file listing node ids consumed in those chunks.
//! The `-times` file that usually accompanies them is not read.

use std::io::BufRead;
use std::path::{Path, PathBuf};

use super::edgelist::LabelInterner;
use super::{open, Dataset};
use crate::error::{Error, Result};
use crate::hypergraph::HypergraphBuilder;

pub fn parse_arb_simplices<N: BufRead, S: BufRead>(nverts: N, simplices: S) -> Result<Dataset> {
    let mut sizes = Vec::new();
    for (i, line) in nverts.lines().enumerate() {
        let line = line.map_err(|_| Error::Parse {
            line: i + 1,
            message: "nverts line is not valid UTF-8".into(),
        })?;
        let line = line.trim();
        if line.is_empty() {
            continue;
        }
        let size: u64 = line.parse().map_err(|_| Error::Parse {
            line: i + 1,
            message: format!("expected a hyperedge size, found {line:?}"),
        })?;
        sizes.push(size);
    }

    let mut ids = Vec::new();
    for (i, line) in simplices.lines().enumerate() {
        let line = line.map_err(|_| Error::Parse {
            line: i + 1,
            message: "simplices line is not valid UTF-8".into(),
        })?;
        ids.extend(line.split_whitespace().map(str::to_owned));
    }

    let expected: u64 = sizes.iter().sum();
    if expected != ids.len() as u64 {
        return Err(Error::LengthMismatch {
            expected,
            actual: ids.len() as u64,
        });
    }

    let mut interner = LabelInterner::default();
    let mut builder = HypergraphBuilder::new(0);
    let mut rest = ids.as_slice();
    for size in sizes {
        let (chunk, tail) = rest.split_at(size as usize);
        rest = tail;
        let members: Vec<_> = chunk.iter().map(|l| interner.intern(l)).collect();
        for &v in &members {
            builder.ensure_node(v);
        }
        builder.add_edge(members, 1)?;
    }
    interner.finish(builder)
}

/// Resolves the nverts/simplices pair for `path`, which is either a dataset
/// directory `.../name/` or a prefix `.../name`.
pub fn arb_paths(path: &Path) -> (PathBuf, PathBuf) {
    let prefix = if path.is_dir() {
        let name = path
            .file_name()
            .map(|n| n.to_string_lossy().into_owned())
            .unwrap_or_default();
        path.join(name)
    } else {
        path.to_owned()
    };
    let with = |suffix: &str| {
        let mut p = prefix.clone().into_os_string();
        p.push(suffix);
        PathBuf::from(p)
    };
    (with("-nverts.txt"), with("-simplices.txt"))
}

pub fn load_arb(path: &Path) -> Result<Dataset> {
    let (nverts, simplices) = arb_paths(path);
    parse_arb_simplices(open(&nverts)?, open(&simplices)?)
}
