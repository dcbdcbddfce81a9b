//! Immutable hypergraph store with an incidence index.
//!
//! Nodes are dense ids `0..n`. Hyperedges are kept in canonical form: members
//! strictly increasing, at least two of them, and no two hyperedges with the
//! same member list. Parallel hyperedges given to the builder are merged and
//! their weights summed.

use std::collections::VecDeque;
use std::fmt;
use std::sync::OnceLock;

use rustc_hash::FxHashMap;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct NodeId(pub u32);

impl NodeId {
    #[inline]
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

impl From<u32> for NodeId {
    fn from(v: u32) -> Self {
        NodeId(v)
    }
}

impl fmt::Display for NodeId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct EdgeId(pub u32);

impl EdgeId {
    #[inline]
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

impl fmt::Display for EdgeId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "e{}", self.0)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Hyperedge {
    members: Vec<NodeId>,
    weight: u64,
}

impl Hyperedge {
    pub fn members(&self) -> &[NodeId] {
        &self.members
    }

    pub fn weight(&self) -> u64 {
        self.weight
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn contains(&self, v: NodeId) -> bool {
        self.members.binary_search(&v).is_ok()
    }
}

/// Counters describing what the builder discarded or merged.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct CleaningStats {
    /// Hyperedges with fewer than two distinct members.
    pub dropped_small: usize,
    /// Hyperedges folded into an earlier identical one.
    pub merged_duplicates: usize,
    /// Repeated members removed inside a single hyperedge.
    pub repeated_members: usize,
}

/// Accumulates raw hyperedges and produces a cleaned [`Hypergraph`].
#[derive(Debug, Default)]
pub struct HypergraphBuilder {
    n: usize,
    edges: Vec<Hyperedge>,
    index: FxHashMap<Vec<NodeId>, usize>,
    stats: CleaningStats,
}

impl HypergraphBuilder {
    pub fn new(n: usize) -> Self {
        Self {
            n,
            ..Self::default()
        }
    }

    /// Grows the node range so that `v` is a valid id.
    pub fn ensure_node(&mut self, v: NodeId) {
        self.n = self.n.max(v.index() + 1);
    }

    pub fn add_edge<I>(&mut self, members: I, weight: u64) -> Result<()>
    where
        I: IntoIterator<Item = NodeId>,
    {
        let mut members: Vec<NodeId> = members.into_iter().collect();
        if let Some(&bad) = members.iter().find(|v| v.index() >= self.n) {
            return Err(Error::NodeOutOfRange {
                node: bad.0,
                n: self.n,
            });
        }
        members.sort_unstable();
        let before = members.len();
        members.dedup();
        self.stats.repeated_members += before - members.len();
        if members.len() < 2 {
            self.stats.dropped_small += 1;
            return Ok(());
        }
        match self.index.get(&members) {
            Some(&e) => {
                self.edges[e].weight += weight;
                self.stats.merged_duplicates += 1;
            }
            None => {
                self.index.insert(members.clone(), self.edges.len());
                self.edges.push(Hyperedge { members, weight });
            }
        }
        Ok(())
    }

    pub fn stats(&self) -> CleaningStats {
        self.stats
    }

    pub fn build(self) -> Hypergraph {
        Hypergraph::assemble(self.n, self.edges, self.index)
    }
}

#[derive(Debug)]
pub struct Hypergraph {
    n: usize,
    edges: Vec<Hyperedge>,
    incidence: Vec<Vec<EdgeId>>,
    node_weights: Vec<u64>,
    edge_index: FxHashMap<Vec<NodeId>, usize>,
    adjacency: Vec<OnceLock<Box<[NodeId]>>>,
}

impl Clone for Hypergraph {
    fn clone(&self) -> Self {
        Hypergraph::assemble(self.n, self.edges.clone(), self.edge_index.clone())
    }
}

impl Hypergraph {
    /// Builds a hypergraph with unit weights from raw member lists.
    pub fn from_edges<I, E>(n: usize, edges: I) -> Result<Self>
    where
        I: IntoIterator<Item = E>,
        E: IntoIterator<Item = u32>,
    {
        let mut b = HypergraphBuilder::new(n);
        for e in edges {
            b.add_edge(e.into_iter().map(NodeId), 1)?;
        }
        Ok(b.build())
    }

    fn assemble(n: usize, edges: Vec<Hyperedge>, edge_index: FxHashMap<Vec<NodeId>, usize>) -> Self {
        let mut incidence = vec![Vec::new(); n];
        for (e, edge) in edges.iter().enumerate() {
            for &v in &edge.members {
                incidence[v.index()].push(EdgeId(e as u32));
            }
        }
        Self {
            n,
            edges,
            incidence,
            node_weights: vec![1; n],
            edge_index,
            adjacency: (0..n).map(|_| OnceLock::new()).collect(),
        }
    }

    pub fn node_count(&self) -> usize {
        self.n
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn nodes(&self) -> impl Iterator<Item = NodeId> + '_ {
        (0..self.n as u32).map(NodeId)
    }

    pub fn edges(&self) -> &[Hyperedge] {
        &self.edges
    }

    pub fn edge(&self, e: EdgeId) -> &Hyperedge {
        &self.edges[e.index()]
    }

    pub fn edge_ids(&self) -> impl Iterator<Item = EdgeId> {
        (0..self.edges.len() as u32).map(EdgeId)
    }

    /// Looks up a hyperedge by its member list (any order, no duplicates).
    pub fn find_edge(&self, members: &[NodeId]) -> Option<EdgeId> {
        let mut key = members.to_vec();
        key.sort_unstable();
        self.edge_index.get(key.as_slice()).map(|&e| EdgeId(e as u32))
    }

    pub fn node_weight(&self, v: NodeId) -> u64 {
        self.node_weights[v.index()]
    }

    pub fn incident_edges(&self, v: NodeId) -> &[EdgeId] {
        &self.incidence[v.index()]
    }

    pub fn degree(&self, v: NodeId) -> usize {
        self.incidence[v.index()].len()
    }

    pub fn max_degree(&self) -> usize {
        self.incidence.iter().map(Vec::len).max().unwrap_or(0)
    }

    pub fn check_node(&self, v: NodeId) -> Result<()> {
        if v.index() < self.n {
            Ok(())
        } else {
            Err(Error::NodeOutOfRange { node: v.0, n: self.n })
        }
    }

    /// Open neighborhood of `v`, sorted ascending. Computed on first use and cached.
    pub fn neighbors(&self, v: NodeId) -> Result<&[NodeId]> {
        self.check_node(v)?;
        Ok(self.neighbors_unchecked(v))
    }

    pub(crate) fn neighbors_unchecked(&self, v: NodeId) -> &[NodeId] {
        self.adjacency[v.index()].get_or_init(|| {
            let mut out: Vec<NodeId> = self.incidence[v.index()]
                .iter()
                .flat_map(|&e| self.edges[e.index()].members.iter().copied())
                .filter(|&u| u != v)
                .collect();
            out.sort_unstable();
            out.dedup();
            out.into_boxed_slice()
        })
    }

    /// `N[S]`: the union of `S` and all neighbors of its members, sorted.
    pub fn closed_neighborhood(&self, set: &[NodeId]) -> Result<Vec<NodeId>> {
        let mut mark = vec![false; self.n];
        for &v in set {
            self.check_node(v)?;
            mark[v.index()] = true;
            for &u in self.neighbors_unchecked(v) {
                mark[u.index()] = true;
            }
        }
        Ok(collect_marked(&mark))
    }

    /// Strongly induced subhypergraph: keeps the hyperedges fully inside `nodes`.
    pub fn induced_subhypergraph(&self, nodes: &[NodeId]) -> Result<InducedSubhypergraph> {
        let mut local = vec![u32::MAX; self.n];
        let mut node_map: Vec<NodeId> = Vec::with_capacity(nodes.len());
        let mut sorted = nodes.to_vec();
        sorted.sort_unstable();
        sorted.dedup();
        for v in sorted {
            self.check_node(v)?;
            local[v.index()] = node_map.len() as u32;
            node_map.push(v);
        }
        let mut edge_map = Vec::new();
        let mut builder = HypergraphBuilder::new(node_map.len());
        for (e, edge) in self.edges.iter().enumerate() {
            if edge.members.iter().all(|v| local[v.index()] != u32::MAX) {
                builder.add_edge(edge.members.iter().map(|v| NodeId(local[v.index()])), edge.weight)?;
                edge_map.push(EdgeId(e as u32));
            }
        }
        Ok(InducedSubhypergraph {
            graph: builder.build(),
            node_map,
            edge_map,
        })
    }

    /// All nodes reachable from `start` through shared hyperedges, sorted.
    pub fn connected_component(&self, start: &[NodeId]) -> Result<Vec<NodeId>> {
        if start.is_empty() {
            return Err(Error::EmptyStart);
        }
        let mut seen = vec![false; self.n];
        let mut edge_seen = vec![false; self.edges.len()];
        let mut queue = VecDeque::new();
        for &v in start {
            self.check_node(v)?;
            if !seen[v.index()] {
                seen[v.index()] = true;
                queue.push_back(v);
            }
        }
        while let Some(v) = queue.pop_front() {
            for &e in &self.incidence[v.index()] {
                if std::mem::replace(&mut edge_seen[e.index()], true) {
                    continue;
                }
                for &u in &self.edges[e.index()].members {
                    if !seen[u.index()] {
                        seen[u.index()] = true;
                        queue.push_back(u);
                    }
                }
            }
        }
        Ok(collect_marked(&seen))
    }
}

/// Result of [`Hypergraph::induced_subhypergraph`], with maps back to the parent ids.
#[derive(Clone, Debug)]
pub struct InducedSubhypergraph {
    pub graph: Hypergraph,
    /// `node_map[local] = parent node id`.
    pub node_map: Vec<NodeId>,
    /// `edge_map[local] = parent edge id`.
    pub edge_map: Vec<EdgeId>,
}

pub(crate) fn collect_marked(mark: &[bool]) -> Vec<NodeId> {
    mark.iter()
        .enumerate()
        .filter(|(_, &m)| m)
        .map(|(i, _)| NodeId(i as u32))
        .collect()
}
