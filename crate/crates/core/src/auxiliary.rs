//! Phase three: the auxiliary hypergraph.
//!
//! Each motif occurrence becomes a hyperedge over its ball nodes; every node
//! outside the ball is contracted into a single node `u`. Parallel crossing
//! hyperedges are merged and weighted by multiplicity, so a cut of this
//! hypergraph counts exactly the occurrences cut in the original.

use std::io::Write;

use rustc_hash::FxHashMap;

use crate::error::{Error, Result};
use crate::hypergraph::NodeId;
use crate::io::Labels;
use crate::motif::MotifOccurrence;

/// Aux node index. Ball nodes are `0..ball_len`, the contracted node is `ball_len`.
pub type AuxNode = u32;

#[derive(Clone, Debug)]
pub struct AuxHypergraph {
    ball: Vec<NodeId>,
    seed: Vec<AuxNode>,
    pin_offsets: Vec<u32>,
    pins: Vec<AuxNode>,
    weights: Vec<u64>,
    incidence: Vec<Vec<u32>>,
    degrees: Vec<u64>,
    occurrences: usize,
}

impl AuxHypergraph {
    /// Number of aux nodes, including `u`.
    pub fn node_count(&self) -> usize {
        self.ball.len() + 1
    }

    pub fn ball_len(&self) -> usize {
        self.ball.len()
    }

    pub fn complement_node(&self) -> AuxNode {
        self.ball.len() as AuxNode
    }

    /// Original node for a ball-side aux node; `None` for `u`.
    pub fn original(&self, v: AuxNode) -> Option<NodeId> {
        self.ball.get(v as usize).copied()
    }

    pub fn ball(&self) -> &[NodeId] {
        &self.ball
    }

    pub fn seed(&self) -> &[AuxNode] {
        &self.seed
    }

    pub fn edge_count(&self) -> usize {
        self.weights.len()
    }

    pub fn pins(&self, e: usize) -> &[AuxNode] {
        &self.pins[self.pin_offsets[e] as usize..self.pin_offsets[e + 1] as usize]
    }

    pub fn weight(&self, e: usize) -> u64 {
        self.weights[e]
    }

    pub fn edges(&self) -> impl Iterator<Item = (&[AuxNode], u64)> + '_ {
        (0..self.edge_count()).map(move |e| (self.pins(e), self.weights[e]))
    }

    pub fn incident(&self, v: AuxNode) -> &[u32] {
        &self.incidence[v as usize]
    }

    /// Motif degree of each ball-side aux node, computed from the occurrences.
    pub fn motif_degrees(&self) -> &[u64] {
        &self.degrees
    }

    pub fn occurrence_count(&self) -> usize {
        self.occurrences
    }

    pub fn total_weight(&self) -> u64 {
        self.weights.iter().sum()
    }

    /// Writes one `weight<TAB>members...` line per hyperedge; `u` is written as `~`.
    pub fn write_edge_list<W: Write>(&self, labels: &Labels, mut w: W) -> Result<()> {
        writeln!(w, "# weight\tmembers (~ = contracted complement)")?;
        for (pins, weight) in self.edges() {
            let names: Vec<&str> = pins
                .iter()
                .map(|&p| self.original(p).map_or("~", |v| labels.get(v)))
                .collect();
            writeln!(w, "{weight}\t{}", names.join(" "))?;
        }
        Ok(())
    }
}

/// Builds the auxiliary hypergraph for `occurrences` around `ball` (sorted).
pub fn build_aux(occurrences: &[MotifOccurrence], ball: &[NodeId], seed: &[NodeId]) -> Result<AuxHypergraph> {
    let local: FxHashMap<NodeId, AuxNode> =
        ball.iter().enumerate().map(|(i, &v)| (v, i as AuxNode)).collect();
    let u = ball.len() as AuxNode;
    let seed = seed
        .iter()
        .map(|v| {
            local.get(v).copied().ok_or_else(|| {
                Error::InvalidConfig(format!("seed node {v} lies outside the ball"))
            })
        })
        .collect::<Result<Vec<_>>>()?;

    let mut pin_offsets = vec![0u32];
    let mut pins = Vec::with_capacity(occurrences.len() * 3);
    let mut weights = Vec::with_capacity(occurrences.len());
    let mut crossing: FxHashMap<[AuxNode; 3], usize> = FxHashMap::default();
    let mut degrees = vec![0u64; ball.len()];

    for occ in occurrences {
        let mut inside = [u; 3];
        let mut k = 0;
        for v in occ.nodes {
            if let Some(&a) = local.get(&v) {
                inside[k] = a;
                degrees[a as usize] += 1;
                k += 1;
            }
        }
        if k == 0 {
            return Err(Error::OccurrenceOutsideBall(occ.nodes));
        }
        let edge: &[AuxNode] = if k == 3 {
            inside.sort_unstable();
            &inside
        } else {
            inside[..k].sort_unstable();
            inside[k] = u;
            if let Some(&e) = crossing.get(&inside) {
                weights[e] += 1;
                continue;
            }
            crossing.insert(inside, weights.len());
            &inside[..=k]
        };
        pins.extend_from_slice(edge);
        pin_offsets.push(pins.len() as u32);
        weights.push(1);
    }

    let mut incidence = vec![Vec::new(); ball.len() + 1];
    for e in 0..weights.len() {
        for &p in &pins[pin_offsets[e] as usize..pin_offsets[e + 1] as usize] {
            incidence[p as usize].push(e as u32);
        }
    }
    Ok(AuxHypergraph {
        ball: ball.to_vec(),
        seed,
        pin_offsets,
        pins,
        weights,
        incidence,
        degrees,
        occurrences: occurrences.len(),
    })
}
