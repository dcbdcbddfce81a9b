//! Motif cut and motif conductance.
//!
//! Values are exact rationals. A split where both sides have zero motif
//! volume, or where one side is empty, has no conductance; a split where
//! exactly one side has zero volume (and therefore zero cut) scores 0.

use num_rational::Ratio;
use rustc_hash::FxHashSet;
use serde::{Deserialize, Serialize};

use crate::auxiliary::{AuxHypergraph, AuxNode};
use crate::diagnostics;
use crate::error::{Error, Result};
use crate::hypergraph::{Hypergraph, NodeId};
use crate::motif::{enumerate_motifs, motif_degree_vector, MotifOccurrence, MotifPattern, Scope};
use crate::partition::{cut_net_unchecked, Partition};

/// Which side's volume ended up in the denominator.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Side {
    Cluster,
    Complement,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct ConductanceResult {
    pub phi: Ratio<u64>,
    pub motif_cut: u64,
    pub volume_used: u64,
    pub side: Side,
    /// Set when one side had zero volume and the value fell back to 0.
    pub degenerate: bool,
}

impl ConductanceResult {
    pub fn phi_f64(&self) -> f64 {
        *self.phi.numer() as f64 / *self.phi.denom() as f64
    }
}

/// Shared scoring rule for a cut with the two sides' motif volumes.
pub fn score_split(cut: u64, cluster_volume: u64, complement_volume: u64) -> Result<ConductanceResult> {
    let (volume_used, side) = if cluster_volume <= complement_volume {
        (cluster_volume, Side::Cluster)
    } else {
        (complement_volume, Side::Complement)
    };
    let result = match (cluster_volume, complement_volume, volume_used) {
        (0, 0, _) => return Err(Error::UndefinedConductance("both sides have zero motif volume")),
        (_, _, 0) if cut == 0 => ConductanceResult {
            phi: Ratio::from_integer(0),
            motif_cut: 0,
            volume_used: 0,
            side,
            degenerate: true,
        },
        (_, _, 0) => return Err(Error::UndefinedConductance("cut occurrences on a side with zero volume")),
        _ => ConductanceResult {
            phi: Ratio::new(cut, volume_used),
            motif_cut: cut,
            volume_used,
            side,
            degenerate: false,
        },
    };
    check_range(&result);
    Ok(result)
}

fn check_range(r: &ConductanceResult) {
    if r.phi > Ratio::from_integer(1) {
        diagnostics::record_phi_out_of_range();
    }
}

fn membership(cluster: &[NodeId]) -> FxHashSet<NodeId> {
    cluster.iter().copied().collect()
}

/// Occurrences with at least one node in `cluster` and at least one outside.
pub fn motif_cut(occurrences: &[MotifOccurrence], cluster: &[NodeId]) -> u64 {
    let inside = membership(cluster);
    occurrences
        .iter()
        .filter(|o| {
            let k = o.nodes.iter().filter(|v| inside.contains(v)).count();
            k > 0 && k < 3
        })
        .count() as u64
}

/// Conductance by definition. `occurrences` must be every occurrence in a
/// hypergraph with `n` nodes.
pub fn conductance_direct(occurrences: &[MotifOccurrence], n: usize, cluster: &[NodeId]) -> Result<ConductanceResult> {
    let inside = membership(cluster);
    if inside.is_empty() {
        return Err(Error::UndefinedConductance("empty cluster"));
    }
    if inside.len() >= n {
        return Err(Error::UndefinedConductance("cluster covers every node"));
    }
    let (mut cut, mut vol_in) = (0u64, 0u64);
    for o in occurrences {
        let k = o.nodes.iter().filter(|v| inside.contains(v)).count() as u64;
        vol_in += k;
        if k == 1 || k == 2 {
            cut += 1;
        }
    }
    let vol_out = 3 * occurrences.len() as u64 - vol_in;
    score_split(cut, vol_in, vol_out)
}

fn block_volumes(aux: &AuxHypergraph, p: &Partition) -> [u64; 2] {
    let mut vol = [0u64; 2];
    for (v, &d) in aux.motif_degrees().iter().enumerate() {
        vol[p.block(v as AuxNode) as usize] += d;
    }
    vol
}

/// Aux cut-net over the motif volume of block 0.
///
/// Equal to [`conductance_direct`] when block 0 has the smaller volume in
/// the original hypergraph.
pub fn conductance_via_aux(aux: &AuxHypergraph, p: &Partition) -> Result<ConductanceResult> {
    let cut = cut_net_unchecked(aux, p.blocks());
    let [vol, _] = block_volumes(aux, p);
    aux_score(cut, vol)
}

fn aux_score(cut: u64, cluster_volume: u64) -> Result<ConductanceResult> {
    if cluster_volume == 0 {
        return Err(Error::UndefinedConductance("cluster has no motif participation"));
    }
    let result = ConductanceResult {
        phi: Ratio::new(cut, cluster_volume),
        motif_cut: cut,
        volume_used: cluster_volume,
        side: Side::Cluster,
        degenerate: false,
    };
    check_range(&result);
    Ok(result)
}

/// Node count and motif volume of everything outside the ball.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ComplementInfo {
    pub nodes: usize,
    pub volume: u64,
}

/// Conductance by definition, evaluated through the aux hypergraph plus the
/// known volume of the contracted complement.
pub fn conductance_exact(aux: &AuxHypergraph, p: &Partition, outside: ComplementInfo) -> Result<ConductanceResult> {
    let cut = cut_net_unchecked(aux, p.blocks());
    let [vol_c, vol_rest] = block_volumes(aux, p);
    let cluster_nodes = (0..aux.ball_len() as AuxNode).filter(|&v| p.block(v) == 0).count();
    exact_score(cut, vol_c, vol_rest, cluster_nodes, aux.ball_len(), outside)
}

fn exact_score(
    cut: u64,
    vol_c: u64,
    vol_rest: u64,
    cluster_nodes: usize,
    ball_len: usize,
    outside: ComplementInfo,
) -> Result<ConductanceResult> {
    if cluster_nodes == 0 {
        return Err(Error::UndefinedConductance("empty cluster"));
    }
    if cluster_nodes == ball_len && outside.nodes == 0 {
        return Err(Error::UndefinedConductance("cluster covers every node"));
    }
    score_split(cut, vol_c, vol_rest + outside.volume)
}

/// Scoring rule used by the partition search.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Evaluator {
    /// [`conductance_via_aux`].
    Aux,
    /// [`conductance_exact`] with the given complement.
    Exact(ComplementInfo),
}

impl Evaluator {
    pub fn evaluate(&self, aux: &AuxHypergraph, p: &Partition) -> Result<ConductanceResult> {
        match self {
            Evaluator::Aux => conductance_via_aux(aux, p),
            Evaluator::Exact(outside) => conductance_exact(aux, p, *outside),
        }
    }

    /// Same value as [`Evaluator::evaluate`], from precomputed split statistics
    /// of a consistent partition.
    pub(crate) fn score_parts(
        &self,
        cut: u64,
        vol_c: u64,
        vol_rest: u64,
        cluster_nodes: usize,
        ball_len: usize,
    ) -> Result<ConductanceResult> {
        match self {
            Evaluator::Aux => aux_score(cut, vol_c),
            Evaluator::Exact(outside) => exact_score(cut, vol_c, vol_rest, cluster_nodes, ball_len, *outside),
        }
    }
}

/// Aux conductance that refuses to answer when block 0 is the larger side.
pub fn conductance_via_aux_checked(
    aux: &AuxHypergraph,
    p: &Partition,
    outside: ComplementInfo,
) -> Result<ConductanceResult> {
    let [vol_c, vol_rest] = block_volumes(aux, p);
    let complement = vol_rest + outside.volume;
    if vol_c > complement {
        return Err(Error::HypothesisViolated {
            cluster: vol_c,
            complement,
        });
    }
    conductance_via_aux(aux, p)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct VerifyGuard {
    pub max_edges: usize,
    pub force: bool,
}

impl Default for VerifyGuard {
    fn default() -> Self {
        Self {
            max_edges: 200_000,
            force: false,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct VolumeCheck {
    pub ball_volume: u64,
    pub complement: ComplementInfo,
}

impl VolumeCheck {
    pub fn holds(&self) -> bool {
        self.ball_volume <= self.complement.volume
    }
}

/// Enumerates `pattern` over the whole hypergraph and compares the motif
/// volume of `ball` with that of its complement.
pub fn verify_volume_assumption(
    h: &Hypergraph,
    ball: &[NodeId],
    pattern: MotifPattern,
    guard: VerifyGuard,
) -> Result<VolumeCheck> {
    if h.edge_count() > guard.max_edges && !guard.force {
        return Err(Error::VerificationRefused {
            edges: h.edge_count(),
            limit: guard.max_edges,
        });
    }
    let all: Vec<NodeId> = h.nodes().collect();
    let occurrences = enumerate_motifs(h, &all, pattern, Scope::Exact)?;
    let degrees = motif_degree_vector(&occurrences, h.node_count());
    let inside = membership(ball);
    let ball_volume: u64 = inside.iter().map(|v| degrees[v.index()]).sum();
    let total: u64 = degrees.iter().sum();
    Ok(VolumeCheck {
        ball_volume,
        complement: ComplementInfo {
            nodes: h.node_count() - inside.len(),
            volume: total - ball_volume,
        },
    })
}
