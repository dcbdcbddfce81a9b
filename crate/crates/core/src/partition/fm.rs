//! Fiduccia-Mattheyses refinement for 2-way cut-net partitioning.

use std::cmp::Reverse;
use std::collections::BTreeSet;

use super::{cut_net_unchecked, ImbalanceConstraint, Partition};
use crate::auxiliary::{AuxHypergraph, AuxNode};
use crate::conductance::{ConductanceResult, Evaluator};
use crate::diagnostics;

/// Pin counts per hyperedge and block, with the cut-net gain of every node.
///
/// `gain(v)` is the decrease in cut-net if `v` alone switched blocks.
pub(crate) struct GainState<'a> {
    aux: &'a AuxHypergraph,
    pub(crate) blocks: Vec<u8>,
    pin_count: Vec<[u32; 2]>,
    pub(crate) gains: Vec<i64>,
    pub(crate) sizes: [usize; 2],
}

impl<'a> GainState<'a> {
    pub(crate) fn new(aux: &'a AuxHypergraph, blocks: Vec<u8>) -> Self {
        let mut pin_count = vec![[0u32; 2]; aux.edge_count()];
        for (e, count) in pin_count.iter_mut().enumerate() {
            for &p in aux.pins(e) {
                count[blocks[p as usize] as usize] += 1;
            }
        }
        let mut gains = vec![0i64; aux.node_count()];
        for (v, gain) in gains.iter_mut().enumerate() {
            let from = blocks[v] as usize;
            for &e in aux.incident(v as AuxNode) {
                let w = aux.weight(e as usize) as i64;
                let pc = pin_count[e as usize];
                if pc[from] == 1 {
                    *gain += w;
                }
                if pc[1 - from] == 0 {
                    *gain -= w;
                }
            }
        }
        let mut sizes = [0usize; 2];
        for &b in &blocks {
            sizes[b as usize] += 1;
        }
        Self {
            aux,
            blocks,
            pin_count,
            gains,
            sizes,
        }
    }

    /// Moves `v` to the other block, calling `touched` for every node whose
    /// gain changed (other than `v` itself).
    pub(crate) fn apply_move(&mut self, v: AuxNode, mut touched: impl FnMut(AuxNode, i64, i64)) {
        let from = self.blocks[v as usize] as usize;
        let to = 1 - from;
        let blocks = &self.blocks;
        let gains = &mut self.gains;
        let mut bump = |x: AuxNode, delta: i64| {
            let old = gains[x as usize];
            gains[x as usize] = old + delta;
            touched(x, old, old + delta);
        };
        for &e in self.aux.incident(v) {
            let e = e as usize;
            let w = self.aux.weight(e) as i64;
            let pins = self.aux.pins(e);
            let pc = &mut self.pin_count[e];
            if pc[to] == 0 {
                pins.iter().filter(|&&x| x != v).for_each(|&x| bump(x, w));
            } else if pc[to] == 1 {
                pins.iter()
                    .filter(|&&x| blocks[x as usize] as usize == to)
                    .for_each(|&x| bump(x, -w));
            }
            pc[from] -= 1;
            pc[to] += 1;
            if pc[from] == 0 {
                pins.iter().filter(|&&x| x != v).for_each(|&x| bump(x, -w));
            } else if pc[from] == 1 {
                pins.iter()
                    .filter(|&&x| x != v && blocks[x as usize] as usize == from)
                    .for_each(|&x| bump(x, w));
            }
        }
        self.blocks[v as usize] = to as u8;
        self.gains[v as usize] = -self.gains[v as usize];
        self.sizes[from] -= 1;
        self.sizes[to] += 1;
    }
}

/// Gain of every aux node under `p`, via the incremental pin-count machinery.
pub fn node_gains(aux: &AuxHypergraph, p: &Partition) -> Vec<i64> {
    GainState::new(aux, p.blocks().to_vec()).gains
}

/// Best-scoring consistent split seen while refining: `u` in block 1, every
/// seed node in block 0.
pub(crate) struct Tracker<'e> {
    evaluator: &'e Evaluator,
    is_seed: Vec<bool>,
    degrees: &'e [u64],
    total_volume: u64,
    ball_len: usize,
    pub(crate) best: Option<(ConductanceResult, u64, Partition)>,
}

/// Running statistics of the current split inside a pass.
#[derive(Clone, Copy)]
struct SplitStats {
    cut: u64,
    vol0: u64,
    cluster_nodes: usize,
    seeds_out: usize,
}

impl<'e> Tracker<'e> {
    pub(crate) fn new(aux: &'e AuxHypergraph, evaluator: &'e Evaluator) -> Self {
        let mut is_seed = vec![false; aux.node_count()];
        for &s in aux.seed() {
            is_seed[s as usize] = true;
        }
        let degrees = aux.motif_degrees();
        Self {
            evaluator,
            is_seed,
            degrees,
            total_volume: degrees[..aux.ball_len()].iter().sum(),
            ball_len: aux.ball_len(),
            best: None,
        }
    }

    fn stats(&self, blocks: &[u8], cut: u64) -> SplitStats {
        let mut s = SplitStats {
            cut,
            vol0: 0,
            cluster_nodes: 0,
            seeds_out: 0,
        };
        for (v, &b) in blocks.iter().enumerate() {
            if v < self.ball_len && b == 0 {
                s.vol0 += self.degrees[v];
                s.cluster_nodes += 1;
            }
            if self.is_seed[v] && b == 1 {
                s.seeds_out += 1;
            }
        }
        s
    }

    fn moved(&self, s: &mut SplitStats, v: AuxNode, to: u8, gain: i64) {
        let v = v as usize;
        s.cut = (s.cut as i64 - gain) as u64;
        if v < self.ball_len {
            if to == 0 {
                s.vol0 += self.degrees[v];
                s.cluster_nodes += 1;
            } else {
                s.vol0 -= self.degrees[v];
                s.cluster_nodes -= 1;
            }
        }
        if self.is_seed[v] {
            if to == 0 {
                s.seeds_out -= 1;
            } else {
                s.seeds_out += 1;
            }
        }
    }

    fn score(&self, s: &SplitStats) -> Option<ConductanceResult> {
        if s.seeds_out > 0 {
            return None;
        }
        self.evaluator
            .score_parts(s.cut, s.vol0, self.total_volume - s.vol0, s.cluster_nodes, self.ball_len)
            .ok()
    }

    fn beats(&self, r: &ConductanceResult, cut: u64, size: usize) -> bool {
        match &self.best {
            None => true,
            Some((b, bcut, bp)) => (r.phi, cut, size) < (b.phi, *bcut, bp.size(0)),
        }
    }
}

/// Runs FM passes until one fails to improve the cut or `max_passes` is hit.
///
/// Only nodes with `movable[v]` set may switch blocks. Each move must keep
/// both blocks nonempty and within the constraint's size bound; among
/// feasible moves the highest gain wins, ties to the lowest node id. At the
/// end of a pass the partition rolls back to its best prefix.
pub fn fm_refine(
    aux: &AuxHypergraph,
    p: &Partition,
    constraint: &ImbalanceConstraint,
    max_passes: usize,
    movable: &[bool],
) -> Partition {
    refine(aux, p, constraint, max_passes, movable, None)
}

pub(crate) fn refine(
    aux: &AuxHypergraph,
    p: &Partition,
    constraint: &ImbalanceConstraint,
    max_passes: usize,
    movable: &[bool],
    mut tracker: Option<&mut Tracker<'_>>,
) -> Partition {
    let n = aux.node_count();
    let u = aux.complement_node() as usize;
    let bound = constraint.max_block(n);
    let initial_cut = cut_net_unchecked(aux, p.blocks());
    let mut blocks = p.blocks().to_vec();

    for _ in 0..max_passes {
        // Tracking only applies while u stays in block 1.
        let track = tracker.as_deref().filter(|_| blocks[u] == 1 && !movable[u]);
        let pass_start = track.map(|_| blocks.clone());
        let mut stats = track.map(|t| t.stats(&blocks, cut_net_unchecked(aux, &blocks)));
        let mut pass_best: Option<(ConductanceResult, u64, usize, usize)> = None;
        let consider = |stats: &SplitStats, len: usize, pass_best: &mut Option<(ConductanceResult, u64, usize, usize)>| {
            if let Some(r) = track.and_then(|t| t.score(stats)) {
                let better = match pass_best {
                    None => true,
                    Some((b, c, size, _)) => (r.phi, stats.cut, stats.cluster_nodes) < (b.phi, *c, *size),
                };
                if better {
                    *pass_best = Some((r, stats.cut, stats.cluster_nodes, len));
                }
            }
        };
        if let Some(s) = &stats {
            consider(s, 0, &mut pass_best);
        }

        let mut state = GainState::new(aux, blocks);
        let mut buckets: [BTreeSet<(Reverse<i64>, AuxNode)>; 2] = Default::default();
        for v in 0..n {
            if movable[v] {
                buckets[state.blocks[v] as usize].insert((Reverse(state.gains[v]), v as AuxNode));
            }
        }

        let mut moves: Vec<AuxNode> = Vec::new();
        let mut updates: Vec<(AuxNode, i64, i64)> = Vec::new();
        let (mut running, mut best, mut best_len) = (0i64, 0i64, 0usize);
        loop {
            let mut pick: Option<(i64, AuxNode)> = None;
            for from in 0..2 {
                let to = 1 - from;
                if state.sizes[to] + 1 > bound || state.sizes[from] <= 1 {
                    continue;
                }
                if let Some(&(Reverse(g), v)) = buckets[from].first() {
                    if pick.is_none_or(|(bg, bv)| g > bg || (g == bg && v < bv)) {
                        pick = Some((g, v));
                    }
                }
            }
            let Some((gain, v)) = pick else { break };
            buckets[state.blocks[v as usize] as usize].remove(&(Reverse(gain), v));
            updates.clear();
            state.apply_move(v, |x, old, new| updates.push((x, old, new)));
            for &(x, old, new) in &updates {
                let b = state.blocks[x as usize] as usize;
                if buckets[b].remove(&(Reverse(old), x)) {
                    buckets[b].insert((Reverse(new), x));
                }
            }
            running += gain;
            moves.push(v);
            if running > best {
                best = running;
                best_len = moves.len();
            }
            if let (Some(t), Some(s)) = (track, stats.as_mut()) {
                t.moved(s, v, state.blocks[v as usize], gain);
                consider(s, moves.len(), &mut pass_best);
            }
        }

        if let (Some(t), Some(start), Some((r, cut, size, len))) = (tracker.as_deref_mut(), pass_start, pass_best) {
            if t.beats(&r, cut, size) {
                let mut snapshot = start;
                for &v in &moves[..len] {
                    snapshot[v as usize] ^= 1;
                }
                t.best = Some((r, cut, Partition::new(snapshot)));
            }
        }

        let mut blocks_out = state.blocks;
        for &v in moves[best_len..].iter().rev() {
            blocks_out[v as usize] ^= 1;
        }
        blocks = blocks_out;
        if best <= 0 {
            break;
        }
    }

    let refined = Partition::new(blocks);
    if cut_net_unchecked(aux, refined.blocks()) > initial_cut {
        diagnostics::record_fm_cut_increase();
        debug_assert!(false, "fm_refine increased the cut");
    }
    refined
}
