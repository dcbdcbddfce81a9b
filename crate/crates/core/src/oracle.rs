//! Exhaustive reference implementations for toy-sized instances.
//!
//! Everything here is exponential and guarded by an [`OracleBudget`]. The
//! code deliberately avoids the fast paths in the rest of the crate so that
//! tests comparing the two are meaningful.

use num_rational::Ratio;

use crate::error::{Error, Result};
use crate::hypergraph::{EdgeId, Hypergraph, NodeId};
use crate::motif::{MotifOccurrence, MotifPattern};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct OracleBudget {
    pub max_nodes: usize,
    pub max_subsets: u64,
}

impl Default for OracleBudget {
    fn default() -> Self {
        Self {
            max_nodes: 12,
            max_subsets: 1 << 15,
        }
    }
}

impl OracleBudget {
    fn check_nodes(&self, n: usize) -> Result<()> {
        if n > self.max_nodes {
            return Err(Error::BudgetExceeded(format!(
                "{n} nodes exceed the oracle limit of {}",
                self.max_nodes
            )));
        }
        Ok(())
    }

    fn check_subsets(&self, free: usize) -> Result<()> {
        if free >= 64 || (1u64 << free) > self.max_subsets {
            return Err(Error::BudgetExceeded(format!(
                "2^{free} subsets exceed the oracle limit of {}",
                self.max_subsets
            )));
        }
        Ok(())
    }
}

/// Classifies every one of the C(n, 3) triples.
pub fn brute_motifs(h: &Hypergraph, pattern: MotifPattern, budget: OracleBudget) -> Result<Vec<MotifOccurrence>> {
    let n = h.node_count();
    budget.check_nodes(n)?;
    let present = |m: &[u32]| h.find_edge(&m.iter().map(|&v| NodeId(v)).collect::<Vec<_>>()).is_some();
    let mut out = Vec::new();
    for a in 0..n as u32 {
        for b in a + 1..n as u32 {
            for c in b + 1..n as u32 {
                let dyads = [[a, b], [a, c], [b, c]].iter().filter(|d| present(&d[..])).count();
                let triad = present(&[a, b, c]);
                let connected = triad || dyads >= 2;
                if !connected {
                    continue;
                }
                let got = MotifPattern::ALL
                    .into_iter()
                    .find(|p| p.has_triadic() == triad && p.dyad_count() as usize == dyads);
                if got == Some(pattern) {
                    out.push(MotifOccurrence {
                        nodes: [NodeId(a), NodeId(b), NodeId(c)],
                        pattern,
                    });
                }
            }
        }
    }
    Ok(out)
}

/// Core numbers straight from the definition: `c(v)` is the largest minimum
/// neighbor count over all node sets containing `v`, measured in their
/// strongly induced subhypergraphs.
pub fn brute_core_numbers(h: &Hypergraph, budget: OracleBudget) -> Result<Vec<u32>> {
    let n = h.node_count();
    budget.check_nodes(n)?;
    budget.check_subsets(n)?;
    let masks: Vec<u32> = h
        .edges()
        .iter()
        .map(|e| e.members().iter().fold(0u32, |m, v| m | 1 << v.0))
        .collect();
    let mut core = vec![0u32; n];
    for set in 1u32..(1u32 << n) {
        let mut nbr = vec![0u32; n];
        for &em in &masks {
            if em & set == em {
                for v in 0..n {
                    if em >> v & 1 == 1 {
                        nbr[v] |= em & !(1 << v);
                    }
                }
            }
        }
        let min_deg = (0..n)
            .filter(|v| set >> v & 1 == 1)
            .map(|v| nbr[v].count_ones())
            .min()
            .unwrap_or(0);
        for v in 0..n {
            if set >> v & 1 == 1 {
                core[v] = core[v].max(min_deg);
            }
        }
    }
    Ok(core)
}

/// Direct motif conductance of `cluster` (given as a node bitmask) against
/// the global occurrence list. `None` when undefined.
fn direct_phi(occurrences: &[MotifOccurrence], n: usize, cluster: u32) -> Option<(Ratio<u64>, u64)> {
    let full = if n == 32 { u32::MAX } else { (1u32 << n) - 1 };
    if cluster == 0 || cluster == full {
        return None;
    }
    let (mut cut, mut inside, mut outside) = (0u64, 0u64, 0u64);
    for occ in occurrences {
        let k = occ.nodes.iter().filter(|v| cluster >> v.0 & 1 == 1).count() as u64;
        inside += k;
        outside += 3 - k;
        if k == 1 || k == 2 {
            cut += 1;
        }
    }
    let denom = inside.min(outside);
    match (denom, cut) {
        (0, 0) if inside + outside > 0 => Some((Ratio::from_integer(0), cut)),
        (0, _) => None,
        (d, c) => Some((Ratio::new(c, d), c)),
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BruteCluster {
    pub nodes: Vec<NodeId>,
    pub phi: Ratio<u64>,
    pub motif_cut: u64,
}

/// Minimum direct motif conductance over every proper node set that contains
/// the seed hyperedge, optionally restricted to subsets of `within`. Ties go
/// to the smaller cut, then the smaller set, then the lexicographically
/// smaller bitmask. Returns `None` when no candidate has a defined value.
pub fn brute_best_cluster(
    h: &Hypergraph,
    seed: EdgeId,
    pattern: MotifPattern,
    within: Option<&[NodeId]>,
    budget: OracleBudget,
) -> Result<Option<BruteCluster>> {
    let n = h.node_count();
    budget.check_nodes(n)?;
    if seed.index() >= h.edge_count() {
        return Err(Error::SeedNotFound(seed.to_string()));
    }
    let occurrences = brute_motifs(h, pattern, budget)?;
    let seed_mask = h.edge(seed).members().iter().fold(0u32, |m, v| m | 1 << v.0);
    let pool: u32 = match within {
        Some(set) => set.iter().fold(0u32, |m, v| m | 1 << v.0) | seed_mask,
        None => (1u32 << n) - 1,
    };
    let free: Vec<u32> = (0..n as u32).filter(|v| pool >> v & 1 == 1 && seed_mask >> v & 1 == 0).collect();
    budget.check_subsets(free.len())?;

    let mut best: Option<(Ratio<u64>, u64, u32, u32)> = None;
    for pick in 0u32..(1u32 << free.len()) {
        let mut cluster = seed_mask;
        for (i, &v) in free.iter().enumerate() {
            if pick >> i & 1 == 1 {
                cluster |= 1 << v;
            }
        }
        let Some((phi, cut)) = direct_phi(&occurrences, n, cluster) else {
            continue;
        };
        let key = (phi, cut, cluster.count_ones(), cluster);
        if best.is_none_or(|b| key < b) {
            best = Some(key);
        }
    }
    Ok(best.map(|(phi, cut, _, mask)| BruteCluster {
        nodes: (0..n as u32).filter(|v| mask >> v & 1 == 1).map(NodeId).collect(),
        phi,
        motif_cut: cut,
    }))
}

/// Motif cut by definition: occurrences with nodes on both sides.
pub fn brute_motif_cut(occurrences: &[MotifOccurrence], cluster: &[NodeId]) -> u64 {
    occurrences
        .iter()
        .filter(|o| {
            let k = o.nodes.iter().filter(|v| cluster.contains(v)).count();
            k > 0 && k < 3
        })
        .count() as u64
}

#[cfg(test)]
mod tests {
    use super::*;

    fn hg(n: usize, edges: &[&[u32]]) -> Hypergraph {
        Hypergraph::from_edges(n, edges.iter().map(|e| e.to_vec())).unwrap()
    }

    #[test]
    fn dyadic_triangle_is_one_pattern_ii() {
        let h = hg(3, &[&[0, 1], &[1, 2], &[0, 2]]);
        assert_eq!(brute_motifs(&h, MotifPattern::II, OracleBudget::default()).unwrap().len(), 1);
    }

    #[test]
    fn triad_with_all_dyads_is_pattern_vi() {
        let h = hg(3, &[&[0, 1, 2], &[0, 1], &[1, 2], &[0, 2]]);
        let m = brute_motifs(&h, MotifPattern::VI, OracleBudget::default()).unwrap();
        assert_eq!(m.len(), 1);
        assert!(brute_motifs(&h, MotifPattern::II, OracleBudget::default()).unwrap().is_empty());
    }

    #[test]
    fn best_cluster_on_two_triads() {
        // a=0 b=1 v=2 c=3 d=4, seed {a,b,v}
        let h = hg(5, &[&[0, 1, 2], &[2, 3, 4]]);
        let best = brute_best_cluster(&h, EdgeId(0), MotifPattern::III, None, OracleBudget::default())
            .unwrap()
            .unwrap();
        assert_eq!(best.nodes, vec![NodeId(0), NodeId(1), NodeId(2)]);
        assert_eq!(best.phi, Ratio::new(1, 2));
    }

    #[test]
    fn disconnected_clusters_are_candidates() {
        // two separate triads; the seed triad alone cuts nothing
        let h = hg(6, &[&[0, 1, 2], &[3, 4, 5]]);
        let best = brute_best_cluster(&h, EdgeId(0), MotifPattern::III, None, OracleBudget::default())
            .unwrap()
            .unwrap();
        assert_eq!(best.phi, Ratio::from_integer(0));
        assert_eq!(best.nodes.len(), 3);
    }

    #[test]
    fn budgets_refuse_large_inputs() {
        let h = Hypergraph::from_edges(13, vec![vec![0u32, 1]]).unwrap();
        assert!(matches!(
            brute_motifs(&h, MotifPattern::I, OracleBudget::default()),
            Err(Error::BudgetExceeded(_))
        ));
        let tight = OracleBudget {
            max_nodes: 12,
            max_subsets: 8,
        };
        let h = Hypergraph::from_edges(5, vec![vec![0u32, 1]]).unwrap();
        assert!(brute_core_numbers(&h, tight).is_err());
    }
}
