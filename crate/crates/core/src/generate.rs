//! Seeded synthetic hypergraphs for tests and benchmarks.

use std::collections::HashSet;

use rand::seq::index::sample;
use rand::Rng;

use crate::hypergraph::{Hypergraph, HypergraphBuilder, NodeId};
use crate::io::{Dataset, Labels};

/// Every pair becomes a dyadic edge with probability `p_dyad` and every
/// triple a triadic edge with probability `p_triad`.
pub fn random_hypergraph<R: Rng + ?Sized>(n: usize, p_dyad: f64, p_triad: f64, rng: &mut R) -> Hypergraph {
    let mut b = HypergraphBuilder::new(n);
    let n = n as u32;
    for a in 0..n {
        for c in a + 1..n {
            if rng.random_bool(p_dyad) {
                b.add_edge([NodeId(a), NodeId(c)], 1).expect("in range");
            }
        }
    }
    for a in 0..n {
        for c in a + 1..n {
            for d in c + 1..n {
                if rng.random_bool(p_triad) {
                    b.add_edge([NodeId(a), NodeId(c), NodeId(d)], 1).expect("in range");
                }
            }
        }
    }
    b.build()
}

/// Parameters for [`planted_groups`].
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PlantedConfig {
    pub nodes: usize,
    pub groups: usize,
    pub edges: usize,
    /// Probability that a hyperedge ignores group boundaries.
    pub mixing: f64,
    /// Hyperedge sizes are drawn from `2..=max_size`, biased toward small.
    pub max_size: usize,
}

impl PlantedConfig {
    /// Roughly the shape of a school contact hypergraph: 242 nodes in 11
    /// groups, 12704 interactions of size 2 to 5.
    pub fn contact_like() -> Self {
        Self {
            nodes: 242,
            groups: 11,
            edges: 12704,
            mixing: 0.15,
            max_size: 5,
        }
    }
}

/// Nodes split into equal consecutive groups; each hyperedge draws its
/// members from one group, or from everywhere with probability `mixing`.
/// Draws repeat until `edges` distinct hyperedges exist or the attempt
/// budget runs out.
pub fn planted_groups<R: Rng + ?Sized>(config: PlantedConfig, rng: &mut R) -> Dataset {
    let n = config.nodes;
    let groups = config.groups.clamp(1, n);
    let group_len = n / groups;
    let mut b = HypergraphBuilder::new(n);
    let mut seen: HashSet<Vec<NodeId>> = HashSet::new();
    for _ in 0..config.edges.saturating_mul(20) {
        if seen.len() >= config.edges {
            break;
        }
        let mut size = 2;
        while size < config.max_size && rng.random_bool(0.35) {
            size += 1;
        }
        let (lo, len) = if rng.random_bool(config.mixing) {
            (0, n)
        } else {
            let g = rng.random_range(0..groups);
            let lo = g * group_len;
            let hi = if g + 1 == groups { n } else { lo + group_len };
            (lo, hi - lo)
        };
        let size = size.min(len);
        if size < 2 {
            continue;
        }
        let mut members: Vec<NodeId> = sample(rng, len, size).into_iter().map(|i| NodeId((lo + i) as u32)).collect();
        members.sort_unstable();
        if seen.insert(members.clone()) {
            b.add_edge(members, 1).expect("in range");
        }
    }
    let stats = b.stats();
    Dataset {
        graph: b.build(),
        labels: Labels::identity(n),
        stats,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn random_is_seeded() {
        let a = random_hypergraph(10, 0.3, 0.1, &mut ChaCha8Rng::seed_from_u64(1));
        let b = random_hypergraph(10, 0.3, 0.1, &mut ChaCha8Rng::seed_from_u64(1));
        assert_eq!(a.edges(), b.edges());
        assert!(a.edges().iter().all(|e| e.len() == 2 || e.len() == 3));
    }

    #[test]
    fn planted_shape() {
        let d = planted_groups(PlantedConfig::contact_like(), &mut ChaCha8Rng::seed_from_u64(2));
        assert_eq!(d.graph.node_count(), 242);
        let m = d.graph.edge_count();
        assert!(m == 12704, "{m}");
        assert!(d.graph.edges().iter().all(|e| (2..=5).contains(&e.len())));
    }
}
