//! Phase one: node sets ("balls") around the seed hyperedge.
//!
//! Two selectors are provided. The core selector peels the hypergraph into
//! neighborhood cores and descends through core levels until the seed's
//! component is large enough. The BFS selector grows layers outward from the
//! seed and returns up to `alpha` consecutive cumulative balls.

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::hypergraph::{EdgeId, Hypergraph, NodeId};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum BallMethod {
    Core,
    Bfs,
}

impl std::str::FromStr for BallMethod {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "core" => Ok(BallMethod::Core),
            "bfs" => Ok(BallMethod::Bfs),
            other => Err(Error::InvalidConfig(format!("unknown ball method `{other}`"))),
        }
    }
}

impl std::fmt::Display for BallMethod {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            BallMethod::Core => "core",
            BallMethod::Bfs => "bfs",
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase", tag = "kind")]
pub enum BallDetail {
    /// Core level whose seed component was returned.
    Core { k: u32 },
    /// Deepest BFS layer included (layer 0 is the seed).
    Bfs { depth: u32 },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Ball {
    /// Sorted node ids.
    pub nodes: Vec<NodeId>,
    pub method: BallMethod,
    pub detail: BallDetail,
}

impl Ball {
    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn contains(&self, v: NodeId) -> bool {
        self.nodes.binary_search(&v).is_ok()
    }

    /// Dense membership mask over `n` nodes.
    pub fn mask(&self, n: usize) -> Vec<bool> {
        let mut mask = vec![false; n];
        for &v in &self.nodes {
            mask[v.index()] = true;
        }
        mask
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CoreDecomposition {
    pub core_number: Vec<u32>,
    pub max_core: u32,
}

impl CoreDecomposition {
    pub fn core(&self, v: NodeId) -> u32 {
        self.core_number[v.index()]
    }

    /// Nodes of the nbr-k-core, sorted.
    pub fn level(&self, k: u32) -> Vec<NodeId> {
        self.core_number
            .iter()
            .enumerate()
            .filter(|(_, &c)| c >= k)
            .map(|(i, _)| NodeId(i as u32))
            .collect()
    }
}

/// Neighborhood-based core decomposition.
///
/// For `k = 1, 2, ...` every node with fewer than `k` neighbors in the
/// strongly induced subhypergraph of the surviving nodes is deleted, together
/// with every hyperedge containing it, until no such node remains. A node
/// deleted during round `k` has core number `k - 1`.
pub fn nbr_core_decomposition(h: &Hypergraph) -> CoreDecomposition {
    let n = h.node_count();
    // co[v][u] = number of live hyperedges containing both u and v
    let mut co: Vec<rustc_hash::FxHashMap<u32, u32>> = vec![Default::default(); n];
    for edge in h.edges() {
        let m = edge.members();
        for (i, &a) in m.iter().enumerate() {
            for &b in &m[i + 1..] {
                *co[a.index()].entry(b.0).or_insert(0) += 1;
                *co[b.index()].entry(a.0).or_insert(0) += 1;
            }
        }
    }
    let mut alive = vec![true; n];
    let mut edge_alive = vec![true; h.edge_count()];
    let mut core = vec![0u32; n];
    let mut remaining = n;
    let mut k = 1u32;
    let mut max_core = 0;

    while remaining > 0 {
        let mut pending: BTreeSet<u32> = (0..n as u32)
            .filter(|&v| alive[v as usize] && (co[v as usize].len() as u32) < k)
            .collect();
        while let Some(v) = pending.pop_first() {
            let vi = v as usize;
            alive[vi] = false;
            remaining -= 1;
            core[vi] = k - 1;
            for &e in h.incident_edges(NodeId(v)) {
                if !std::mem::replace(&mut edge_alive[e.index()], false) {
                    continue;
                }
                let m = h.edge(e).members();
                for (i, &a) in m.iter().enumerate() {
                    for &b in &m[i + 1..] {
                        for (x, y) in [(a, b), (b, a)] {
                            let map = &mut co[x.index()];
                            let c = map.get_mut(&y.0).expect("pair count present");
                            *c -= 1;
                            if *c == 0 {
                                map.remove(&y.0);
                                if alive[x.index()] && (map.len() as u32) < k {
                                    pending.insert(x.0);
                                }
                            }
                        }
                    }
                }
            }
        }
        if remaining > 0 {
            max_core = k;
        }
        k += 1;
    }
    CoreDecomposition {
        core_number: core,
        max_core,
    }
}

fn seed_members(h: &Hypergraph, seed: EdgeId) -> Result<&[NodeId]> {
    if seed.index() >= h.edge_count() {
        return Err(Error::SeedNotFound(seed.to_string()));
    }
    Ok(h.edge(seed).members())
}

struct UnionFind {
    parent: Vec<u32>,
    size: Vec<u32>,
}

impl UnionFind {
    fn new(n: usize) -> Self {
        Self {
            parent: (0..n as u32).collect(),
            size: vec![1; n],
        }
    }

    fn find(&mut self, mut x: u32) -> u32 {
        while self.parent[x as usize] != x {
            let p = self.parent[x as usize];
            self.parent[x as usize] = self.parent[p as usize];
            x = p;
        }
        x
    }

    fn union(&mut self, a: u32, b: u32) {
        let (mut a, mut b) = (self.find(a), self.find(b));
        if a == b {
            return;
        }
        if self.size[a as usize] < self.size[b as usize] {
            std::mem::swap(&mut a, &mut b);
        }
        self.parent[b as usize] = a;
        self.size[a as usize] += self.size[b as usize];
    }
}

/// Core-based ball: the seed's component inside the nbr-k-core, for the
/// largest `k <= min core(seed)` whose component has at least `min_size`
/// nodes, falling back to `k = 1`.
pub fn core_ball(
    h: &Hypergraph,
    cores: &CoreDecomposition,
    seed: EdgeId,
    min_size: usize,
) -> Result<Ball> {
    let seed_nodes = seed_members(h, seed)?;
    if min_size < seed_nodes.len() {
        return Err(Error::InvalidConfig(format!(
            "minimum ball size {min_size} is smaller than the seed ({} nodes)",
            seed_nodes.len()
        )));
    }
    let k_star = seed_nodes.iter().map(|&v| cores.core(v)).min().unwrap_or(0);
    debug_assert!(k_star >= 1, "seed nodes always have a neighbor");

    // Descend through core levels, growing components with union-find.
    // A hyperedge belongs to level k when its weakest member has core >= k.
    let mut edges_by_level: Vec<Vec<EdgeId>> = vec![Vec::new(); k_star as usize + 1];
    for e in h.edge_ids() {
        let level = h.edge(e).members().iter().map(|&v| cores.core(v)).min().unwrap_or(0);
        edges_by_level[level.min(k_star) as usize].push(e);
    }
    let mut uf = UnionFind::new(h.node_count());
    let root_of_seed = seed_nodes[0].0;
    let mut chosen = 1;
    for k in (1..=k_star).rev() {
        for &e in &edges_by_level[k as usize] {
            let m = h.edge(e).members();
            for w in m.windows(2) {
                uf.union(w[0].0, w[1].0);
            }
        }
        let root = uf.find(root_of_seed);
        if uf.size[root as usize] as usize >= min_size {
            chosen = k;
            break;
        }
    }
    let root = uf.find(root_of_seed);
    let nodes: Vec<NodeId> = h
        .nodes()
        .filter(|&v| cores.core(v) >= chosen && uf.find(v.0) == root)
        .collect();
    Ok(Ball {
        nodes,
        method: BallMethod::Core,
        detail: BallDetail::Core { k: chosen },
    })
}

/// BFS layers from the seed hyperedge. Layer 0 holds the seed's nodes; each
/// later layer holds the unvisited members of hyperedges incident to the
/// previous one. Layers are sorted.
pub fn bfs_layers(h: &Hypergraph, seed: EdgeId) -> Result<Vec<Vec<NodeId>>> {
    let seed_nodes = seed_members(h, seed)?;
    let mut visited = vec![false; h.node_count()];
    let mut edge_done = vec![false; h.edge_count()];
    for &v in seed_nodes {
        visited[v.index()] = true;
    }
    let mut layers = vec![seed_nodes.to_vec()];
    loop {
        let mut next = Vec::new();
        for &v in layers.last().expect("at least the seed layer") {
            for &e in h.incident_edges(v) {
                if std::mem::replace(&mut edge_done[e.index()], true) {
                    continue;
                }
                for &u in h.edge(e).members() {
                    if !visited[u.index()] {
                        visited[u.index()] = true;
                        next.push(u);
                    }
                }
            }
        }
        if next.is_empty() {
            break;
        }
        next.sort_unstable();
        layers.push(next);
    }
    Ok(layers)
}

/// Up to `alpha` cumulative BFS balls, starting at the first depth whose ball
/// has more than `min_size` nodes. If the seed's component never gets that
/// large, the whole component is the only ball.
pub fn bfs_balls(h: &Hypergraph, seed: EdgeId, alpha: usize, min_size: usize) -> Result<Vec<Ball>> {
    if alpha == 0 {
        return Err(Error::InvalidConfig("alpha must be at least 1".into()));
    }
    let layers = bfs_layers(h, seed)?;
    let mut cumulative = 0;
    let mut first = layers.len() - 1;
    for (depth, layer) in layers.iter().enumerate() {
        cumulative += layer.len();
        if cumulative > min_size {
            first = depth;
            break;
        }
    }
    let last = (first + alpha - 1).min(layers.len() - 1);
    let mut nodes: Vec<NodeId> = layers[..first].iter().flatten().copied().collect();
    let mut balls = Vec::new();
    for (depth, layer) in layers.iter().enumerate().take(last + 1).skip(first) {
        nodes.extend_from_slice(layer);
        let mut sorted = nodes.clone();
        sorted.sort_unstable();
        balls.push(Ball {
            nodes: sorted,
            method: BallMethod::Bfs,
            detail: BallDetail::Bfs { depth: depth as u32 },
        });
    }
    Ok(balls)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::oracle::{brute_core_numbers, OracleBudget};
    use proptest::prelude::*;

    fn hg(n: usize, edges: &[&[u32]]) -> Hypergraph {
        Hypergraph::from_edges(n, edges.iter().map(|e| e.to_vec())).unwrap()
    }

    fn ids(v: &[u32]) -> Vec<NodeId> {
        v.iter().copied().map(NodeId).collect()
    }

    #[test]
    fn triad_is_a_two_core() {
        let d = nbr_core_decomposition(&hg(3, &[&[0, 1, 2]]));
        assert_eq!(d.core_number, vec![2, 2, 2]);
        assert_eq!(d.max_core, 2);
    }

    #[test]
    fn path_is_a_one_core() {
        let d = nbr_core_decomposition(&hg(3, &[&[0, 1], &[1, 2]]));
        assert_eq!(d.core_number, vec![1, 1, 1]);
    }

    #[test]
    fn triangle_with_pendant() {
        let h = hg(4, &[&[0, 1], &[1, 2], &[0, 2], &[2, 3]]);
        let d = nbr_core_decomposition(&h);
        assert_eq!(d.core_number, vec![2, 2, 2, 1]);
        assert_eq!(d.core_number, brute_core_numbers(&h, OracleBudget::default()).unwrap());
    }

    #[test]
    fn isolated_nodes_have_core_zero() {
        let d = nbr_core_decomposition(&hg(4, &[&[0, 1]]));
        assert_eq!(d.core_number, vec![1, 1, 0, 0]);
    }

    #[test]
    fn core_ball_descends_to_seed_level() {
        let h = hg(4, &[&[0, 1], &[1, 2], &[0, 2], &[2, 3]]);
        let d = nbr_core_decomposition(&h);
        let seed = h.find_edge(&ids(&[2, 3])).unwrap();
        let ball = core_ball(&h, &d, seed, 2).unwrap();
        assert_eq!(ball.nodes, ids(&[0, 1, 2, 3]));
        assert_eq!(ball.detail, BallDetail::Core { k: 1 });

        // the triangle seed sits in the 2-core, which is already large enough
        let seed = h.find_edge(&ids(&[0, 1])).unwrap();
        let ball = core_ball(&h, &d, seed, 3).unwrap();
        assert_eq!(ball.nodes, ids(&[0, 1, 2]));
        assert_eq!(ball.detail, BallDetail::Core { k: 2 });
        assert!(core_ball(&h, &d, seed, 1).is_err());
        assert!(matches!(core_ball(&h, &d, EdgeId(99), 3), Err(Error::SeedNotFound(_))));
    }

    #[test]
    fn core_ball_stays_in_component() {
        let h = hg(7, &[&[0, 1, 2], &[2, 3], &[4, 5, 6]]);
        let d = nbr_core_decomposition(&h);
        let ball = core_ball(&h, &d, EdgeId(0), 100).unwrap();
        assert_eq!(ball.nodes, ids(&[0, 1, 2, 3]));
    }

    #[test]
    fn layers_on_small_cases() {
        let h = hg(4, &[&[0, 1], &[1, 2], &[2, 3]]);
        assert_eq!(
            bfs_layers(&h, EdgeId(0)).unwrap(),
            vec![ids(&[0, 1]), ids(&[2]), ids(&[3])]
        );
        let h = hg(4, &[&[0, 1, 2, 3], &[0, 1]]);
        let seed = h.find_edge(&ids(&[0, 1])).unwrap();
        assert_eq!(bfs_layers(&h, seed).unwrap(), vec![ids(&[0, 1]), ids(&[2, 3])]);
        let h = hg(3, &[&[0, 1, 2]]);
        assert_eq!(bfs_layers(&h, EdgeId(0)).unwrap().len(), 1);
    }

    fn path(n: u32) -> Hypergraph {
        let edges: Vec<Vec<u32>> = (0..n - 1).map(|i| vec![i, i + 1]).collect();
        Hypergraph::from_edges(n as usize, edges).unwrap()
    }

    #[test]
    fn small_component_is_the_only_ball() {
        let h = path(50);
        let balls = bfs_balls(&h, EdgeId(0), 3, 100).unwrap();
        assert_eq!(balls.len(), 1);
        assert_eq!(balls[0].len(), 50);
    }

    #[test]
    fn alpha_balls_grow() {
        let h = path(30);
        let balls = bfs_balls(&h, EdgeId(0), 3, 5).unwrap();
        let sizes: Vec<usize> = balls.iter().map(Ball::len).collect();
        assert_eq!(sizes, vec![6, 7, 8]);
        assert_eq!(balls[0].detail, BallDetail::Bfs { depth: 4 });
    }

    #[test]
    fn balls_truncate_when_bfs_runs_out() {
        // seed {0,1}; layers {0,1},{2},{3}: first ball needs > 2 nodes
        let h = path(4);
        let balls = bfs_balls(&h, EdgeId(0), 3, 2).unwrap();
        let sizes: Vec<usize> = balls.iter().map(Ball::len).collect();
        assert_eq!(sizes, vec![3, 4]);
        assert!(bfs_balls(&h, EdgeId(0), 0, 2).is_err());
    }

    fn arb_hypergraph() -> impl Strategy<Value = Hypergraph> {
        (3usize..12).prop_flat_map(|n| {
            prop::collection::vec(prop::collection::vec(0..n as u32, 2..4), 1..18)
                .prop_map(move |edges| Hypergraph::from_edges(n, edges).unwrap())
                .prop_filter("needs an edge", |h| h.edge_count() > 0)
        })
    }

    proptest! {
        #[test]
        fn peeling_matches_brute_force(h in arb_hypergraph()) {
            let d = nbr_core_decomposition(&h);
            prop_assert_eq!(&d.core_number, &brute_core_numbers(&h, OracleBudget::default()).unwrap());
            prop_assert!(d.max_core as usize <= h.node_count());
            for k in 0..=d.max_core {
                let inner = d.level(k + 1);
                let outer = d.level(k);
                prop_assert!(inner.iter().all(|v| outer.contains(v)));
            }
        }

        #[test]
        fn layers_partition_the_component(h in arb_hypergraph(), pick in any::<prop::sample::Index>()) {
            let seed = EdgeId(pick.index(h.edge_count()) as u32);
            let layers = bfs_layers(&h, seed).unwrap();
            let mut all: Vec<NodeId> = layers.iter().flatten().copied().collect();
            let total = all.len();
            all.sort_unstable();
            all.dedup();
            prop_assert_eq!(total, all.len());
            prop_assert_eq!(all, h.connected_component(h.edge(seed).members()).unwrap());
        }

        #[test]
        fn balls_contain_seed_inside_component(
            h in arb_hypergraph(),
            pick in any::<prop::sample::Index>(),
            min_size in 2usize..8,
        ) {
            let seed = EdgeId(pick.index(h.edge_count()) as u32);
            let comp = h.connected_component(h.edge(seed).members()).unwrap();
            let cores = nbr_core_decomposition(&h);
            let mut balls = bfs_balls(&h, seed, 3, min_size).unwrap();
            let sizes: Vec<usize> = balls.iter().map(Ball::len).collect();
            prop_assert!(sizes.windows(2).all(|w| w[0] < w[1]));
            if min_size >= h.edge(seed).len() {
                balls.push(core_ball(&h, &cores, seed, min_size).unwrap());
            }
            for ball in &balls {
                prop_assert!(h.edge(seed).members().iter().all(|&v| ball.contains(v)));
                prop_assert!(ball.nodes.iter().all(|v| comp.contains(v)));
            }
        }
    }
}
