//! Phase two: order-3 higher-order motifs.
//!
//! The induced subhypergraph on three nodes is determined by which of the
//! three dyads and the one triad are hyperedges of `H`. The six connected
//! combinations are the motif patterns.

use std::collections::BTreeMap;

use rayon::prelude::*;
use rustc_hash::FxHashSet;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::hypergraph::{collect_marked, Hypergraph, NodeId};

#[allow(clippy::upper_case_acronyms)]
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum MotifPattern {
    /// Open wedge of two dyads.
    I,
    /// Dyadic triangle.
    II,
    /// Bare triad.
    III,
    /// Triad plus one dyad.
    IV,
    /// Triad plus two dyads.
    V,
    /// Triad plus all three dyads.
    VI,
}

impl MotifPattern {
    pub const ALL: [MotifPattern; 6] = [
        MotifPattern::I,
        MotifPattern::II,
        MotifPattern::III,
        MotifPattern::IV,
        MotifPattern::V,
        MotifPattern::VI,
    ];

    /// Pattern for a triad flag and dyad count; `None` when disconnected.
    pub fn from_signature(has_triadic: bool, dyad_count: u8) -> Option<Self> {
        match (has_triadic, dyad_count) {
            (false, 2) => Some(MotifPattern::I),
            (false, 3) => Some(MotifPattern::II),
            (true, 0) => Some(MotifPattern::III),
            (true, 1) => Some(MotifPattern::IV),
            (true, 2) => Some(MotifPattern::V),
            (true, 3) => Some(MotifPattern::VI),
            _ => None,
        }
    }

    pub fn has_triadic(self) -> bool {
        self >= MotifPattern::III
    }

    pub fn dyad_count(self) -> u8 {
        match self {
            MotifPattern::I => 2,
            MotifPattern::II => 3,
            MotifPattern::III => 0,
            MotifPattern::IV => 1,
            MotifPattern::V => 2,
            MotifPattern::VI => 3,
        }
    }

    /// Numeric id 1..=6.
    pub fn number(self) -> u8 {
        self as u8 + 1
    }

    pub fn from_number(n: u8) -> Option<Self> {
        Self::ALL.get((n as usize).wrapping_sub(1)).copied()
    }
}

impl std::str::FromStr for MotifPattern {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let by_roman = Self::ALL.iter().find(|p| format!("{p:?}").eq_ignore_ascii_case(s));
        by_roman
            .copied()
            .or_else(|| s.parse::<u8>().ok().and_then(Self::from_number))
            .ok_or_else(|| Error::InvalidConfig(format!("unknown motif pattern `{s}` (use 1..6)")))
    }
}

impl std::fmt::Display for MotifPattern {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{self:?}")
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct MotifOccurrence {
    /// Sorted, distinct.
    pub nodes: [NodeId; 3],
    pub pattern: MotifPattern,
}

impl MotifOccurrence {
    pub fn contains(&self, v: NodeId) -> bool {
        self.nodes.contains(&v)
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Scope {
    /// Search within `N[N[B]]`; finds every occurrence touching the ball.
    #[default]
    Exact,
    /// Search within `N[B]` only; can miss open wedges ending outside it.
    Paper,
}

impl std::str::FromStr for Scope {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "exact" => Ok(Scope::Exact),
            "paper" => Ok(Scope::Paper),
            other => Err(Error::InvalidConfig(format!("unknown enumeration scope `{other}`"))),
        }
    }
}

/// Constant-time presence tests for dyads and triads, plus dyadic adjacency.
pub struct MotifIndex<'h> {
    graph: &'h Hypergraph,
    dyads: FxHashSet<(u32, u32)>,
    triads: FxHashSet<(u32, u32, u32)>,
    dyad_adj: Vec<Vec<NodeId>>,
}

impl<'h> MotifIndex<'h> {
    pub fn new(graph: &'h Hypergraph) -> Self {
        let mut dyads = FxHashSet::default();
        let mut triads = FxHashSet::default();
        let mut dyad_adj = vec![Vec::new(); graph.node_count()];
        for e in graph.edges() {
            match *e.members() {
                [a, b] => {
                    dyads.insert((a.0, b.0));
                    dyad_adj[a.index()].push(b);
                    dyad_adj[b.index()].push(a);
                }
                [a, b, c] => {
                    triads.insert((a.0, b.0, c.0));
                }
                _ => {}
            }
        }
        for adj in &mut dyad_adj {
            adj.sort_unstable();
        }
        Self {
            graph,
            dyads,
            triads,
            dyad_adj,
        }
    }

    pub fn graph(&self) -> &'h Hypergraph {
        self.graph
    }

    #[inline]
    fn has_dyad(&self, a: NodeId, b: NodeId) -> bool {
        let (x, y) = if a < b { (a, b) } else { (b, a) };
        self.dyads.contains(&(x.0, y.0))
    }

    /// Classifies a sorted triple. Caller guarantees `a < b < c`.
    #[inline]
    fn classify_sorted(&self, a: NodeId, b: NodeId, c: NodeId) -> Option<MotifPattern> {
        let triad = self.triads.contains(&(a.0, b.0, c.0));
        let dyads = self.dyads.contains(&(a.0, b.0)) as u8
            + self.dyads.contains(&(a.0, c.0)) as u8
            + self.dyads.contains(&(b.0, c.0)) as u8;
        MotifPattern::from_signature(triad, dyads)
    }

    /// Pattern of the subhypergraph induced by `{a, b, c}`, or `None` if it is
    /// disconnected.
    pub fn classify_triple(&self, a: NodeId, b: NodeId, c: NodeId) -> Result<Option<MotifPattern>> {
        if a == b || a == c || b == c {
            return Err(Error::NonDistinctTriple(a, b, c));
        }
        for v in [a, b, c] {
            self.graph.check_node(v)?;
        }
        let [x, y, z] = sorted3(a, b, c);
        Ok(self.classify_sorted(x, y, z))
    }

    fn search_region(&self, ball: &[NodeId], scope: Scope) -> Result<Vec<bool>> {
        let g = self.graph;
        let first = g.closed_neighborhood(ball)?;
        let region = match scope {
            Scope::Paper => first,
            Scope::Exact => g.closed_neighborhood(&first)?,
        };
        let mut mask = vec![false; g.node_count()];
        for v in region {
            mask[v.index()] = true;
        }
        Ok(mask)
    }

    /// Every occurrence of `pattern` with at least one node in `ball`, sorted,
    /// each triple reported once.
    pub fn enumerate(&self, ball: &[NodeId], pattern: MotifPattern, scope: Scope) -> Result<Vec<MotifOccurrence>> {
        let g = self.graph;
        let region = self.search_region(ball, scope)?;
        let mut in_ball = vec![false; g.node_count()];
        for &v in ball {
            in_ball[v.index()] = true;
        }
        let in_ball = &in_ball;
        let region = &region;

        let mut found: Vec<MotifOccurrence> = if pattern.has_triadic() {
            // Triads touching the ball; the smallest ball member owns the triple.
            ball.par_iter()
                .flat_map_iter(|&v| {
                    g.incident_edges(v).iter().filter_map(move |&e| {
                        let m = g.edge(e).members();
                        if m.len() != 3 || !m.iter().all(|u| region[u.index()]) {
                            return None;
                        }
                        let owner = m.iter().copied().find(|u| in_ball[u.index()])?;
                        if owner != v {
                            return None;
                        }
                        (self.classify_sorted(m[0], m[1], m[2]) == Some(pattern)).then(|| {
                            MotifOccurrence {
                                nodes: [m[0], m[1], m[2]],
                                pattern,
                            }
                        })
                    })
                })
                .collect()
        } else {
            // Dyadic wedges x - y - z centered at y.
            let mut centers = vec![false; g.node_count()];
            for &v in ball {
                if region[v.index()] {
                    centers[v.index()] = true;
                }
                for &u in &self.dyad_adj[v.index()] {
                    if region[u.index()] {
                        centers[u.index()] = true;
                    }
                }
            }
            collect_marked(&centers)
                .into_par_iter()
                .flat_map_iter(|y| self.wedges_at(y, pattern, in_ball, region))
                .collect()
        };
        found.par_sort_unstable();
        debug_assert!(found.windows(2).all(|w| w[0].nodes != w[1].nodes));
        Ok(found)
    }

    fn wedges_at(&self, y: NodeId, pattern: MotifPattern, in_ball: &[bool], region: &[bool]) -> Vec<MotifOccurrence> {
        let nbrs: Vec<NodeId> = self.dyad_adj[y.index()]
            .iter()
            .copied()
            .filter(|u| region[u.index()])
            .collect();
        let mut out = Vec::new();
        let mut emit = |x: NodeId, z: NodeId| {
            let closed = self.has_dyad(x, z);
            // A triangle has three centers; only its smallest node reports it.
            if closed && (y > x || y > z) {
                return;
            }
            let [a, b, c] = sorted3(x, y, z);
            if self.classify_sorted(a, b, c) == Some(pattern) {
                out.push(MotifOccurrence {
                    nodes: [a, b, c],
                    pattern,
                });
            }
        };
        if in_ball[y.index()] {
            for (i, &x) in nbrs.iter().enumerate() {
                for &z in &nbrs[i + 1..] {
                    emit(x, z);
                }
            }
        } else {
            for &x in nbrs.iter().filter(|x| in_ball[x.index()]) {
                for &z in &nbrs {
                    if z == x || (in_ball[z.index()] && z < x) {
                        continue;
                    }
                    emit(x, z);
                }
            }
        }
        out
    }
}

#[inline]
pub(crate) fn sorted3(a: NodeId, b: NodeId, c: NodeId) -> [NodeId; 3] {
    let mut t = [a, b, c];
    t.sort_unstable();
    t
}

/// Convenience wrapper building a fresh [`MotifIndex`].
pub fn enumerate_motifs(h: &Hypergraph, ball: &[NodeId], pattern: MotifPattern, scope: Scope) -> Result<Vec<MotifOccurrence>> {
    MotifIndex::new(h).enumerate(ball, pattern, scope)
}

/// Motif degree `d_mu(v)` for every node in `nodes`.
pub fn motif_degrees(occurrences: &[MotifOccurrence], nodes: &[NodeId]) -> BTreeMap<NodeId, u64> {
    let mut out: BTreeMap<NodeId, u64> = nodes.iter().map(|&v| (v, 0)).collect();
    for occ in occurrences {
        for v in occ.nodes {
            if let Some(d) = out.get_mut(&v) {
                *d += 1;
            }
        }
    }
    out
}

/// Dense motif degrees over all `n` nodes.
pub fn motif_degree_vector(occurrences: &[MotifOccurrence], n: usize) -> Vec<u64> {
    let mut out = vec![0u64; n];
    for occ in occurrences {
        for v in occ.nodes {
            out[v.index()] += 1;
        }
    }
    out
}

/// `d_mu(S)`: sum of motif degrees over a node set.
pub fn motif_volume(degrees: &[u64], set: &[NodeId]) -> u64 {
    set.iter().map(|v| degrees[v.index()]).sum()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::oracle::{brute_motifs, OracleBudget};
    use proptest::prelude::*;

    fn hg(n: usize, edges: &[&[u32]]) -> Hypergraph {
        Hypergraph::from_edges(n, edges.iter().map(|e| e.to_vec())).unwrap()
    }

    fn ids(v: &[u32]) -> Vec<NodeId> {
        v.iter().copied().map(NodeId).collect()
    }

    fn triples(m: &[MotifOccurrence]) -> Vec<[u32; 3]> {
        m.iter().map(|o| o.nodes.map(|v| v.0)).collect()
    }

    #[test]
    fn signatures_cover_six_patterns() {
        for p in MotifPattern::ALL {
            assert_eq!(MotifPattern::from_signature(p.has_triadic(), p.dyad_count()), Some(p));
            assert_eq!(MotifPattern::from_number(p.number()), Some(p));
            assert_eq!(p.to_string().parse::<MotifPattern>().unwrap(), p);
        }
        assert_eq!(MotifPattern::from_signature(false, 0), None);
        assert_eq!(MotifPattern::from_signature(false, 1), None);
        assert_eq!("6".parse::<MotifPattern>().unwrap(), MotifPattern::VI);
        assert!("7".parse::<MotifPattern>().is_err());
        assert!("0".parse::<MotifPattern>().is_err());
    }

    #[test]
    fn classify_examples() {
        let (a, b, c) = (NodeId(0), NodeId(1), NodeId(2));
        let wedge = hg(3, &[&[0, 1], &[1, 2]]);
        assert_eq!(MotifIndex::new(&wedge).classify_triple(a, b, c).unwrap(), Some(MotifPattern::I));
        let triad = hg(3, &[&[0, 1, 2]]);
        assert_eq!(MotifIndex::new(&triad).classify_triple(c, a, b).unwrap(), Some(MotifPattern::III));
        let lone = hg(3, &[&[0, 1]]);
        assert_eq!(MotifIndex::new(&lone).classify_triple(a, b, c).unwrap(), None);
        assert!(matches!(
            MotifIndex::new(&lone).classify_triple(a, a, c),
            Err(Error::NonDistinctTriple(..))
        ));
        // hyperedges larger than three never sit inside a triple
        let big = hg(4, &[&[0, 1, 2, 3], &[0, 1]]);
        assert_eq!(MotifIndex::new(&big).classify_triple(a, b, c).unwrap(), None);
    }

    #[test]
    fn two_triads_sharing_a_node() {
        // a=0 b=1 v=2 c=3 d=4
        let h = hg(5, &[&[0, 1, 2], &[2, 3, 4]]);
        let m = enumerate_motifs(&h, &ids(&[0, 1, 2]), MotifPattern::III, Scope::Exact).unwrap();
        assert_eq!(triples(&m), vec![[0, 1, 2], [2, 3, 4]]);
        let deg = motif_degrees(&m, &ids(&[0, 2]));
        assert_eq!(deg[&NodeId(2)], 2);
        assert_eq!(deg[&NodeId(0)], 1);
        let all = motif_degree_vector(&m, 5);
        assert_eq!(all.iter().sum::<u64>(), 3 * m.len() as u64);
        assert!(motif_degrees(&[], &ids(&[0, 1])).values().all(|&d| d == 0));
    }

    #[test]
    fn wedge_needs_dyads() {
        let h = hg(5, &[&[0, 1, 2], &[2, 3, 4]]);
        assert!(enumerate_motifs(&h, &ids(&[0, 1, 2, 3, 4]), MotifPattern::I, Scope::Exact)
            .unwrap()
            .is_empty());
    }

    #[test]
    fn paper_scope_misses_far_wedge_ends() {
        // path 0-1-2 with ball {0}: N[B] = {0,1}, so the wedge needs N[N[B]]
        let h = hg(3, &[&[0, 1], &[1, 2]]);
        let exact = enumerate_motifs(&h, &ids(&[0]), MotifPattern::I, Scope::Exact).unwrap();
        let paper = enumerate_motifs(&h, &ids(&[0]), MotifPattern::I, Scope::Paper).unwrap();
        assert_eq!(triples(&exact), vec![[0, 1, 2]]);
        assert!(paper.is_empty());
    }

    #[test]
    fn full_pattern_vi() {
        let h = hg(3, &[&[0, 1, 2], &[0, 1], &[1, 2], &[0, 2]]);
        let m = enumerate_motifs(&h, &ids(&[1]), MotifPattern::VI, Scope::Exact).unwrap();
        assert_eq!(triples(&m), vec![[0, 1, 2]]);
        let tri = hg(3, &[&[0, 1], &[1, 2], &[0, 2]]);
        let m = enumerate_motifs(&tri, &ids(&[2]), MotifPattern::II, Scope::Exact).unwrap();
        assert_eq!(triples(&m), vec![[0, 1, 2]]);
    }

    fn arb_case() -> impl Strategy<Value = (Hypergraph, Vec<NodeId>)> {
        (3usize..12).prop_flat_map(|n| {
            let edges = prop::collection::vec(prop::collection::vec(0..n as u32, 2..4), 0..30);
            let ball = prop::collection::vec(0..n as u32, 1..4);
            (edges, ball).prop_map(move |(edges, ball)| {
                let h = Hypergraph::from_edges(n, edges).unwrap();
                let mut ball: Vec<NodeId> = ball.into_iter().map(NodeId).collect();
                ball.sort_unstable();
                ball.dedup();
                (h, ball)
            })
        })
    }

    proptest! {
        #[test]
        fn exact_scope_matches_brute_force((h, ball) in arb_case()) {
            for p in MotifPattern::ALL {
                let expected: Vec<_> = brute_motifs(&h, p, OracleBudget::default())
                    .unwrap()
                    .into_iter()
                    .filter(|o| o.nodes.iter().any(|v| ball.contains(v)))
                    .collect();
                prop_assert_eq!(enumerate_motifs(&h, &ball, p, Scope::Exact).unwrap(), expected);
            }
        }

        #[test]
        fn paper_scope_is_a_subset((h, ball) in arb_case()) {
            for p in MotifPattern::ALL {
                let exact = enumerate_motifs(&h, &ball, p, Scope::Exact).unwrap();
                let paper = enumerate_motifs(&h, &ball, p, Scope::Paper).unwrap();
                prop_assert!(paper.iter().all(|o| exact.contains(o)));
                let inside = |m: &[MotifOccurrence]| -> Vec<MotifOccurrence> {
                    m.iter().filter(|o| o.nodes.iter().all(|v| ball.contains(v))).copied().collect()
                };
                prop_assert_eq!(inside(&exact), inside(&paper));
            }
        }
    }
}
