//! Phase four: constrained 2-way partitioning of the auxiliary hypergraph.

pub mod fm;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::auxiliary::{AuxHypergraph, AuxNode};
use crate::conductance::{ConductanceResult, Evaluator};
use crate::error::{Error, Result};
use crate::hypergraph::NodeId;

pub use fm::{fm_refine, node_gains};

/// Block assignment of every aux node. Block 0 is the cluster side.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Partition {
    blocks: Vec<u8>,
}

impl Partition {
    pub fn new(blocks: Vec<u8>) -> Self {
        debug_assert!(blocks.iter().all(|&b| b < 2));
        Self { blocks }
    }

    pub fn blocks(&self) -> &[u8] {
        &self.blocks
    }

    pub fn block(&self, v: AuxNode) -> u8 {
        self.blocks[v as usize]
    }

    pub fn len(&self) -> usize {
        self.blocks.len()
    }

    pub fn is_empty(&self) -> bool {
        self.blocks.is_empty()
    }

    pub fn size(&self, block: u8) -> usize {
        self.blocks.iter().filter(|&&b| b == block).count()
    }

    /// Original nodes in block 0, sorted.
    pub fn cluster(&self, aux: &AuxHypergraph) -> Vec<NodeId> {
        (0..aux.ball_len() as AuxNode)
            .filter(|&v| self.block(v) == 0)
            .filter_map(|v| aux.original(v))
            .collect()
    }

    pub fn flipped(&self, v: AuxNode) -> Partition {
        let mut blocks = self.blocks.clone();
        blocks[v as usize] ^= 1;
        Partition { blocks }
    }
}

/// Block size bound `ceil((1 + epsilon) * n / 2)`, never below `min_bound`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ImbalanceConstraint {
    pub epsilon: f64,
    pub min_bound: usize,
}

impl ImbalanceConstraint {
    pub fn new(epsilon: f64) -> Self {
        Self { epsilon, min_bound: 1 }
    }

    pub fn max_block(&self, n: usize) -> usize {
        let raw = ((1.0 + self.epsilon) * n as f64 / 2.0 - 1e-9).ceil();
        (raw.max(0.0) as usize).max(self.min_bound)
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SeedMode {
    /// Seed nodes move freely during refinement and are put back afterwards.
    #[default]
    PostHoc,
    /// Seed nodes are pinned to block 0 throughout.
    Fixed,
}

impl std::str::FromStr for SeedMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "post-hoc" | "posthoc" => Ok(SeedMode::PostHoc),
            "fixed" => Ok(SeedMode::Fixed),
            other => Err(Error::InvalidConfig(format!("unknown seed mode `{other}`"))),
        }
    }
}

impl std::fmt::Display for SeedMode {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            SeedMode::PostHoc => "post-hoc",
            SeedMode::Fixed => "fixed",
        })
    }
}

pub(crate) fn cut_net_unchecked(aux: &AuxHypergraph, blocks: &[u8]) -> u64 {
    aux.edges()
        .filter(|(pins, _)| {
            let first = blocks[pins[0] as usize];
            pins[1..].iter().any(|&p| blocks[p as usize] != first)
        })
        .map(|(_, w)| w)
        .sum()
}

/// Total weight of hyperedges with pins in both blocks.
pub fn cut_net(aux: &AuxHypergraph, p: &Partition) -> Result<u64> {
    if p.len() != aux.node_count() {
        return Err(Error::InvalidConfig(format!(
            "partition covers {} nodes, aux hypergraph has {}",
            p.len(),
            aux.node_count()
        )));
    }
    for b in 0..2 {
        if p.size(b) == 0 {
            return Err(Error::EmptyBlock(b));
        }
    }
    Ok(cut_net_unchecked(aux, p.blocks()))
}

/// Puts `u` in block 1, the seed in block 0 and every other node on a random
/// side, resampling until both blocks respect the size bound.
pub fn random_feasible_partition<R: Rng + ?Sized>(
    aux: &AuxHypergraph,
    constraint: &ImbalanceConstraint,
    rng: &mut R,
) -> Result<Partition> {
    let n = aux.node_count();
    let bound = constraint.max_block(n);
    let seed = aux.seed();
    if seed.len() > bound || n - seed.len() == 0 {
        return Err(Error::InfeasibleConstraint {
            fixed: seed.len(),
            bound,
        });
    }
    let u = aux.complement_node();
    let mut fixed = vec![false; n];
    fixed[u as usize] = true;
    for &s in seed {
        fixed[s as usize] = true;
    }
    let free: Vec<AuxNode> = (0..n as AuxNode).filter(|&v| !fixed[v as usize]).collect();
    let mut blocks = vec![0u8; n];
    blocks[u as usize] = 1;

    for _ in 0..64 {
        let mut sizes = [seed.len(), 1];
        for &v in &free {
            let b = rng.random_bool(0.5) as u8;
            blocks[v as usize] = b;
            sizes[b as usize] += 1;
        }
        if sizes[0] <= bound && sizes[1] <= bound {
            return Ok(Partition::new(blocks));
        }
    }

    // Bounded fill: shuffle, then pick a feasible block-0 size uniformly.
    let mut order = free;
    order.shuffle(rng);
    let lo = (n - bound).max(seed.len()) - seed.len();
    let hi = (bound - seed.len()).min(order.len());
    if lo > hi {
        return Err(Error::InfeasibleConstraint {
            fixed: seed.len(),
            bound,
        });
    }
    let take = rng.random_range(lo..=hi);
    for (i, &v) in order.iter().enumerate() {
        blocks[v as usize] = u8::from(i >= take);
    }
    Ok(Partition::new(blocks))
}

/// Relabels so `u` sits in block 1, then pulls any seed node into block 0.
pub fn enforce_consistency(p: &Partition, seed: &[AuxNode], u: AuxNode) -> Partition {
    let flip = p.block(u) == 0;
    let mut blocks: Vec<u8> = p.blocks().iter().map(|&b| b ^ u8::from(flip)).collect();
    for &s in seed {
        blocks[s as usize] = 0;
    }
    Partition::new(blocks)
}

pub fn is_consistent(p: &Partition, seed: &[AuxNode], u: AuxNode) -> bool {
    p.block(u) == 1 && seed.iter().all(|&s| p.block(s) == 0) && p.size(0) > 0
}

#[derive(Clone, Debug, PartialEq)]
pub struct SearchConfig {
    pub beta: usize,
    pub eps_min: f64,
    pub eps_max: f64,
    pub max_passes: usize,
    pub seed_mode: SeedMode,
    pub rng_seed: u64,
    /// Also keep the best consistent split visited during refinement, not
    /// just the refined end state.
    pub track_visited: bool,
}

impl Default for SearchConfig {
    fn default() -> Self {
        Self {
            beta: 80,
            eps_min: 0.03,
            eps_max: 0.5,
            max_passes: 16,
            seed_mode: SeedMode::PostHoc,
            rng_seed: 0,
            track_visited: true,
        }
    }
}

impl SearchConfig {
    pub fn validate(&self) -> Result<()> {
        if self.beta == 0 {
            return Err(Error::InvalidConfig("beta must be at least 1".into()));
        }
        let ok = |e: f64| e > 0.0 && e <= 1.0;
        if !ok(self.eps_min) || !ok(self.eps_max) || self.eps_min > self.eps_max {
            return Err(Error::InvalidConfig(format!(
                "epsilon range [{}, {}] must satisfy 0 < min <= max <= 1",
                self.eps_min, self.eps_max
            )));
        }
        Ok(())
    }

    /// RNG for restart `run`: the master seed with the run index as stream.
    pub fn run_rng(&self, run: usize) -> ChaCha8Rng {
        let mut rng = ChaCha8Rng::seed_from_u64(self.rng_seed);
        rng.set_stream(run as u64);
        rng
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct RunOutcome {
    pub run: usize,
    pub epsilon: f64,
    pub partition: Partition,
    pub cut: u64,
    pub score: Option<ConductanceResult>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct SearchOutcome {
    pub best: RunOutcome,
    /// Runs that produced a defined conductance.
    pub scored_runs: usize,
}

impl SearchOutcome {
    pub fn partition(&self) -> &Partition {
        &self.best.partition
    }

    pub fn score(&self) -> Option<&ConductanceResult> {
        self.best.score.as_ref()
    }
}

/// One restart: sample epsilon, initialize, refine, make consistent, score.
pub fn single_run(aux: &AuxHypergraph, config: &SearchConfig, run: usize, evaluator: &Evaluator) -> Result<RunOutcome> {
    let mut rng = config.run_rng(run);
    let epsilon = if config.eps_min < config.eps_max {
        rng.random_range(config.eps_min..=config.eps_max)
    } else {
        config.eps_min
    };
    let constraint = ImbalanceConstraint {
        epsilon,
        min_bound: aux.seed().len().max(1),
    };
    let initial = random_feasible_partition(aux, &constraint, &mut rng)?;
    let u = aux.complement_node();
    let mut movable = vec![true; aux.node_count()];
    movable[u as usize] = false;
    if config.seed_mode == SeedMode::Fixed {
        for &s in aux.seed() {
            movable[s as usize] = false;
        }
    }
    let mut tracker = fm::Tracker::new(aux, evaluator);
    let refined = fm::refine(
        aux,
        &initial,
        &constraint,
        config.max_passes,
        &movable,
        config.track_visited.then_some(&mut tracker),
    );
    let partition = enforce_consistency(&refined, aux.seed(), u);
    let cut = cut_net_unchecked(aux, partition.blocks());
    let score = evaluator.evaluate(aux, &partition).ok();
    let mut outcome = RunOutcome {
        run,
        epsilon,
        partition,
        cut,
        score,
    };
    if let Some((score, cut, partition)) = tracker.best {
        let visited = RunOutcome {
            run,
            epsilon,
            partition,
            cut,
            score: Some(score),
        };
        if rank(&visited) < rank(&outcome) {
            outcome = visited;
        }
    }
    Ok(outcome)
}

fn rank(r: &RunOutcome) -> (bool, Option<num_rational::Ratio<u64>>, u64, usize, usize) {
    (
        r.score.is_none(),
        r.score.as_ref().map(|s| s.phi),
        r.cut,
        r.partition.size(0),
        r.run,
    )
}

/// `beta` independent restarts, evaluated concurrently; returns the one with
/// the lowest conductance (then lower cut, smaller cluster, earlier run).
/// Runs whose score is undefined lose to every scored run.
pub fn partition_search(aux: &AuxHypergraph, config: &SearchConfig, evaluator: &Evaluator) -> Result<SearchOutcome> {
    config.validate()?;
    let runs: Vec<RunOutcome> = (0..config.beta)
        .into_par_iter()
        .map(|run| single_run(aux, config, run, evaluator))
        .collect::<Result<_>>()?;
    let scored_runs = runs.iter().filter(|r| r.score.is_some()).count();
    let best = runs
        .into_iter()
        .min_by(|a, b| rank(a).cmp(&rank(b)))
        .expect("beta >= 1");
    Ok(SearchOutcome { best, scored_runs })
}
