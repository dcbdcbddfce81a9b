//! End-to-end local clustering: ball, enumeration, auxiliary hypergraph,
//! partition search.

use std::fmt;
use std::str::FromStr;
use std::time::Instant;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::auxiliary::build_aux;
use crate::ball::{bfs_balls, core_ball, nbr_core_decomposition, Ball, BallMethod};
use crate::conductance::{verify_volume_assumption, ComplementInfo, Evaluator, VerifyGuard};
use crate::error::{Error, Result};
use crate::hypergraph::{EdgeId, Hypergraph, NodeId};
use crate::io::{format_phi, AssumptionStatus, ClusterReport, Dataset, Evaluation, ParamEcho, PhaseTimings, RunStatus};
use crate::motif::{enumerate_motifs, MotifPattern, Scope};
use crate::partition::{partition_search, SearchConfig, SeedMode};

/// How the seed hyperedge is chosen.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SeedSpec {
    /// Labels of the seed hyperedge's nodes.
    Nodes(Vec<String>),
    /// Hyperedge index after cleaning.
    Index(usize),
    /// `k` distinct hyperedges drawn with the master RNG.
    Random(usize),
}

impl FromStr for SeedSpec {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let bad = || Error::InvalidConfig(format!("cannot parse seed edge `{s}`"));
        if let Some(k) = s.strip_prefix("random:") {
            let k: usize = k.parse().map_err(|_| bad())?;
            if k == 0 {
                return Err(bad());
            }
            return Ok(SeedSpec::Random(k));
        }
        if let Some(i) = s.strip_prefix("index:") {
            return i.parse().map(SeedSpec::Index).map_err(|_| bad());
        }
        let labels: Vec<String> = s
            .split(|c: char| c == ',' || c.is_whitespace())
            .filter(|t| !t.is_empty())
            .map(str::to_owned)
            .collect();
        match labels.len() {
            0 => Err(bad()),
            1 => labels[0].parse().map(SeedSpec::Index).map_err(|_| bad()),
            _ => Ok(SeedSpec::Nodes(labels)),
        }
    }
}

impl fmt::Display for SeedSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SeedSpec::Nodes(labels) => f.write_str(&labels.join(",")),
            SeedSpec::Index(i) => write!(f, "index:{i}"),
            SeedSpec::Random(k) => write!(f, "random:{k}"),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct RunConfig {
    pub dataset: String,
    pub method: BallMethod,
    pub motif: MotifPattern,
    pub seed: SeedSpec,
    pub alpha: usize,
    pub beta: usize,
    pub min_ball: usize,
    pub eps_min: f64,
    pub eps_max: f64,
    pub scope: Scope,
    pub seed_mode: SeedMode,
    pub max_passes: usize,
    /// See [`SearchConfig::track_visited`].
    pub track_visited: bool,
    pub verify_assumption: bool,
    pub verify_guard: VerifyGuard,
    pub rng_seed: u64,
    /// Zero every timing in the report so repeated runs are byte-identical.
    pub zero_timings: bool,
}

impl RunConfig {
    pub fn new(method: BallMethod, motif: MotifPattern, seed: SeedSpec) -> Self {
        Self {
            dataset: String::new(),
            method,
            motif,
            seed,
            alpha: 3,
            beta: 80,
            min_ball: 100,
            eps_min: 0.03,
            eps_max: 0.5,
            scope: Scope::Exact,
            seed_mode: SeedMode::PostHoc,
            max_passes: 16,
            track_visited: true,
            verify_assumption: false,
            verify_guard: VerifyGuard::default(),
            rng_seed: 0,
            zero_timings: false,
        }
    }

    pub fn search_config(&self) -> SearchConfig {
        SearchConfig {
            beta: self.beta,
            eps_min: self.eps_min,
            eps_max: self.eps_max,
            max_passes: self.max_passes,
            seed_mode: self.seed_mode,
            rng_seed: self.rng_seed,
            track_visited: self.track_visited,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.alpha == 0 {
            return Err(Error::InvalidConfig("alpha must be at least 1".into()));
        }
        self.search_config().validate()
    }

    fn params(&self) -> ParamEcho {
        ParamEcho {
            alpha: self.alpha,
            beta: self.beta,
            eps_min: self.eps_min,
            eps_max: self.eps_max,
            min_ball: self.min_ball,
            scope: self.scope,
            seed_mode: self.seed_mode,
            track_visited: self.track_visited,
        }
    }
}

/// Resolves a seed spec to hyperedge ids. Random draws are distinct and
/// depend only on `rng_seed`.
pub fn resolve_seeds(dataset: &Dataset, spec: &SeedSpec, rng_seed: u64) -> Result<Vec<EdgeId>> {
    let h = &dataset.graph;
    match spec {
        SeedSpec::Index(i) => {
            if *i >= h.edge_count() {
                return Err(Error::SeedNotFound(spec.to_string()));
            }
            Ok(vec![EdgeId(*i as u32)])
        }
        SeedSpec::Nodes(labels) => {
            let mut nodes = labels
                .iter()
                .map(|l| dataset.labels.resolve(l).ok_or_else(|| Error::SeedNotFound(spec.to_string())))
                .collect::<Result<Vec<NodeId>>>()?;
            nodes.sort_unstable();
            nodes.dedup();
            h.find_edge(&nodes)
                .map(|e| vec![e])
                .ok_or_else(|| Error::SeedNotFound(spec.to_string()))
        }
        SeedSpec::Random(k) => {
            if *k > h.edge_count() {
                return Err(Error::InvalidConfig(format!(
                    "cannot draw {k} seed hyperedges from {}",
                    h.edge_count()
                )));
            }
            let mut rng = ChaCha8Rng::seed_from_u64(rng_seed);
            rng.set_stream(u64::MAX);
            let picks = rand::seq::index::sample(&mut rng, h.edge_count(), *k);
            Ok(picks.into_iter().map(|i| EdgeId(i as u32)).collect())
        }
    }
}

struct Candidate {
    ball_index: usize,
    cluster: Vec<NodeId>,
    phi: num_rational::Ratio<u64>,
    cut: u64,
    cluster_volume: u64,
    volume_used: u64,
    evaluation: Evaluation,
    assumption: AssumptionStatus,
    occurrences: usize,
}

impl Candidate {
    fn key(&self) -> (num_rational::Ratio<u64>, u64, usize, usize) {
        (self.phi, self.cut, self.cluster.len(), self.ball_index)
    }
}

fn balls_for(h: &Hypergraph, seed: EdgeId, config: &RunConfig) -> Result<Vec<Ball>> {
    match config.method {
        BallMethod::Core => {
            let cores = nbr_core_decomposition(h);
            let min_size = config.min_ball.max(h.edge(seed).len());
            Ok(vec![core_ball(h, &cores, seed, min_size)?])
        }
        BallMethod::Bfs => bfs_balls(h, seed, config.alpha, config.min_ball),
    }
}

/// Runs every phase for the single seed hyperedge `seed`.
pub fn cluster_seed(dataset: &Dataset, seed: EdgeId, config: &RunConfig) -> Result<ClusterReport> {
    config.validate()?;
    let h = &dataset.graph;
    if seed.index() >= h.edge_count() {
        return Err(Error::SeedNotFound(seed.to_string()));
    }
    let seed_nodes = h.edge(seed).members().to_vec();
    let started = Instant::now();
    let mut timings = PhaseTimings::default();

    let t = Instant::now();
    let balls = balls_for(h, seed, config)?;
    timings.ball_s = t.elapsed().as_secs_f64();
    log::info!(
        "{} ball(s) around {seed}: sizes {:?}",
        balls.len(),
        balls.iter().map(Ball::len).collect::<Vec<_>>()
    );

    let search = config.search_config();
    let mut best: Option<Candidate> = None;
    let mut any_occurrences = false;
    for (ball_index, ball) in balls.iter().enumerate() {
        let t = Instant::now();
        let occurrences = enumerate_motifs(h, &ball.nodes, config.motif, config.scope)?;
        timings.enumerate_s += t.elapsed().as_secs_f64();
        log::debug!("ball {ball_index}: {} occurrences of {}", occurrences.len(), config.motif);
        if occurrences.is_empty() {
            continue;
        }
        any_occurrences = true;

        let t = Instant::now();
        let aux = build_aux(&occurrences, &ball.nodes, &seed_nodes)?;
        timings.auxiliary_s += t.elapsed().as_secs_f64();

        let t = Instant::now();
        let ball_volume: u64 = aux.motif_degrees().iter().sum();
        let (complement, assumption) = if config.verify_assumption {
            let check = verify_volume_assumption(h, &ball.nodes, config.motif, config.verify_guard)?;
            let status = if check.holds() {
                AssumptionStatus::Holds
            } else {
                AssumptionStatus::Violated
            };
            (Some(check.complement), status)
        } else if ball.len() == h.node_count() {
            let status = if ball_volume == 0 {
                AssumptionStatus::Holds
            } else {
                AssumptionStatus::Violated
            };
            (Some(ComplementInfo { nodes: 0, volume: 0 }), status)
        } else {
            (None, AssumptionStatus::Unverified)
        };
        let evaluator = complement.map_or(Evaluator::Aux, Evaluator::Exact);
        let outcome = partition_search(&aux, &search, &evaluator)?;
        timings.partition_s += t.elapsed().as_secs_f64();

        let Some(score) = outcome.score() else {
            log::debug!("ball {ball_index}: no restart produced a defined conductance");
            continue;
        };
        let cluster = outcome.partition().cluster(&aux);
        let cluster_volume = cluster
            .iter()
            .map(|v| aux.motif_degrees()[ball.nodes.binary_search(v).expect("cluster within ball")])
            .sum();
        let candidate = Candidate {
            ball_index,
            cluster,
            phi: score.phi,
            cut: score.motif_cut,
            cluster_volume,
            volume_used: score.volume_used,
            evaluation: if complement.is_some() {
                Evaluation::Exact
            } else {
                Evaluation::Aux
            },
            assumption,
            occurrences: occurrences.len(),
        };
        if best.as_ref().is_none_or(|b| candidate.key() < b.key()) {
            best = Some(candidate);
        }
    }
    timings.total_s = started.elapsed().as_secs_f64();
    if config.zero_timings {
        timings = PhaseTimings::default();
    }

    let labels = &dataset.labels;
    let base = |ball: &Ball| ClusterReport {
        dataset: config.dataset.clone(),
        method: config.method,
        motif: config.motif,
        status: RunStatus::NoMotifs,
        seed_edge: labels.map(&seed_nodes),
        cluster: Vec::new(),
        ball: labels.map(&ball.nodes),
        phi: None,
        phi_exact: None,
        motif_cut: 0,
        cluster_size: 0,
        ball_size: ball.len(),
        cluster_volume: 0,
        volume_used: 0,
        evaluation: Evaluation::Aux,
        volume_assumption: AssumptionStatus::Unverified,
        ball_detail: ball.detail,
        occurrences: 0,
        timings,
        rng_seed: config.rng_seed,
        params: config.params(),
    };

    let Some(best) = best else {
        let last = balls.last().expect("at least one ball");
        let mut report = base(last);
        if any_occurrences {
            report.status = RunStatus::Undefined;
        }
        log::warn!("no defined motif conductance around {seed} ({:?})", report.status);
        return Ok(report);
    };
    let ball = &balls[best.ball_index];
    let phi = *best.phi.numer() as f64 / *best.phi.denom() as f64;
    Ok(ClusterReport {
        status: RunStatus::Ok,
        cluster: labels.map(&best.cluster),
        phi: Some(format_phi(phi)),
        phi_exact: Some(format!("{}/{}", best.phi.numer(), best.phi.denom())),
        motif_cut: best.cut,
        cluster_size: best.cluster.len(),
        cluster_volume: best.cluster_volume,
        volume_used: best.volume_used,
        evaluation: best.evaluation,
        volume_assumption: best.assumption,
        occurrences: best.occurrences,
        ..base(ball)
    })
}

/// Resolves the configured seed (which must name exactly one hyperedge) and
/// runs every phase.
pub fn run_local_clustering(dataset: &Dataset, config: &RunConfig) -> Result<ClusterReport> {
    if let SeedSpec::Random(k) = config.seed {
        if k != 1 {
            return Err(Error::InvalidConfig(format!(
                "a single run needs one seed hyperedge, got random:{k}"
            )));
        }
    }
    let seeds = resolve_seeds(dataset, &config.seed, config.rng_seed)?;
    cluster_seed(dataset, seeds[0], config)
}

/// Cross-checks a report's own fields: the cluster holds the seed and sits
/// inside the ball, and the exact conductance matches cut over volume.
pub fn check_report(report: &ClusterReport) -> Result<()> {
    let fail = |m: &str| Err(Error::InvalidConfig(format!("inconsistent report: {m}")));
    if report.status != RunStatus::Ok {
        return Ok(());
    }
    if !report.seed_edge.iter().all(|s| report.cluster.contains(s)) {
        return fail("seed not inside the cluster");
    }
    if !report.cluster.iter().all(|c| report.ball.contains(c)) {
        return fail("cluster not inside the ball");
    }
    if report.cluster_size != report.cluster.len() || report.ball_size != report.ball.len() {
        return fail("size fields disagree with node lists");
    }
    let expected = if report.volume_used == 0 {
        "0/1".to_owned()
    } else {
        let r = num_rational::Ratio::new(report.motif_cut, report.volume_used);
        format!("{}/{}", r.numer(), r.denom())
    };
    if report.phi_exact.as_deref() != Some(expected.as_str()) {
        return fail("phi does not equal motif cut over volume");
    }
    if report.evaluation == Evaluation::Aux && report.volume_used != report.cluster_volume {
        return fail("aux evaluation must divide by the cluster volume");
    }
    Ok(())
}
