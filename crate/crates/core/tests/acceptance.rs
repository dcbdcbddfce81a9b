//! Acceptance criteria, one PASS/FAIL line each.
//!
//! Criteria 5 and 7 need the contact-primary-school hypergraph in ARB format
//! (`contact-primary-school-nverts.txt` and `-simplices.txt`). The directory
//! is read from `HYPERMOTIF_DATA_DIR`, falling back to
//! `<workspace>/data/contact-primary-school`. Without it both print FAIL;
//! set `HYPERMOTIF_REQUIRE_DATA=1` to turn that into a test failure.

use std::path::PathBuf;
use std::time::{Duration, Instant};

use num_rational::Ratio;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use hypermotif::auxiliary::build_aux;
use hypermotif::ball::{bfs_balls, BallMethod};
use hypermotif::conductance::{conductance_direct, conductance_via_aux, motif_cut};
use hypermotif::diagnostics;
use hypermotif::generate::{planted_groups, random_hypergraph, PlantedConfig};
use hypermotif::hypergraph::{EdgeId, Hypergraph, NodeId};
use hypermotif::io::{load_arb, write_report, ClusterReport, Dataset, Labels, RunStatus};
use hypermotif::motif::{enumerate_motifs, motif_degree_vector, MotifPattern, Scope};
use hypermotif::oracle::{brute_best_cluster, brute_motif_cut, brute_motifs, OracleBudget};
use hypermotif::partition::{cut_net, Partition};
use hypermotif::pipeline::{cluster_seed, resolve_seeds, run_local_clustering, RunConfig, SeedSpec};

const MASTER_SEED: u64 = 0x5eed_2024;
const DENSITIES: [(f64, f64); 3] = [(0.15, 0.05), (0.3, 0.1), (0.5, 0.2)];
const SMOKE_LIMIT: Duration = Duration::from_secs(120);
const SMOKE_PHI_MAX: f64 = 0.75;
const SMOKE_SEEDS: usize = 5;
const SMOKE_MOTIF: MotifPattern = MotifPattern::II;

#[derive(Default)]
struct Ledger {
    lines: Vec<(String, bool, bool)>,
    phis: Vec<Ratio<u64>>,
}

impl Ledger {
    fn record(&mut self, id: &str, pass: bool, detail: String) {
        self.record_with(id, pass, detail, true);
    }

    fn record_with(&mut self, id: &str, pass: bool, detail: String, binding: bool) {
        let verdict = if pass { "PASS" } else { "FAIL" };
        println!("[{verdict}] {id}: {detail}");
        self.lines.push((id.to_owned(), pass, binding));
    }
}

fn rng(stream: u64) -> ChaCha8Rng {
    let mut r = ChaCha8Rng::seed_from_u64(MASTER_SEED);
    r.set_stream(stream);
    r
}

fn toy_instance(r: &mut ChaCha8Rng, i: usize) -> Hypergraph {
    let n = r.random_range(4..=12);
    let (pd, pt) = DENSITIES[i % DENSITIES.len()];
    random_hypergraph(n, pd, pt, r)
}

fn phi_of(report: &ClusterReport) -> Option<Ratio<u64>> {
    let (n, d) = report.phi_exact.as_deref()?.split_once('/')?;
    Some(Ratio::new(n.parse().ok()?, d.parse().ok()?))
}

fn criterion_1(ledger: &mut Ledger) {
    let started = Instant::now();
    let mut r = rng(1);
    let (mut checked, mut mismatches, mut total) = (0, 0, 0usize);
    for i in 0..200 {
        let h = toy_instance(&mut r, i);
        let all: Vec<NodeId> = h.nodes().collect();
        for pattern in MotifPattern::ALL {
            let mut fast = enumerate_motifs(&h, &all, pattern, Scope::Exact).unwrap();
            fast.sort();
            let brute = brute_motifs(&h, pattern, OracleBudget::default()).unwrap();
            total += brute.len();
            checked += 1;
            if fast != brute {
                mismatches += 1;
            }
        }
    }
    let secs = started.elapsed().as_secs_f64();
    ledger.record(
        "criterion 1 (oracle motif equivalence)",
        mismatches == 0 && secs < 30.0,
        format!("{checked} (graph, pattern) pairs, {total} occurrences, {mismatches} mismatches, {secs:.2}s (limit 30s)"),
    );
}

struct PartitionInstance {
    h: Hypergraph,
    pattern: MotifPattern,
    global: Vec<hypermotif::MotifOccurrence>,
    aux: hypermotif::AuxHypergraph,
    partition: Partition,
}

/// Random hypergraph, random ball around a seed hyperedge (a BFS ball or a
/// random superset of the seed), random consistent partition.
fn partition_instances(count: usize) -> Vec<PartitionInstance> {
    let mut r = rng(2);
    let mut out = Vec::new();
    let mut i = 0;
    while out.len() < count {
        i += 1;
        let h = toy_instance(&mut r, i);
        if h.edge_count() == 0 {
            continue;
        }
        let pattern = MotifPattern::ALL[r.random_range(0..6)];
        let global = brute_motifs(&h, pattern, OracleBudget::default()).unwrap();
        let seed = EdgeId(r.random_range(0..h.edge_count() as u32));
        let seed_nodes = h.edge(seed).members().to_vec();
        let ball: Vec<NodeId> = if r.random_bool(0.5) {
            let balls = bfs_balls(&h, seed, 3, r.random_range(1..h.node_count())).unwrap();
            balls[r.random_range(0..balls.len())].nodes.clone()
        } else {
            let mut b: Vec<NodeId> = h.nodes().filter(|v| seed_nodes.contains(v) || r.random_bool(0.5)).collect();
            b.sort();
            b
        };
        let local = enumerate_motifs(&h, &ball, pattern, Scope::Exact).unwrap();
        if local.is_empty() {
            continue;
        }
        let aux = build_aux(&local, &ball, &seed_nodes).unwrap();
        let mut blocks: Vec<u8> = (0..aux.node_count()).map(|_| r.random_bool(0.5) as u8).collect();
        for &s in aux.seed() {
            blocks[s as usize] = 0;
        }
        blocks[aux.complement_node() as usize] = 1;
        out.push(PartitionInstance {
            h,
            pattern,
            global,
            aux,
            partition: Partition::new(blocks),
        });
    }
    out
}

fn criterion_2_and_3(ledger: &mut Ledger) {
    let instances = partition_instances(100);
    let mut mismatches = 0;
    let (mut eligible, mut equal) = (0, 0);
    for inst in &instances {
        let cluster = inst.partition.cluster(&inst.aux);
        let aux_cut = cut_net(&inst.aux, &inst.partition).unwrap();
        if aux_cut != brute_motif_cut(&inst.global, &cluster) || aux_cut != motif_cut(&inst.global, &cluster) {
            mismatches += 1;
        }

        let degrees = motif_degree_vector(&inst.global, inst.h.node_count());
        let vol_c: u64 = cluster.iter().map(|v| degrees[v.index()]).sum();
        let vol_rest: u64 = degrees.iter().sum::<u64>() - vol_c;
        if vol_c == 0 || vol_c > vol_rest {
            continue;
        }
        eligible += 1;
        let via_aux = conductance_via_aux(&inst.aux, &inst.partition).unwrap();
        let direct = conductance_direct(&inst.global, inst.h.node_count(), &cluster).unwrap();
        ledger.phis.extend([via_aux.phi, direct.phi]);
        if via_aux.phi == direct.phi {
            equal += 1;
        }
    }
    let patterns: std::collections::BTreeSet<_> = instances.iter().map(|i| i.pattern).collect();
    ledger.record(
        "criterion 2 (aux cut-net equals motif-cut)",
        mismatches == 0,
        format!("{} instances over {} patterns, {mismatches} mismatches", instances.len(), patterns.len()),
    );
    ledger.record(
        "criterion 3 (aux conductance equals direct conductance)",
        eligible > 0 && equal == eligible,
        format!("{equal}/{eligible} eligible instances equal (exact rationals)"),
    );
}

fn criterion_4(ledger: &mut Ledger) {
    let mut r = rng(4);
    let (mut comparable, mut matched, mut outside, mut attempts) = (0, 0, 0, 0);
    let mut misses = Vec::new();
    while comparable + outside < 100 {
        attempts += 1;
        let h = toy_instance(&mut r, attempts);
        if h.edge_count() == 0 {
            continue;
        }
        let pattern = MotifPattern::ALL[r.random_range(0..6)];
        let seed = EdgeId(r.random_range(0..h.edge_count() as u32));
        let dataset = Dataset {
            graph: h.clone(),
            labels: Labels::identity(h.node_count()),
            stats: Default::default(),
        };
        let method = if attempts % 2 == 0 { BallMethod::Core } else { BallMethod::Bfs };
        let mut config = RunConfig::new(method, pattern, SeedSpec::Index(seed.index()));
        config.beta = 200;
        config.scope = Scope::Exact;
        config.verify_assumption = true;
        config.rng_seed = MASTER_SEED ^ attempts as u64;
        let report = cluster_seed(&dataset, seed, &config).unwrap();
        let ball: Vec<NodeId> = report.ball.iter().map(|l| NodeId(l.parse().unwrap())).collect();

        let budget = OracleBudget::default();
        let global = brute_best_cluster(&h, seed, pattern, None, budget).unwrap();
        let within = brute_best_cluster(&h, seed, pattern, Some(&ball), budget).unwrap();
        let Some(within) = within else {
            continue;
        };
        if let Some(p) = phi_of(&report) {
            ledger.phis.push(p);
        }
        if global.as_ref().map(|g| g.phi) != Some(within.phi) {
            outside += 1;
            continue;
        }
        comparable += 1;
        if report.status == RunStatus::Ok && phi_of(&report) == Some(within.phi) {
            matched += 1;
        } else {
            misses.push(format!("#{attempts} {pattern} got {:?} want {}", report.phi_exact, within.phi));
        }
    }
    let rate = matched as f64 / comparable.max(1) as f64;
    ledger.record(
        "criterion 4 (pipeline optimality at toy scale)",
        comparable > 0 && rate >= 0.95,
        format!(
            "{matched}/{comparable} matched ({:.1}%, bound 95%); {outside} instances with optimum outside the ball{}",
            100.0 * rate,
            if misses.is_empty() { String::new() } else { format!("; misses: {}", misses.join(", ")) }
        ),
    );
}

fn data_dir() -> PathBuf {
    std::env::var_os("HYPERMOTIF_DATA_DIR")
        .map(PathBuf::from)
        .unwrap_or_else(|| PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../data/contact-primary-school"))
}

struct SmokeRun {
    method: BallMethod,
    elapsed: Duration,
    report: ClusterReport,
    bytes: Vec<u8>,
}

fn smoke(dataset: &Dataset) -> Vec<SmokeRun> {
    let seeds = resolve_seeds(dataset, &SeedSpec::Random(SMOKE_SEEDS), MASTER_SEED).unwrap();
    let mut runs = Vec::new();
    for method in [BallMethod::Core, BallMethod::Bfs] {
        for &seed in &seeds {
            let mut config = RunConfig::new(method, SMOKE_MOTIF, SeedSpec::Index(seed.index()));
            config.dataset = "contact-primary-school".into();
            config.rng_seed = MASTER_SEED;
            config.zero_timings = true;
            let started = Instant::now();
            let report = cluster_seed(dataset, seed, &config).unwrap();
            let elapsed = started.elapsed();
            let mut bytes = Vec::new();
            write_report(&report, &mut bytes).unwrap();
            runs.push(SmokeRun {
                method,
                elapsed,
                report,
                bytes,
            });
        }
    }
    runs
}

fn judge_smoke(runs: &[SmokeRun], ledger: &mut Ledger) -> (bool, String) {
    let mut ok = true;
    let mut parts = Vec::new();
    for method in [BallMethod::Core, BallMethod::Bfs] {
        let mine: Vec<&SmokeRun> = runs.iter().filter(|r| r.method == method).collect();
        let slowest = mine.iter().map(|r| r.elapsed).max().unwrap_or_default();
        let phis: Vec<f64> = mine.iter().filter_map(|r| r.report.phi).collect();
        ledger.phis.extend(mine.iter().filter_map(|r| phi_of(&r.report)));
        let best = phis.iter().copied().fold(f64::INFINITY, f64::min);
        let method_ok = slowest < SMOKE_LIMIT && best <= SMOKE_PHI_MAX;
        ok &= method_ok;
        parts.push(format!(
            "{method}: best phi {best:.3} over {}/{} defined, slowest run {:.2}s",
            phis.len(),
            mine.len(),
            slowest.as_secs_f64()
        ));
    }
    (ok, parts.join("; "))
}

fn criterion_5_and_7(ledger: &mut Ledger) {
    let dir = data_dir();
    let dataset = match load_arb(&dir) {
        Ok(d) => d,
        Err(e) => {
            let why = format!("dataset not available at {} ({e})", dir.display());
            let require = std::env::var_os("HYPERMOTIF_REQUIRE_DATA").is_some();
            ledger.record_with("criterion 5 (contact-primary-school smoke)", false, why.clone(), require);
            ledger.record_with("criterion 7 (determinism on criterion 5)", false, why, require);
            return;
        }
    };
    let shape = format!("{} nodes, {} hyperedges", dataset.graph.node_count(), dataset.graph.edge_count());
    let first = smoke(&dataset);
    let (ok, detail) = judge_smoke(&first, ledger);
    ledger.record("criterion 5 (contact-primary-school smoke)", ok, format!("{shape}; {detail}"));
    let second = smoke(&dataset);
    let identical = first.iter().zip(&second).filter(|(a, b)| a.bytes == b.bytes).count();
    ledger.record(
        "criterion 7 (determinism on criterion 5)",
        identical == first.len(),
        format!("{identical}/{} reports byte-identical", first.len()),
    );
}

/// The criterion 5 and 7 protocol on a seeded synthetic hypergraph of the
/// same size. Not a substitute for the real dataset.
fn synthetic_stand_in(ledger: &mut Ledger) {
    let dataset = planted_groups(PlantedConfig::contact_like(), &mut rng(5));
    let first = smoke(&dataset);
    let (ok, detail) = judge_smoke(&first, ledger);
    ledger.record("extra: smoke on synthetic 242-node stand-in", ok, detail);
    let second = smoke(&dataset);
    let identical = first.iter().zip(&second).filter(|(a, b)| a.bytes == b.bytes).count();
    ledger.record(
        "extra: determinism on synthetic stand-in",
        identical == first.len(),
        format!("{identical}/{} reports byte-identical", first.len()),
    );
}

fn criterion_6(ledger: &mut Ledger) {
    let v = diagnostics::violations();
    let out_of_range = ledger.phis.iter().filter(|p| **p > Ratio::from_integer(1)).count();
    ledger.record(
        "criterion 6 (phi in [0,1], fm never increases cut)",
        v.total() == 0 && out_of_range == 0,
        format!(
            "{} phi values checked, {out_of_range} out of range; counters: {} fm cut increases, {} phi out of range",
            ledger.phis.len(),
            v.fm_cut_increases,
            v.phi_out_of_range
        ),
    );
}

#[test]
fn acceptance_criteria() {
    let mut ledger = Ledger::default();
    criterion_1(&mut ledger);
    criterion_2_and_3(&mut ledger);
    criterion_4(&mut ledger);
    criterion_5_and_7(&mut ledger);
    synthetic_stand_in(&mut ledger);
    criterion_6(&mut ledger);

    let failed: Vec<&str> = ledger.lines.iter().filter(|(_, pass, binding)| !pass && *binding).map(|(id, _, _)| id.as_str()).collect();
    assert!(failed.is_empty(), "failed: {failed:?}");
}

#[test]
fn toy_pipeline_matches_oracle() {
    let dataset = hypermotif::io::parse_edge_list("a b v\nv c d\n".as_bytes()).unwrap();
    let config = RunConfig::new(BallMethod::Bfs, MotifPattern::III, "a,b,v".parse().unwrap());
    let report = run_local_clustering(&dataset, &config).unwrap();
    let best = brute_best_cluster(&dataset.graph, EdgeId(0), MotifPattern::III, None, OracleBudget::default())
        .unwrap()
        .unwrap();
    assert_eq!(phi_of(&report), Some(best.phi));
    assert_eq!(best.phi, Ratio::new(1, 2));
    assert_eq!(report.cluster, dataset.labels.map(&best.nodes));
}
