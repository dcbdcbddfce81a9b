use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::Context;
use clap::{Args, Parser, Subcommand};
use hypermotif::ball::BallMethod;
use hypermotif::conductance::VerifyGuard;
use hypermotif::diagnostics;
use hypermotif::harness::{run_benchmark, BenchPlan};
use hypermotif::io::{load, with_output, write_report, InputFormat, RunStatus};
use hypermotif::motif::{MotifPattern, Scope};
use hypermotif::partition::SeedMode;
use hypermotif::pipeline::{run_local_clustering, RunConfig, SeedSpec};
use hypermotif::Error;

const EXIT_INPUT: u8 = 2;
const EXIT_NO_MOTIFS: u8 = 3;

/// Local higher-order motif clustering of hypergraphs.
#[derive(Parser, Debug)]
#[command(name = "hypermotif", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Find a low motif-conductance cluster around one seed hyperedge.
    Cluster(ClusterArgs),
    /// Run a declarative list of clustering jobs and write an aggregate table.
    Bench(BenchArgs),
}

#[derive(Args, Debug)]
struct ClusterArgs {
    #[arg(long, env = "HYPERMOTIF_INPUT")]
    input: PathBuf,
    /// `edgelist` or `arb`.
    #[arg(long, env = "HYPERMOTIF_FORMAT", default_value = "edgelist")]
    format: InputFormat,
    /// `core` or `bfs`.
    #[arg(long, env = "HYPERMOTIF_METHOD")]
    method: BallMethod,
    /// Pattern 1-6 (or I-VI).
    #[arg(long, env = "HYPERMOTIF_MOTIF")]
    motif: MotifPattern,
    /// Node labels (`a,b,c`), `index:N`, or `random:1`.
    #[arg(long, env = "HYPERMOTIF_SEED_EDGE")]
    seed_edge: SeedSpec,
    #[arg(long, env = "HYPERMOTIF_ALPHA", default_value_t = 3)]
    alpha: usize,
    #[arg(long, env = "HYPERMOTIF_BETA", default_value_t = 80)]
    beta: usize,
    #[arg(long, env = "HYPERMOTIF_MIN_BALL", default_value_t = 100)]
    min_ball: usize,
    #[arg(long, env = "HYPERMOTIF_EPS_MIN", default_value_t = 0.03)]
    eps_min: f64,
    #[arg(long, env = "HYPERMOTIF_EPS_MAX", default_value_t = 0.5)]
    eps_max: f64,
    /// `exact` or `paper`.
    #[arg(long, env = "HYPERMOTIF_SCOPE", default_value = "exact")]
    scope: Scope,
    /// `post-hoc` or `fixed`.
    #[arg(long, env = "HYPERMOTIF_SEED_MODE", default_value = "post-hoc")]
    seed_mode: SeedMode,
    /// Enumerate the pattern globally and score with the true complement volume.
    #[arg(long, env = "HYPERMOTIF_VERIFY_ASSUMPTION")]
    verify_assumption: bool,
    /// Allow --verify-assumption above the hyperedge limit.
    #[arg(long, env = "HYPERMOTIF_FORCE_VERIFY")]
    force_verify: bool,
    #[arg(long, env = "HYPERMOTIF_VERIFY_MAX_EDGES", default_value_t = 200_000)]
    verify_max_edges: usize,
    #[arg(long, env = "HYPERMOTIF_MAX_PASSES", default_value_t = 16)]
    max_passes: usize,
    /// Score only refined end states, not every split visited by FM.
    #[arg(long, env = "HYPERMOTIF_FINAL_ONLY")]
    final_only: bool,
    #[arg(long, env = "HYPERMOTIF_RNG_SEED", default_value_t = 0)]
    rng_seed: u64,
    /// Write zero for every timing so reruns are byte-identical.
    #[arg(long, env = "HYPERMOTIF_ZERO_TIMINGS")]
    zero_timings: bool,
    /// Dataset name in the report; defaults to the input file stem.
    #[arg(long, env = "HYPERMOTIF_DATASET")]
    dataset: Option<String>,
    /// Report path; `-` for stdout.
    #[arg(long, env = "HYPERMOTIF_OUTPUT")]
    output: PathBuf,
}

#[derive(Args, Debug)]
struct BenchArgs {
    #[arg(long, env = "HYPERMOTIF_CONFIG")]
    config: PathBuf,
    /// Overrides the plan's table path; `-` for stdout.
    #[arg(long, env = "HYPERMOTIF_TABLE")]
    table: Option<PathBuf>,
}

fn dataset_name(path: &Path) -> String {
    path.file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_else(|| path.display().to_string())
}

fn cluster(args: ClusterArgs) -> anyhow::Result<RunStatus> {
    let dataset = load(&args.input, args.format)?;
    log::info!(
        "loaded {}: {} nodes, {} hyperedges",
        args.input.display(),
        dataset.graph.node_count(),
        dataset.graph.edge_count()
    );
    let mut config = RunConfig::new(args.method, args.motif, args.seed_edge);
    config.dataset = args.dataset.unwrap_or_else(|| dataset_name(&args.input));
    config.alpha = args.alpha;
    config.beta = args.beta;
    config.min_ball = args.min_ball;
    config.eps_min = args.eps_min;
    config.eps_max = args.eps_max;
    config.scope = args.scope;
    config.seed_mode = args.seed_mode;
    config.max_passes = args.max_passes;
    config.track_visited = !args.final_only;
    config.verify_assumption = args.verify_assumption;
    config.verify_guard = VerifyGuard {
        max_edges: args.verify_max_edges,
        force: args.force_verify,
    };
    config.rng_seed = args.rng_seed;
    config.zero_timings = args.zero_timings;

    let report = run_local_clustering(&dataset, &config)?;
    if args.output == Path::new("-") {
        write_report(&report, std::io::stdout().lock())?;
    } else {
        with_output(&args.output, |w| write_report(&report, w))?;
    }
    match report.phi {
        Some(phi) => log::info!("cluster of {} nodes, phi {phi}", report.cluster_size),
        None => log::warn!("no cluster: {:?}", report.status),
    }
    Ok(report.status)
}

fn bench(args: BenchArgs) -> anyhow::Result<RunStatus> {
    let plan = BenchPlan::load(&args.config)?;
    let out = run_benchmark(&plan.jobs)?;
    if let Some(dir) = &plan.reports_dir {
        std::fs::create_dir_all(dir).with_context(|| format!("creating {}", dir.display()))?;
        for (i, report) in out.reports.iter().enumerate() {
            let name = format!("{:03}-{}-{}.json", i, report.dataset, report.method);
            with_output(&dir.join(name), |w| write_report(report, w))?;
        }
    }
    match args.table.or(plan.table) {
        Some(path) if path != Path::new("-") => with_output(&path, |w| out.table.write_csv(w))?,
        _ => out.table.write_csv(std::io::stdout().lock())?,
    }
    let v = diagnostics::violations();
    if v.total() > 0 {
        log::error!("invariant violations: {v:?}");
    }
    Ok(RunStatus::Ok)
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Cluster(args) => cluster(args),
        Command::Bench(args) => bench(args),
    };
    match result {
        Ok(RunStatus::Ok) => ExitCode::SUCCESS,
        Ok(_) => ExitCode::from(EXIT_NO_MOTIFS),
        Err(e) => {
            eprintln!("error: {e:#}");
            match e.downcast_ref::<Error>() {
                Some(err) if err.is_input_error() => ExitCode::from(EXIT_INPUT),
                _ => ExitCode::FAILURE,
            }
        }
    }
}
