//! Benchmark harness: a declarative run list in, one report per run and an
//! aggregate table out.

use std::collections::BTreeMap;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::time::Instant;

use serde::Deserialize;

use crate::ball::BallMethod;
use crate::error::{Error, Result};
use crate::io::{load, ClusterReport, Dataset, InputFormat, RunStatus};
use crate::motif::{MotifPattern, Scope};
use crate::partition::SeedMode;
use crate::pipeline::{cluster_seed, resolve_seeds, RunConfig, SeedSpec};

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct PlanFile {
    #[serde(default)]
    reports_dir: Option<PathBuf>,
    #[serde(default)]
    table: Option<PathBuf>,
    #[serde(default)]
    rng_seed: u64,
    #[serde(default)]
    zero_timings: bool,
    #[serde(rename = "run")]
    runs: Vec<PlanRun>,
}

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct PlanRun {
    graph: String,
    input: PathBuf,
    format: String,
    methods: Vec<String>,
    motif: String,
    seeds: String,
    alpha: Option<usize>,
    beta: Option<usize>,
    min_ball: Option<usize>,
    eps_min: Option<f64>,
    eps_max: Option<f64>,
    scope: Option<String>,
    seed_mode: Option<String>,
    track_visited: Option<bool>,
    verify_assumption: Option<bool>,
    rng_seed: Option<u64>,
}

/// One dataset with the runs to perform on it.
#[derive(Clone, Debug, PartialEq)]
pub struct BenchJob {
    pub input: PathBuf,
    pub format: InputFormat,
    pub config: RunConfig,
}

#[derive(Clone, Debug, PartialEq)]
pub struct BenchPlan {
    pub jobs: Vec<BenchJob>,
    pub reports_dir: Option<PathBuf>,
    pub table: Option<PathBuf>,
}

fn parse_field<T: std::str::FromStr<Err = Error>>(value: &str) -> Result<T> {
    value.parse()
}

impl BenchPlan {
    /// Parses a TOML plan. Relative paths resolve against `base`.
    pub fn from_toml(text: &str, base: &Path) -> Result<Self> {
        let file: PlanFile =
            toml::from_str(text).map_err(|e| Error::InvalidConfig(format!("bench plan: {e}")))?;
        if file.runs.is_empty() {
            return Err(Error::InvalidConfig("bench plan lists no runs".into()));
        }
        let resolve = |p: PathBuf| if p.is_absolute() { p } else { base.join(p) };
        let mut jobs = Vec::new();
        for run in file.runs {
            let motif: MotifPattern = parse_field(&run.motif)?;
            let seed: SeedSpec = parse_field(&run.seeds)?;
            let format: InputFormat = parse_field(&run.format)?;
            if run.methods.is_empty() {
                return Err(Error::InvalidConfig(format!("run `{}` lists no methods", run.graph)));
            }
            for m in &run.methods {
                let method: BallMethod = parse_field(m)?;
                let mut config = RunConfig::new(method, motif, seed.clone());
                config.dataset = run.graph.clone();
                config.rng_seed = run.rng_seed.unwrap_or(file.rng_seed);
                config.zero_timings = file.zero_timings;
                if let Some(v) = run.alpha {
                    config.alpha = v;
                }
                if let Some(v) = run.beta {
                    config.beta = v;
                }
                if let Some(v) = run.min_ball {
                    config.min_ball = v;
                }
                if let Some(v) = run.eps_min {
                    config.eps_min = v;
                }
                if let Some(v) = run.eps_max {
                    config.eps_max = v;
                }
                if let Some(v) = &run.scope {
                    config.scope = parse_field::<Scope>(v)?;
                }
                if let Some(v) = &run.seed_mode {
                    config.seed_mode = parse_field::<SeedMode>(v)?;
                }
                if let Some(v) = run.track_visited {
                    config.track_visited = v;
                }
                if let Some(v) = run.verify_assumption {
                    config.verify_assumption = v;
                }
                config.validate()?;
                jobs.push(BenchJob {
                    input: resolve(run.input.clone()),
                    format,
                    config,
                });
            }
        }
        Ok(BenchPlan {
            jobs,
            reports_dir: file.reports_dir.map(resolve),
            table: file.table.map(resolve),
        })
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|source| Error::Io {
            path: path.to_owned(),
            source,
        })?;
        Self::from_toml(&text, path.parent().unwrap_or(Path::new(".")))
    }
}

/// Means over one (graph, method) pair's successful runs.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct BenchCell {
    pub phi: Option<f64>,
    pub cluster_size: Option<f64>,
    pub time_s: Option<f64>,
    pub runs: usize,
    pub failures: Vec<String>,
}

impl BenchCell {
    fn from_outcomes(outcomes: &[std::result::Result<(ClusterReport, f64), String>]) -> Self {
        let mut cell = BenchCell {
            runs: outcomes.len(),
            ..Default::default()
        };
        let mut ok = Vec::new();
        for o in outcomes {
            match o {
                Ok((r, t)) if r.status == RunStatus::Ok => ok.push((r, *t)),
                Ok((r, _)) => cell.failures.push(format!("{:?}", r.status)),
                Err(e) => cell.failures.push(e.clone()),
            }
        }
        if !ok.is_empty() {
            let k = ok.len() as f64;
            cell.phi = Some(ok.iter().filter_map(|(r, _)| r.phi).sum::<f64>() / k);
            cell.cluster_size = Some(ok.iter().map(|(r, _)| r.cluster_size as f64).sum::<f64>() / k);
            cell.time_s = Some(ok.iter().map(|(_, t)| t).sum::<f64>() / k);
        }
        cell
    }
}

/// Rows keyed by graph, each with one cell per method, in plan order.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct BenchTable {
    pub rows: Vec<(String, BTreeMap<BallMethod, BenchCell>)>,
}

fn mean(values: impl Iterator<Item = f64>) -> Option<f64> {
    let v: Vec<f64> = values.collect();
    (!v.is_empty()).then(|| v.iter().sum::<f64>() / v.len() as f64)
}

impl BenchTable {
    fn cell_mut(&mut self, graph: &str, method: BallMethod) -> &mut BenchCell {
        let i = match self.rows.iter().position(|(g, _)| g == graph) {
            Some(i) => i,
            None => {
                self.rows.push((graph.to_owned(), BTreeMap::new()));
                self.rows.len() - 1
            }
        };
        self.rows[i].1.entry(method).or_default()
    }

    /// Plain arithmetic mean of the per-graph cells for `method`.
    pub fn overall(&self, method: BallMethod) -> BenchCell {
        let cells: Vec<&BenchCell> = self.rows.iter().filter_map(|(_, c)| c.get(&method)).collect();
        BenchCell {
            phi: mean(cells.iter().filter_map(|c| c.phi)),
            cluster_size: mean(cells.iter().filter_map(|c| c.cluster_size)),
            time_s: mean(cells.iter().filter_map(|c| c.time_s)),
            runs: cells.iter().map(|c| c.runs).sum(),
            failures: Vec::new(),
        }
    }

    fn methods(&self) -> Vec<BallMethod> {
        let mut m: Vec<BallMethod> = self.rows.iter().flat_map(|(_, c)| c.keys().copied()).collect();
        m.sort();
        m.dedup();
        m
    }

    /// CSV with header `graph,method,phi,cluster_size,time_s`, one line per
    /// graph and method, then an `Overall` line per method.
    pub fn write_csv<W: Write>(&self, mut w: W) -> Result<()> {
        let fmt = |v: Option<f64>, digits: usize| v.map_or(String::new(), |x| format!("{x:.digits$}"));
        writeln!(w, "graph,method,phi,cluster_size,time_s")?;
        let line = |w: &mut W, graph: &str, method: BallMethod, c: &BenchCell| -> Result<()> {
            writeln!(
                w,
                "{graph},{method},{},{},{}",
                fmt(c.phi, 3),
                fmt(c.cluster_size, 1),
                fmt(c.time_s, 3)
            )?;
            Ok(())
        };
        for (graph, cells) in &self.rows {
            for (&method, cell) in cells {
                line(&mut w, graph, method, cell)?;
            }
        }
        for method in self.methods() {
            line(&mut w, "Overall", method, &self.overall(method))?;
        }
        Ok(())
    }
}

pub struct BenchOutput {
    pub table: BenchTable,
    pub reports: Vec<ClusterReport>,
}

/// Runs every job, one report per (graph, seed, method). Individual failures
/// are recorded in the table rather than aborting.
pub fn run_benchmark(jobs: &[BenchJob]) -> Result<BenchOutput> {
    if jobs.is_empty() {
        return Err(Error::InvalidConfig("benchmark needs at least one run".into()));
    }
    let mut cache: BTreeMap<(PathBuf, bool), std::result::Result<Dataset, String>> = BTreeMap::new();
    let mut table = BenchTable::default();
    let mut reports = Vec::new();
    for job in jobs {
        let key = (job.input.clone(), job.format == InputFormat::Arb);
        let dataset = cache
            .entry(key)
            .or_insert_with(|| load(&job.input, job.format).map_err(|e| e.to_string()));
        let config = &job.config;
        let outcomes: Vec<std::result::Result<(ClusterReport, f64), String>> = match dataset {
            Err(e) => vec![Err(e.clone())],
            Ok(d) => match resolve_seeds(d, &config.seed, config.rng_seed) {
                Err(e) => vec![Err(e.to_string())],
                Ok(seeds) => seeds
                    .into_iter()
                    .map(|seed| {
                        let t = Instant::now();
                        let r = cluster_seed(d, seed, config).map_err(|e| e.to_string())?;
                        Ok((r, t.elapsed().as_secs_f64()))
                    })
                    .collect(),
            },
        };
        for o in &outcomes {
            match o {
                Ok((r, _)) => reports.push(r.clone()),
                Err(e) => log::warn!("{} / {}: {e}", config.dataset, config.method),
            }
        }
        *table.cell_mut(&config.dataset, config.method) = BenchCell::from_outcomes(&outcomes);
    }
    Ok(BenchOutput { table, reports })
}
