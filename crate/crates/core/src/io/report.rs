use std::io::{Read, Write};

use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::ball::{BallDetail, BallMethod};
use crate::error::Result;
use crate::motif::{MotifPattern, Scope};
use crate::partition::SeedMode;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum RunStatus {
    Ok,
    /// The winning ball takes part in no occurrence of the pattern.
    NoMotifs,
    /// Occurrences exist but no split had a defined conductance.
    Undefined,
}

/// How the reported conductance was computed.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Evaluation {
    /// Aux cut-net over the cluster's motif volume.
    Aux,
    /// Full definition, using the complement's volume from global enumeration.
    Exact,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum AssumptionStatus {
    Unverified,
    Holds,
    Violated,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct PhaseTimings {
    pub ball_s: f64,
    pub enumerate_s: f64,
    pub auxiliary_s: f64,
    pub partition_s: f64,
    pub total_s: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ParamEcho {
    pub alpha: usize,
    pub beta: usize,
    pub eps_min: f64,
    pub eps_max: f64,
    pub min_ball: usize,
    pub scope: Scope,
    pub seed_mode: SeedMode,
    pub track_visited: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ClusterReport {
    pub dataset: String,
    pub method: BallMethod,
    pub motif: MotifPattern,
    pub status: RunStatus,
    pub seed_edge: Vec<String>,
    pub cluster: Vec<String>,
    pub ball: Vec<String>,
    /// Conductance rounded to three decimals.
    pub phi: Option<f64>,
    /// Exact conductance as `numerator/denominator`.
    pub phi_exact: Option<String>,
    pub motif_cut: u64,
    pub cluster_size: usize,
    pub ball_size: usize,
    /// Motif volume of the cluster.
    pub cluster_volume: u64,
    /// Denominator of the reported conductance.
    pub volume_used: u64,
    pub evaluation: Evaluation,
    pub volume_assumption: AssumptionStatus,
    pub ball_detail: BallDetail,
    pub occurrences: usize,
    pub timings: PhaseTimings,
    pub rng_seed: u64,
    pub params: ParamEcho,
}

impl ClusterReport {
    /// Copy with every timing zeroed, for byte-level comparisons.
    pub fn without_timings(&self) -> Self {
        Self {
            timings: PhaseTimings::default(),
            ..self.clone()
        }
    }
}

/// Rounds to three decimals.
pub fn format_phi(phi: f64) -> f64 {
    (phi * 1000.0).round() / 1000.0
}

fn sort_keys(v: Value) -> Value {
    match v {
        Value::Object(map) => {
            let mut entries: Vec<(String, Value)> = map.into_iter().collect();
            entries.sort_by(|a, b| a.0.cmp(&b.0));
            Value::Object(entries.into_iter().map(|(k, v)| (k, sort_keys(v))).collect())
        }
        Value::Array(items) => Value::Array(items.into_iter().map(sort_keys).collect()),
        other => other,
    }
}

/// Pretty JSON with keys sorted at every level and a trailing newline.
pub fn write_report<W: Write>(report: &ClusterReport, mut w: W) -> Result<()> {
    let value = sort_keys(serde_json::to_value(report)?);
    serde_json::to_writer_pretty(&mut w, &value)?;
    w.write_all(b"\n")?;
    Ok(())
}

pub fn read_report<R: Read>(r: R) -> Result<ClusterReport> {
    Ok(serde_json::from_reader(r)?)
}
