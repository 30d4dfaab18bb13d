//! JSON documents written by the analysis commands.

use std::collections::BTreeMap;
use std::path::Path;

use revol_core::fit::DistributionFit;
use revol_core::DistParams;
use serde::ser::{SerializeMap, Serializer};
use serde::Serialize;

use crate::config::RunConfig;
use crate::error::CliError;
use crate::io::write_atomic;

/// Name written into every report.
pub const TOOL: &str = "revol";

/// Which part of the data each stage was estimated or scored on.
#[derive(Debug, Clone, Serialize)]
pub struct Provenance {
    pub preprocess: &'static str,
    pub fit: &'static str,
    pub hazard: &'static str,
    pub predict: &'static str,
    pub train_fraction: Option<f64>,
    pub rolling_pattern: &'static str,
    pub cross_day: bool,
}

impl Provenance {
    pub fn of(cfg: &RunConfig) -> Self {
        Self {
            preprocess: "full_series",
            fit: "in_sample",
            hazard: "in_sample",
            predict: cfg.eval_mode,
            train_fraction: cfg.train_fraction,
            rolling_pattern: cfg.pattern_mode,
            cross_day: cfg.cross_day,
        }
    }
}

/// Common wrapper of every JSON document.
#[derive(Debug, Serialize)]
pub struct Envelope<'a, T: Serialize> {
    pub tool: &'static str,
    pub version: &'static str,
    pub command: &'a str,
    pub input: String,
    pub seed: u64,
    pub config: &'a RunConfig,
    pub provenance: Provenance,
    pub results: T,
}

impl<'a, T: Serialize> Envelope<'a, T> {
    pub fn new(command: &'a str, cfg: &'a RunConfig, input: &Path, results: T) -> Self {
        Self {
            tool: TOOL,
            version: env!("CARGO_PKG_VERSION"),
            command,
            input: input.display().to_string(),
            seed: cfg.seed,
            config: cfg,
            provenance: Provenance::of(cfg),
            results,
        }
    }
}

/// Pretty JSON with a trailing newline, written atomically.
pub fn write_json<T: Serialize>(path: &Path, value: &T) -> Result<(), CliError> {
    let mut bytes = serde_json::to_vec_pretty(value)
        .map_err(|source| CliError::Json { path: path.display().to_string(), source })?;
    bytes.push(b'\n');
    Ok(write_atomic(path, &bytes)?)
}

/// Parameters as a JSON object in their conventional order.
#[derive(Debug, Clone, Copy)]
pub struct ParamsJson(pub DistParams);

impl Serialize for ParamsJson {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let values = self.0.named_values();
        let mut map = s.serialize_map(Some(values.len()))?;
        for (k, v) in values {
            map.serialize_entry(k, &v)?;
        }
        map.end()
    }
}

/// `{family, params, log_likelihood, ks, n, tau_q, diagnostics}`.
#[derive(Debug, Clone, Serialize)]
pub struct FitJson {
    pub family: &'static str,
    pub params: ParamsJson,
    pub log_likelihood: f64,
    pub ks: f64,
    pub n: usize,
    pub tau_q: f64,
    pub diagnostics: Vec<&'static str>,
}

impl From<&DistributionFit> for FitJson {
    fn from(f: &DistributionFit) -> Self {
        Self {
            family: f.family.name(),
            params: ParamsJson(f.params),
            log_likelihood: f.log_likelihood,
            ks: f.ks,
            n: f.n,
            tau_q: f.tau_q,
            diagnostics: f.diagnostics.iter().map(|d| d.name()).collect(),
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct PreprocessSummary {
    pub n_prices: usize,
    pub n_returns: usize,
    pub n_days: usize,
    pub sigma: f64,
    pub pattern: Vec<Option<f64>>,
}

#[derive(Debug, Clone, Serialize)]
pub struct IntervalSummary {
    pub tau_q: f64,
    pub threshold: f64,
    pub n_intervals: usize,
    pub mean_interval: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct FamilyFailure {
    pub family: &'static str,
    pub error: String,
}

#[derive(Debug, Clone, Serialize)]
pub struct FitResult {
    pub tau_q: f64,
    pub threshold: f64,
    pub n_intervals: usize,
    pub best_family: &'static str,
    pub fits: Vec<FitJson>,
    pub failures: Vec<FamilyFailure>,
}

#[derive(Debug, Clone, Serialize)]
pub struct HazardSummary {
    pub tau_q: f64,
    pub q: f64,
    pub lambda: f64,
    pub lambda_x: f64,
    pub delta_t: Vec<usize>,
    pub t_max: f64,
}

/// One (τ_Q, Δt) prediction run.
#[derive(Debug, Clone, Serialize)]
pub struct PredictSummary {
    pub tau_q: f64,
    pub delta_t: usize,
    pub q: f64,
    pub lambda: f64,
    pub threshold: f64,
    pub train_len: usize,
    pub test_start: usize,
    pub n_scored: usize,
    pub auc: f64,
    /// D at the configured false-alarm rate, keyed by that rate.
    pub d_at_a: BTreeMap<String, Option<f64>>,
}

#[derive(Debug, Clone, Serialize)]
pub struct RollingSummary {
    pub windows: usize,
    pub window_len: usize,
    pub window_step: usize,
    pub taus: Vec<f64>,
    pub points: Vec<RollingPoint>,
}

#[derive(Debug, Clone, Serialize)]
pub struct RollingPoint {
    pub window_start: usize,
    pub window_end: usize,
    pub q_mean: Option<f64>,
    pub q: Vec<Option<f64>>,
    pub lambda_x: Vec<Option<f64>>,
}

/// Everything `report` computes for one input.
#[derive(Debug, Clone, Serialize)]
pub struct FullReport {
    pub preprocess: PreprocessSummary,
    pub intervals: Vec<IntervalSummary>,
    pub fits: Vec<FitResult>,
    pub hazard: Vec<HazardSummary>,
    pub predict: Vec<PredictSummary>,
    pub rolling: Option<RollingSummary>,
    pub rolling_skipped: Option<String>,
}
