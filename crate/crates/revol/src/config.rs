//! Command-line arguments and the validated run configuration.

use std::collections::BTreeSet;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use revol_core::pipeline::EvalMode;
use revol_core::predictor::QpGrid;
use revol_core::rolling::{PatternMode, WindowSpec};
use serde::Serialize;

use crate::error::CliError;
use crate::io::{ColumnRef, ColumnSchema};

/// Recurrence-interval analysis of extreme intraday volatility.
#[derive(Debug, Parser)]
#[command(name = "revol", version)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Write raw, deseasonalized and normalized volatility plus the intraday pattern.
    Preprocess(AnalysisArgs),
    /// Write recurrence intervals for every τ_Q.
    Intervals(AnalysisArgs),
    /// Fit and rank the five interval distributions for every τ_Q.
    Fit(AnalysisArgs),
    /// Write analytic and empirical hazard curves.
    Hazard(AnalysisArgs),
    /// Run the hazard-threshold predictor and write ROC curves.
    Predict(AnalysisArgs),
    /// Fit q-exponentials in rolling windows.
    Rolling(AnalysisArgs),
    /// Run every stage and write one JSON report per input.
    Report(AnalysisArgs),
    /// Generate a synthetic price series.
    Simulate(SimulateArgs),
}

impl Command {
    /// Subcommand name as typed on the command line.
    pub fn name(&self) -> &'static str {
        match self {
            Command::Preprocess(_) => "preprocess",
            Command::Intervals(_) => "intervals",
            Command::Fit(_) => "fit",
            Command::Hazard(_) => "hazard",
            Command::Predict(_) => "predict",
            Command::Rolling(_) => "rolling",
            Command::Report(_) => "report",
            Command::Simulate(_) => "simulate",
        }
    }
}

#[derive(Debug, Clone, Args)]
pub struct AnalysisArgs {
    /// Price CSV (day, slot, price); repeat for several files.
    #[arg(long, required = true)]
    pub input: Vec<PathBuf>,
    #[arg(long, default_value_t = 242)]
    pub slots_per_day: u32,
    /// Day column, by zero-based index or header name.
    #[arg(long, default_value = "0")]
    pub day_col: ColumnRef,
    #[arg(long, default_value = "1")]
    pub slot_col: ColumnRef,
    #[arg(long, default_value = "2")]
    pub price_col: ColumnRef,
    /// Mean recurrence times τ_Q in slots.
    #[arg(long, value_delimiter = ',', default_value = "20,25,40,60,80,100")]
    pub tau: Vec<f64>,
    /// Alarm horizons Δt in slots.
    #[arg(long, value_delimiter = ',', default_value = "1")]
    pub delta_t: Vec<usize>,
    /// Fraction of each series used for estimation in `predict`.
    #[arg(long, default_value_t = 0.7)]
    pub split: f64,
    /// Estimate and score `predict` on the full series.
    #[arg(long)]
    pub in_sample: bool,
    /// `distinct` or a comma-separated list of alarm thresholds containing 0 and 1.
    #[arg(long, default_value = "distinct")]
    pub q_p_grid: String,
    /// False-alarm rate at which the detection rate is reported.
    #[arg(long, default_value_t = 0.1)]
    pub a_star: f64,
    /// Rolling window length in slots; overrides --window-months.
    #[arg(long)]
    pub window_len: Option<usize>,
    /// Rolling window step in slots; overrides --step-months.
    #[arg(long)]
    pub window_step: Option<usize>,
    #[arg(long, default_value_t = 48)]
    pub window_months: usize,
    #[arg(long, default_value_t = 1)]
    pub step_months: usize,
    #[arg(long, default_value_t = 21)]
    pub days_per_month: usize,
    /// Minimum intervals for a rolling-window fit.
    #[arg(long, default_value_t = 100)]
    pub min_intervals: usize,
    /// Deseasonalize once over the whole series before rolling.
    #[arg(long)]
    pub global_pattern: bool,
    /// Minimum intervals for a fit outside rolling windows.
    #[arg(long, default_value_t = 100)]
    pub min_samples: usize,
    /// Keep the return from the last slot of one day to the first of the next.
    #[arg(long)]
    pub cross_day: bool,
    /// Drop the first N trading days of every input.
    #[arg(long, default_value_t = 0)]
    pub skip_days: u32,
    /// Skip inputs with fewer trading days than this (after --skip-days).
    #[arg(long, default_value_t = 0)]
    pub min_days: u32,
    /// Recorded in reports; the analysis itself draws no random numbers.
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, default_value = "out")]
    pub out_dir: PathBuf,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum SimKind {
    Qexp,
    Exponential,
    Weibull,
    Clustered,
}

#[derive(Debug, Clone, Args)]
pub struct SimulateArgs {
    #[arg(long, value_enum, default_value_t = SimKind::Qexp)]
    pub kind: SimKind,
    /// Number of events (renewal kinds).
    #[arg(long, default_value_t = 10_000)]
    pub n: usize,
    /// Number of trading days (clustered kind).
    #[arg(long, default_value_t = 250)]
    pub days: u32,
    #[arg(long, default_value_t = 1.3)]
    pub q: f64,
    /// Event rate per slot.
    #[arg(long, default_value_t = 0.02)]
    pub lambda: f64,
    #[arg(long, default_value_t = 0.8)]
    pub zeta: f64,
    /// Weibull scale in slots.
    #[arg(long, default_value_t = 50.0)]
    pub d: f64,
    #[arg(long, default_value_t = 0.002)]
    pub p_enter: f64,
    #[arg(long, default_value_t = 0.01)]
    pub p_exit: f64,
    #[arg(long, default_value_t = 5.0)]
    pub ratio: f64,
    #[arg(long, default_value_t = 0.0)]
    pub intraday_amplitude: f64,
    #[arg(long, default_value_t = 242)]
    pub slots_per_day: u32,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Output CSV; defaults to <out-dir>/simulated.csv.
    #[arg(long)]
    pub output: Option<PathBuf>,
    #[arg(long, default_value = "out")]
    pub out_dir: PathBuf,
}

/// Alarm grid as echoed in reports.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(untagged)]
pub enum GridEcho {
    Policy(&'static str),
    Values(Vec<f64>),
}

/// Validated settings shared by all analysis commands; echoed into every report.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RunConfig {
    pub inputs: Vec<PathBuf>,
    pub slots_per_day: u32,
    pub columns: [String; 3],
    pub taus: Vec<f64>,
    pub delta_ts: Vec<usize>,
    pub eval_mode: &'static str,
    pub train_fraction: Option<f64>,
    pub q_p_grid: GridEcho,
    pub a_star: f64,
    pub window_len: usize,
    pub window_step: usize,
    pub min_intervals: usize,
    pub pattern_mode: &'static str,
    pub min_samples: usize,
    pub cross_day: bool,
    pub skip_days: u32,
    pub min_days: u32,
    pub seed: u64,
    pub out_dir: PathBuf,
    #[serde(skip)]
    pub schema: ColumnSchema,
    #[serde(skip)]
    pub mode: EvalMode,
    #[serde(skip)]
    pub grid: QpGrid,
    #[serde(skip)]
    pub window: WindowSpec,
    #[serde(skip)]
    pub pattern: PatternMode,
}

fn column_echo(c: &ColumnRef) -> String {
    match c {
        ColumnRef::Index(i) => i.to_string(),
        ColumnRef::Name(n) => n.clone(),
    }
}

fn parse_grid(s: &str) -> Result<(QpGrid, GridEcho), CliError> {
    if s.trim() == "distinct" {
        return Ok((QpGrid::Distinct, GridEcho::Policy("distinct")));
    }
    let values = s
        .split(',')
        .map(|v| v.trim().parse::<f64>().map_err(|_| CliError::Config(format!("bad --q-p-grid value {v:?}"))))
        .collect::<Result<Vec<_>, _>>()?;
    if values.iter().any(|v| !(0.0..=1.0).contains(v)) {
        return Err(CliError::Config("--q-p-grid values must lie in [0, 1]".into()));
    }
    if !values.contains(&0.0) || !values.contains(&1.0) {
        return Err(CliError::Config("--q-p-grid must contain 0 and 1".into()));
    }
    Ok((QpGrid::Explicit(values.clone()), GridEcho::Values(values)))
}

/// Output directory of one input: `<out-dir>/<file stem>`.
pub fn input_dir(out_dir: &Path, input: &Path) -> PathBuf {
    let stem = input.file_stem().map_or_else(|| "input".into(), |s| s.to_string_lossy().into_owned());
    out_dir.join(stem)
}

impl RunConfig {
    /// Check every flag before any computation starts.
    pub fn from_args(a: &AnalysisArgs) -> Result<Self, CliError> {
        let bad = |m: &str| Err(CliError::Config(m.into()));
        if a.slots_per_day == 0 {
            return bad("--slots-per-day must be positive");
        }
        if a.tau.is_empty() || a.tau.iter().any(|t| !(*t > 1.0) || !t.is_finite()) {
            return bad("--tau values must be finite and greater than 1");
        }
        if a.delta_t.is_empty() || a.delta_t.contains(&0) {
            return bad("--delta-t values must be positive");
        }
        if !a.in_sample && !(a.split > 0.0 && a.split < 1.0) {
            return bad("--split must lie in (0, 1)");
        }
        if !(0.0..=1.0).contains(&a.a_star) {
            return bad("--a-star must lie in [0, 1]");
        }
        if a.min_samples < 2 || a.min_intervals < 2 {
            return bad("--min-samples and --min-intervals must be at least 2");
        }
        let month = a.days_per_month * a.slots_per_day as usize;
        let window_len = a.window_len.unwrap_or(a.window_months * month);
        let window_step = a.window_step.unwrap_or(a.step_months * month);
        let window = WindowSpec::new(window_len, window_step, a.min_intervals)
            .map_err(|_| CliError::Config("rolling window needs length > step > 0".into()))?;
        let (grid, grid_echo) = parse_grid(&a.q_p_grid)?;
        let mut dirs = BTreeSet::new();
        for input in &a.input {
            if !dirs.insert(input_dir(&a.out_dir, input)) {
                return Err(CliError::Config(format!("two inputs share the output directory of {}", input.display())));
            }
        }
        let mode = if a.in_sample { EvalMode::InSample } else { EvalMode::OutOfSample { train_fraction: a.split } };
        let pattern = if a.global_pattern { PatternMode::Global } else { PatternMode::PerWindow };
        let schema = ColumnSchema { day: a.day_col.clone(), slot: a.slot_col.clone(), price: a.price_col.clone() };
        Ok(Self {
            inputs: a.input.clone(),
            slots_per_day: a.slots_per_day,
            columns: [column_echo(&schema.day), column_echo(&schema.slot), column_echo(&schema.price)],
            taus: a.tau.clone(),
            delta_ts: a.delta_t.clone(),
            eval_mode: mode.name(),
            train_fraction: (!a.in_sample).then_some(a.split),
            q_p_grid: grid_echo,
            a_star: a.a_star,
            window_len,
            window_step,
            min_intervals: a.min_intervals,
            pattern_mode: pattern.name(),
            min_samples: a.min_samples,
            cross_day: a.cross_day,
            skip_days: a.skip_days,
            min_days: a.min_days,
            seed: a.seed,
            out_dir: a.out_dir.clone(),
            schema,
            mode,
            grid,
            window,
            pattern,
        })
    }
}
