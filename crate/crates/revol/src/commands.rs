//! One function per subcommand. Analysis commands run one thread per input.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use revol_core::fit::{fit_all_and_rank, fit_and_score, FitConfig};
use revol_core::hazard::{hazard_curve, HazardCurve, DEFAULT_MIN_COUNT};
use revol_core::pipeline::{predict_from_prices, preprocess, PredictConfig, Preprocessed, Prediction};
use revol_core::recurrence::sweep_tau;
use revol_core::rolling::{rolling_fit, ParamTrajectory};
use revol_core::synthetic::{clustered_prices, prices_from_events, renewal_event_series, ClusteredSpec, GeneratorKind, GeneratorSpec};
use revol_core::volatility::log_abs_returns;
use revol_core::{DistFamily, DistParams, Error as CoreError, IntervalSample, PriceSeries};

use crate::config::{input_dir, AnalysisArgs, Cli, Command, RunConfig, SimKind, SimulateArgs};
use crate::error::CliError;
use crate::io::{load_price_csv, write_prices, write_table, write_volatility, Cell};
use crate::report::{
    write_json, Envelope, FamilyFailure, FitJson, FitResult, FullReport, HazardSummary, IntervalSummary, PredictSummary,
    PreprocessSummary, RollingPoint, RollingSummary,
};

/// Largest number of rows in a hazard-curve CSV.
const HAZARD_POINTS: u64 = 500;

/// Run a parsed command line.
pub fn run(cli: &Cli) -> Result<(), CliError> {
    let name = cli.command.name();
    match &cli.command {
        Command::Simulate(a) => simulate(a),
        Command::Preprocess(a)
        | Command::Intervals(a)
        | Command::Fit(a)
        | Command::Hazard(a)
        | Command::Predict(a)
        | Command::Rolling(a)
        | Command::Report(a) => run_analysis(name, a),
    }
}

fn run_analysis(command: &str, args: &AnalysisArgs) -> Result<(), CliError> {
    let cfg = RunConfig::from_args(args)?;
    let outcomes: Vec<Result<(), CliError>> = std::thread::scope(|s| {
        let handles: Vec<_> = cfg.inputs.iter().map(|input| s.spawn(|| process_input(command, &cfg, input))).collect();
        handles.into_iter().map(|h| h.join().expect("input worker panicked")).collect()
    });
    // Report every failure, return the first.
    let mut first = None;
    for (input, outcome) in cfg.inputs.iter().zip(outcomes) {
        if let Err(e) = outcome {
            if first.is_some() {
                eprintln!("revol: {}: {e}", input.display());
            } else {
                first = Some(e);
            }
        }
    }
    first.map_or(Ok(()), Err)
}

fn load(cfg: &RunConfig, input: &Path) -> Result<Option<PriceSeries>, CliError> {
    let prices = load_price_csv(input, &cfg.schema, cfg.slots_per_day)?;
    let kept: Vec<_> = prices.records().iter().copied().filter(|r| r.day >= cfg.skip_days).collect();
    let mut days = kept.iter().map(|r| r.day).collect::<Vec<_>>();
    days.dedup();
    if (days.len() as u64) < u64::from(cfg.min_days) {
        eprintln!("revol: {}: skipped, {} trading days < --min-days {}", input.display(), days.len(), cfg.min_days);
        return Ok(None);
    }
    let prices = PriceSeries::new(kept, cfg.slots_per_day).map_err(CliError::core(input.display().to_string()))?;
    Ok(Some(prices))
}

fn process_input(command: &str, cfg: &RunConfig, input: &Path) -> Result<(), CliError> {
    let Some(prices) = load(cfg, input)? else { return Ok(()) };
    let dir = input_dir(&cfg.out_dir, input);
    let ctx = |stage: &str| format!("{}: {stage}", input.display());
    let fit_cfg = FitConfig { min_samples: cfg.min_samples, ..FitConfig::default() };
    match command {
        "preprocess" => {
            let pre = preprocess(&prices, cfg.cross_day).map_err(CliError::core(ctx("preprocess")))?;
            write_preprocess(&dir, &pre)
        }
        "intervals" => {
            let samples = intervals(&prices, cfg).map_err(CliError::core(ctx("intervals")))?;
            for s in &samples {
                let rows: Vec<Vec<Cell>> = s.raw.iter().zip(&s.scaled).map(|(&r, &x)| vec![r.into(), x.into()]).collect();
                write_table(&dir.join(format!("intervals_tau{}.csv", s.tau_q)), &["interval", "x"], &rows)?;
            }
            Ok(())
        }
        "fit" => {
            let fits = fits(&prices, cfg, &fit_cfg).map_err(CliError::core(ctx("fit")))?;
            write_json(&dir.join("fits.json"), &Envelope::new(command, cfg, input, fits))
        }
        "hazard" => {
            let (curves, _) = hazards(&prices, cfg, &fit_cfg).map_err(CliError::core(ctx("hazard")))?;
            for (tau, curve) in &curves {
                let rows: Vec<Vec<Cell>> = curve
                    .points
                    .iter()
                    .map(|p| vec![p.t.into(), p.w_analytic.into(), p.w_empirical.into(), p.n_tail.into()])
                    .collect();
                let name = format!("hazard_tau{tau}_dt{}.csv", curve.delta_t);
                write_table(&dir.join(name), &["t", "w_analytic", "w_empirical", "n_tail"], &rows)?;
            }
            Ok(())
        }
        "predict" => {
            let runs = predictions(&prices, cfg, &fit_cfg).map_err(CliError::core(ctx("predict")))?;
            for (p, cfg_run) in &runs {
                let rows: Vec<Vec<Cell>> = p.roc.points.iter().map(|r| vec![r.q_p.into(), r.a.into(), r.d.into()]).collect();
                let name = format!("roc_tau{}_dt{}.csv", cfg_run.tau_q, cfg_run.delta_t);
                write_table(&dir.join(name), &["q_p", "a", "d"], &rows)?;
            }
            let summary: Vec<PredictSummary> = runs.iter().map(|(p, c)| predict_summary(p, c)).collect();
            write_json(&dir.join("predict.json"), &Envelope::new(command, cfg, input, summary))
        }
        "rolling" => {
            let traj = rolling(&prices, cfg, &fit_cfg).map_err(CliError::core(ctx("rolling")))?;
            write_trajectory(&dir.join("trajectory.csv"), &traj)
        }
        "report" => {
            let report = full_report(&prices, cfg, &fit_cfg, &ctx)?;
            write_json(&dir.join("report.json"), &Envelope::new(command, cfg, input, report))
        }
        other => unreachable!("unknown analysis command {other}"),
    }
}

fn write_preprocess(dir: &Path, pre: &Preprocessed) -> Result<(), CliError> {
    write_volatility(&dir.join("volatility.csv"), &pre.raw, &pre.deseasonalized, &pre.normalized)?;
    let rows: Vec<Vec<Cell>> =
        pre.pattern.levels.iter().enumerate().map(|(s, &level)| vec![s.into(), level.into()]).collect();
    write_table(&dir.join("pattern.csv"), &["slot", "level"], &rows)?;
    Ok(())
}

fn intervals(prices: &PriceSeries, cfg: &RunConfig) -> Result<Vec<IntervalSample>, CoreError> {
    let pre = preprocess(prices, cfg.cross_day)?;
    sweep_tau(&pre.normalized.values(), &cfg.taus)
}

fn fits(prices: &PriceSeries, cfg: &RunConfig, fit_cfg: &FitConfig) -> Result<Vec<FitResult>, CoreError> {
    intervals(prices, cfg)?
        .iter()
        .map(|s| {
            let ranking = fit_all_and_rank(&s.scaled, s.tau_q, fit_cfg)?;
            Ok(FitResult {
                tau_q: s.tau_q,
                threshold: s.threshold,
                n_intervals: s.len(),
                best_family: ranking.best().family.name(),
                fits: ranking.fits.iter().map(FitJson::from).collect(),
                failures: ranking
                    .failures
                    .iter()
                    .map(|(f, e)| FamilyFailure { family: f.name(), error: e.to_string() })
                    .collect(),
            })
        })
        .collect()
}

/// Evenly spaced integer times from 0 to the longest interval.
fn hazard_grid(sample: &IntervalSample) -> Vec<f64> {
    let t_end = sample.raw.iter().copied().max().unwrap_or(0);
    let step = t_end.div_ceil(HAZARD_POINTS).max(1);
    (0..=t_end / step).map(|k| (k * step) as f64).collect()
}

type Hazards = (Vec<(f64, HazardCurve)>, Vec<HazardSummary>);

fn hazards(prices: &PriceSeries, cfg: &RunConfig, fit_cfg: &FitConfig) -> Result<Hazards, CoreError> {
    let mut curves = Vec::new();
    let mut summaries = Vec::new();
    for s in intervals(prices, cfg)? {
        let fit = fit_and_score(DistFamily::QExp, &s.scaled, s.tau_q, fit_cfg)?;
        let DistParams::QExp { q, lambda_x } = fit.params else { unreachable!("q-exponential fit") };
        let lambda = lambda_x / s.tau_q;
        let grid = hazard_grid(&s);
        for &dt in &cfg.delta_ts {
            curves.push((s.tau_q, hazard_curve(q, lambda, &s.raw, dt as f64, &grid, DEFAULT_MIN_COUNT)?));
        }
        summaries.push(HazardSummary {
            tau_q: s.tau_q,
            q,
            lambda,
            lambda_x,
            delta_t: cfg.delta_ts.clone(),
            t_max: grid.last().copied().unwrap_or(0.0),
        });
    }
    Ok((curves, summaries))
}

fn predictions(prices: &PriceSeries, cfg: &RunConfig, fit_cfg: &FitConfig) -> Result<Vec<(Prediction, PredictConfig)>, CoreError> {
    let mut out = Vec::new();
    for &tau_q in &cfg.taus {
        for &delta_t in &cfg.delta_ts {
            let run = PredictConfig {
                tau_q,
                delta_t,
                mode: cfg.mode,
                grid: cfg.grid.clone(),
                a_star: cfg.a_star,
                fit: *fit_cfg,
                cross_day: cfg.cross_day,
            };
            out.push((predict_from_prices(prices, &run)?, run));
        }
    }
    Ok(out)
}

fn predict_summary(p: &Prediction, run: &PredictConfig) -> PredictSummary {
    PredictSummary {
        tau_q: run.tau_q,
        delta_t: run.delta_t,
        q: p.q,
        lambda: p.lambda,
        threshold: p.threshold,
        train_len: p.train_len,
        test_start: p.test_start,
        n_scored: p.events.len() - p.test_start,
        auc: p.roc.auc,
        d_at_a: BTreeMap::from([(run.a_star.to_string(), p.d_at_a)]),
    }
}

fn rolling(prices: &PriceSeries, cfg: &RunConfig, fit_cfg: &FitConfig) -> Result<ParamTrajectory, CoreError> {
    let raw = log_abs_returns(prices, cfg.cross_day)?;
    rolling_fit(&raw, &cfg.taus, cfg.window, cfg.pattern, fit_cfg)
}

fn write_trajectory(path: &Path, traj: &ParamTrajectory) -> Result<(), CliError> {
    let mut header = vec!["window_start".to_string(), "window_end".to_string(), "q_mean".to_string()];
    header.extend(traj.taus.iter().map(|t| format!("q_tau{t}")));
    header.extend(traj.taus.iter().map(|t| format!("lambda_x_tau{t}")));
    let header: Vec<&str> = header.iter().map(String::as_str).collect();
    let rows: Vec<Vec<Cell>> = traj
        .points
        .iter()
        .map(|p| {
            let mut row = vec![p.window_start.into(), p.window_end.into(), p.q_mean.into()];
            row.extend(p.q.iter().map(|&v| Cell::from(v)));
            row.extend(p.lambda_x.iter().map(|&v| Cell::from(v)));
            row
        })
        .collect();
    Ok(write_table(path, &header, &rows)?)
}

fn full_report(
    prices: &PriceSeries,
    cfg: &RunConfig,
    fit_cfg: &FitConfig,
    ctx: &dyn Fn(&str) -> String,
) -> Result<FullReport, CliError> {
    let pre = preprocess(prices, cfg.cross_day).map_err(CliError::core(ctx("preprocess")))?;
    let mut days: Vec<u32> = prices.records().iter().map(|r| r.day).collect();
    days.dedup();
    let preprocess = PreprocessSummary {
        n_prices: prices.len(),
        n_returns: pre.raw.len(),
        n_days: days.len(),
        sigma: pre.sigma,
        pattern: pre.pattern.levels.clone(),
    };
    let samples = sweep_tau(&pre.normalized.values(), &cfg.taus).map_err(CliError::core(ctx("intervals")))?;
    let intervals = samples
        .iter()
        .map(|s| IntervalSummary {
            tau_q: s.tau_q,
            threshold: s.threshold,
            n_intervals: s.len(),
            mean_interval: s.raw.iter().sum::<u64>() as f64 / s.len() as f64,
        })
        .collect();
    let fits = fits(prices, cfg, fit_cfg).map_err(CliError::core(ctx("fit")))?;
    let (_, hazard) = hazards(prices, cfg, fit_cfg).map_err(CliError::core(ctx("hazard")))?;
    let predict = predictions(prices, cfg, fit_cfg)
        .map_err(CliError::core(ctx("predict")))?
        .iter()
        .map(|(p, run)| predict_summary(p, run))
        .collect();
    let (rolling, rolling_skipped) = if pre.raw.len() < cfg.window_len {
        (None, Some(format!("series has {} returns, window needs {}", pre.raw.len(), cfg.window_len)))
    } else {
        let traj = rolling(prices, cfg, fit_cfg).map_err(CliError::core(ctx("rolling")))?;
        let summary = RollingSummary {
            windows: traj.points.len(),
            window_len: cfg.window_len,
            window_step: cfg.window_step,
            taus: traj.taus.clone(),
            points: traj
                .points
                .into_iter()
                .map(|p| RollingPoint {
                    window_start: p.window_start,
                    window_end: p.window_end,
                    q_mean: p.q_mean,
                    q: p.q,
                    lambda_x: p.lambda_x,
                })
                .collect(),
        };
        (Some(summary), None)
    };
    Ok(FullReport { preprocess, intervals, fits, hazard, predict, rolling, rolling_skipped })
}

fn simulate(a: &SimulateArgs) -> Result<(), CliError> {
    let path: PathBuf = a.output.clone().unwrap_or_else(|| a.out_dir.join("simulated.csv"));
    let ctx = CliError::core("simulate");
    let prices = match a.kind {
        SimKind::Clustered => {
            let spec = ClusteredSpec {
                p_enter: a.p_enter,
                p_exit: a.p_exit,
                ratio: a.ratio,
                intraday_amplitude: a.intraday_amplitude,
                slots_per_day: a.slots_per_day,
            };
            clustered_prices(&spec, a.days, a.seed).map_err(ctx)?
        }
        kind => {
            let kind = match kind {
                SimKind::Qexp => GeneratorKind::QExpRenewal { q: a.q, lambda: a.lambda },
                SimKind::Exponential => GeneratorKind::ExponentialRenewal { lambda: a.lambda },
                _ => GeneratorKind::Weibull2Renewal { zeta: a.zeta, d: a.d },
            };
            let events = renewal_event_series(&GeneratorSpec { kind, n: a.n, seed: a.seed }).map_err(CliError::core("simulate"))?;
            prices_from_events(&events, a.slots_per_day, a.seed).map_err(ctx)?
        }
    };
    write_prices(&path, &prices)?;
    Ok(())
}
