//! End-to-end runs: prices → normalized volatility → fit → hazard → ROC.

use alloc::vec::Vec;

use crate::distribution::{DistFamily, DistParams};
use crate::fit::{fit_and_score, DistributionFit, FitConfig};
use crate::predictor::{d_at_false_alarm, hazard_series, roc_curve, HazardSeries, QpGrid, RocResult, Warmup};
use crate::recurrence::{sample_for_tau, IntervalSample};
use crate::series::{PriceSeries, Stage, VolatilitySeries};
use crate::volatility::{deseasonalize, intraday_pattern, log_abs_returns, normalize_by, population_std, IntradayPattern};
use crate::{Error, Result};

/// All intermediate series of the volatility transform.
#[derive(Debug, Clone, PartialEq)]
pub struct Preprocessed {
    /// Absolute log returns ω.
    pub raw: VolatilitySeries,
    /// Intraday pattern A(s).
    pub pattern: IntradayPattern,
    /// ω / A(s).
    pub deseasonalized: VolatilitySeries,
    /// Scale σ used for normalization.
    pub sigma: f64,
    /// Normalized volatility v.
    pub normalized: VolatilitySeries,
}

/// Run the volatility transform over the whole series.
pub fn preprocess(prices: &PriceSeries, cross_day: bool) -> Result<Preprocessed> {
    let raw = log_abs_returns(prices, cross_day)?;
    preprocess_with_training(raw, None)
}

/// Pattern and σ are estimated on the first `train_len` values (all when
/// `None`) and applied to the whole series.
fn preprocess_with_training(raw: VolatilitySeries, train_len: Option<usize>) -> Result<Preprocessed> {
    let n = train_len.unwrap_or(raw.len()).min(raw.len());
    let pattern = intraday_pattern(&raw.slice(0, n))?;
    let deseasonalized = deseasonalize(&raw, &pattern)?;
    let sigma = population_std(&deseasonalized.points()[..n].iter().map(|p| p.value).collect::<Vec<_>>());
    let normalized = normalize_by(&deseasonalized, sigma)?;
    Ok(Preprocessed { raw, pattern, deseasonalized, sigma, normalized })
}

/// q-exponential fit of the intervals for every τ_Q.
pub fn qexp_fits_by_tau(values: &[f64], taus: &[f64], cfg: &FitConfig) -> Result<Vec<DistributionFit>> {
    taus.iter()
        .map(|&tau| {
            let sample = sample_for_tau(values, tau)?;
            fit_and_score(DistFamily::QExp, &sample.scaled, tau, cfg)
        })
        .collect()
}

/// Which part of the series supplies the fit and which part is scored.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum EvalMode {
    /// Fit and score on the full series.
    InSample,
    /// Estimate everything on the leading fraction, score the rest.
    OutOfSample {
        /// Fraction of slots used for estimation, in (0, 1).
        train_fraction: f64,
    },
}

impl Default for EvalMode {
    fn default() -> Self {
        EvalMode::OutOfSample { train_fraction: 0.7 }
    }
}

impl EvalMode {
    /// snake_case tag for reports.
    pub fn name(&self) -> &'static str {
        match self {
            EvalMode::InSample => "in_sample",
            EvalMode::OutOfSample { .. } => "out_of_sample",
        }
    }

    fn train_len(&self, len: usize) -> Result<usize> {
        match *self {
            EvalMode::InSample => Ok(len),
            EvalMode::OutOfSample { train_fraction } => {
                if !(train_fraction > 0.0 && train_fraction < 1.0) {
                    return Err(Error::InvalidConfig("train fraction must lie in (0, 1)"));
                }
                Ok(libm::floor(len as f64 * train_fraction) as usize)
            }
        }
    }
}

/// Settings of a prediction run.
#[derive(Debug, Clone, PartialEq)]
pub struct PredictConfig {
    /// Mean recurrence time defining the event threshold.
    pub tau_q: f64,
    /// Alarm horizon in slots.
    pub delta_t: usize,
    /// Estimation and scoring split.
    pub mode: EvalMode,
    /// Alarm thresholds.
    pub grid: QpGrid,
    /// False-alarm rate at which D is reported.
    pub a_star: f64,
    /// Fit settings.
    pub fit: FitConfig,
    /// Keep overnight returns.
    pub cross_day: bool,
}

impl Default for PredictConfig {
    fn default() -> Self {
        Self {
            tau_q: 100.0,
            delta_t: 1,
            mode: EvalMode::default(),
            grid: QpGrid::default(),
            a_star: 0.1,
            fit: FitConfig::default(),
            cross_day: false,
        }
    }
}

/// Outcome of a prediction run.
#[derive(Debug, Clone, PartialEq)]
pub struct Prediction {
    /// Split used.
    pub mode: EvalMode,
    /// Slots used for estimation.
    pub train_len: usize,
    /// First scored slot.
    pub test_start: usize,
    /// Event threshold Q on normalized volatility.
    pub threshold: f64,
    /// Intervals of the estimation part.
    pub intervals: IntervalSample,
    /// q-exponential fit on the estimation part.
    pub fit: DistributionFit,
    /// Fitted q.
    pub q: f64,
    /// Fitted raw rate λ = λ_x/τ_Q.
    pub lambda: f64,
    /// Event indicators over the full series.
    pub events: Vec<bool>,
    /// Per-slot hazard over the full series.
    pub hazard: HazardSeries,
    /// ROC over the scored part.
    pub roc: RocResult,
    /// D at the configured false-alarm rate, when the curve reaches it.
    pub d_at_a: Option<f64>,
}

/// Prediction from prices: preprocessing is part of the estimation.
pub fn predict_from_prices(prices: &PriceSeries, cfg: &PredictConfig) -> Result<Prediction> {
    let raw = log_abs_returns(prices, cfg.cross_day)?;
    let train_len = cfg.mode.train_len(raw.len())?;
    let pre = preprocess_with_training(raw, Some(train_len))?;
    predict_from_values(&pre.normalized.values(), train_len, cfg)
}

/// Prediction from a volatility series of any stage. Raw input is
/// deseasonalized with a pattern estimated on the estimation part.
pub fn predict_from_volatility(vol: &VolatilitySeries, cfg: &PredictConfig) -> Result<Prediction> {
    let train_len = cfg.mode.train_len(vol.len())?;
    let values = if vol.stage() == Stage::Raw {
        preprocess_with_training(vol.clone(), Some(train_len))?.normalized.values()
    } else {
        vol.values()
    };
    predict_from_values(&values, train_len, cfg)
}

fn predict_from_values(v: &[f64], train_len: usize, cfg: &PredictConfig) -> Result<Prediction> {
    let intervals = sample_for_tau(&v[..train_len], cfg.tau_q)?;
    let fit = fit_and_score(DistFamily::QExp, &intervals.scaled, cfg.tau_q, &cfg.fit)?;
    let DistParams::QExp { q, lambda_x } = fit.params else {
        return Err(Error::InvalidParams("expected a q-exponential fit"));
    };
    let lambda = lambda_x / cfg.tau_q;
    let threshold = intervals.threshold;
    let events: Vec<bool> = v.iter().map(|&x| x > threshold).collect();
    let hazard = hazard_series(&events, q, lambda, cfg.delta_t as u64, Warmup::default())?;
    let test_start = if matches!(cfg.mode, EvalMode::InSample) { 0 } else { train_len };
    let roc = roc_curve(&hazard.values[test_start..], &events[test_start..], cfg.delta_t, &cfg.grid)?;
    let d_at_a = d_at_false_alarm(&roc, cfg.a_star).ok();
    Ok(Prediction { mode: cfg.mode, train_len, test_start, threshold, intervals, fit, q, lambda, events, hazard, roc, d_at_a })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::synthetic::{clustered_prices, ClusteredSpec};

    #[test]
    fn preprocess_gives_unit_scale() {
        let spec = ClusteredSpec { slots_per_day: 20, intraday_amplitude: 0.5, ..ClusteredSpec::default() };
        let prices = clustered_prices(&spec, 50, 1).unwrap();
        let pre = preprocess(&prices, false).unwrap();
        assert_eq!(pre.raw.len(), 50 * 19);
        assert_eq!(pre.normalized.stage(), Stage::Normalized);
        assert!((population_std(&pre.normalized.values()) - 1.0).abs() < 1e-12);
    }

    #[test]
    fn split_fraction_is_validated() {
        let spec = ClusteredSpec { slots_per_day: 20, ..ClusteredSpec::default() };
        let prices = clustered_prices(&spec, 50, 1).unwrap();
        let cfg = PredictConfig { mode: EvalMode::OutOfSample { train_fraction: 1.0 }, ..PredictConfig::default() };
        assert!(matches!(predict_from_prices(&prices, &cfg), Err(Error::InvalidConfig(_))));
    }
}
