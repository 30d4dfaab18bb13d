//! q-exponential parameters in moving windows and their dependence on τ_Q.

use alloc::vec::Vec;

use crate::distribution::{DistFamily, DistParams};
use crate::fit::{fit_and_score, FitConfig};
use crate::recurrence::sample_for_tau;
use crate::series::{Stage, VolatilitySeries};
use crate::volatility::{deseasonalize, intraday_pattern};
use crate::{Error, Result};

/// Moving-window layout in slots.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct WindowSpec {
    /// Window length.
    pub window_len: usize,
    /// Shift between consecutive windows.
    pub step: usize,
    /// Fewer intervals than this leave the entry for that τ_Q absent.
    pub min_intervals: usize,
}

impl WindowSpec {
    /// Validated spec; requires `window_len > step > 0`.
    pub fn new(window_len: usize, step: usize, min_intervals: usize) -> Result<Self> {
        if step == 0 || window_len <= step {
            return Err(Error::InvalidConfig("window spec needs window_len > step > 0"));
        }
        Ok(Self { window_len, step, min_intervals })
    }

    /// Number of windows over a series of `len` slots.
    pub fn count(&self, len: usize) -> usize {
        if len < self.window_len {
            0
        } else {
            (len - self.window_len) / self.step + 1
        }
    }
}

/// Where the intraday pattern of raw volatility is estimated.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum PatternMode {
    /// Separately inside each window.
    #[default]
    PerWindow,
    /// Once over the whole series.
    Global,
}

impl PatternMode {
    /// snake_case tag for reports.
    pub fn name(self) -> &'static str {
        match self {
            PatternMode::PerWindow => "per_window",
            PatternMode::Global => "global",
        }
    }
}

/// Fitted parameters of one window.
#[derive(Debug, Clone, PartialEq)]
pub struct WindowPoint {
    /// Index of the first slot in the window.
    pub window_start: usize,
    /// Index of the last slot in the window.
    pub window_end: usize,
    /// Mean of q over the τ_Q values that could be fitted.
    pub q_mean: Option<f64>,
    /// q per τ_Q.
    pub q: Vec<Option<f64>>,
    /// λ_x per τ_Q.
    pub lambda_x: Vec<Option<f64>>,
}

/// Window-by-window parameter evolution.
#[derive(Debug, Clone, PartialEq)]
pub struct ParamTrajectory {
    /// τ_Q values, in the order of the per-τ columns.
    pub taus: Vec<f64>,
    /// One point per window.
    pub points: Vec<WindowPoint>,
}

fn window_values(vol: &VolatilitySeries, start: usize, end: usize, global: &Option<VolatilitySeries>) -> Result<Vec<f64>> {
    if let Some(g) = global {
        return Ok(g.points()[start..end].iter().map(|p| p.value).collect());
    }
    let win = vol.slice(start, end);
    if win.stage() == Stage::Raw {
        let pattern = intraday_pattern(&win)?;
        Ok(deseasonalize(&win, &pattern)?.values())
    } else {
        Ok(win.values())
    }
}

/// Fit the q-exponential in every window for every τ_Q.
///
/// Raw volatility is deseasonalized per window or globally according to
/// `mode`; deseasonalized or normalized input is used as is. Thresholds are
/// recomputed inside each window. Scaling by σ is skipped because it moves
/// neither the quantile threshold nor the exceedance positions.
pub fn rolling_fit(vol: &VolatilitySeries, taus: &[f64], spec: WindowSpec, mode: PatternMode, cfg: &FitConfig) -> Result<ParamTrajectory> {
    if vol.len() < spec.window_len {
        return Err(Error::TooShort { needed: spec.window_len, found: vol.len() });
    }
    if spec.step == 0 || spec.window_len == 0 {
        return Err(Error::InvalidConfig("window spec needs window_len > 0 and step > 0"));
    }
    let global = match (mode, vol.stage()) {
        (PatternMode::Global, Stage::Raw) => Some(deseasonalize(vol, &intraday_pattern(vol)?)?),
        _ => None,
    };
    let fit_cfg = FitConfig { min_samples: spec.min_intervals.max(2), ..*cfg };
    let mut points = Vec::with_capacity(spec.count(vol.len()));
    for w in 0..spec.count(vol.len()) {
        let start = w * spec.step;
        let end = start + spec.window_len;
        let values = window_values(vol, start, end, &global)?;
        let mut q = Vec::with_capacity(taus.len());
        let mut lambda_x = Vec::with_capacity(taus.len());
        for &tau in taus {
            let fitted = sample_for_tau(&values, tau)
                .ok()
                .filter(|s| s.len() >= spec.min_intervals)
                .and_then(|s| fit_and_score(DistFamily::QExp, &s.scaled, tau, &fit_cfg).ok());
            match fitted.map(|f| f.params) {
                Some(DistParams::QExp { q: qq, lambda_x: l }) => {
                    q.push(Some(qq));
                    lambda_x.push(Some(l));
                }
                _ => {
                    q.push(None);
                    lambda_x.push(None);
                }
            }
        }
        let present: Vec<f64> = q.iter().flatten().copied().collect();
        let q_mean = (!present.is_empty()).then(|| present.iter().sum::<f64>() / present.len() as f64);
        points.push(WindowPoint { window_start: start, window_end: end - 1, q_mean, q, lambda_x });
    }
    Ok(ParamTrajectory { taus: taus.to_vec(), points })
}

/// Ordinary least-squares line.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LinearFit {
    /// Slope.
    pub slope: f64,
    /// Intercept.
    pub intercept: f64,
    /// Standard error of the slope.
    pub stderr: f64,
}

/// OLS regression of `values` on `taus`.
pub fn slope_vs_tau(values: &[f64], taus: &[f64]) -> Result<LinearFit> {
    if values.len() != taus.len() {
        return Err(Error::LengthMismatch { left: values.len(), right: taus.len() });
    }
    let n = values.len();
    if n < 3 {
        return Err(Error::TooFewPoints { needed: 3, found: n });
    }
    let nf = n as f64;
    let x_mean = taus.iter().sum::<f64>() / nf;
    // Shifting y by its first value keeps a constant series exactly flat.
    let y0 = values[0];
    let y_mean = values.iter().map(|y| y - y0).sum::<f64>() / nf;
    let (mut sxx, mut sxy) = (0.0, 0.0);
    for (&x, &y) in taus.iter().zip(values) {
        sxx += (x - x_mean) * (x - x_mean);
        sxy += (x - x_mean) * (y - y0);
    }
    if sxx == 0.0 {
        return Err(Error::DegenerateSample);
    }
    let slope = sxy / sxx;
    let intercept = y0 + y_mean - slope * x_mean;
    let ssr: f64 = taus
        .iter()
        .zip(values)
        .map(|(&x, &y)| {
            let r = y - intercept - slope * x;
            r * r
        })
        .sum();
    let stderr = libm::sqrt(ssr / (nf - 2.0) / sxx);
    Ok(LinearFit { slope, intercept, stderr })
}
