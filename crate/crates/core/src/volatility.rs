//! Absolute log-returns, intraday deseasonalization and unit-variance scaling.

use alloc::vec;
use alloc::vec::Vec;

use crate::series::{PriceSeries, Stage, VolPoint, VolatilitySeries};
use crate::{Error, Result};

/// Mean volatility per intraday slot.
#[derive(Debug, Clone, PartialEq)]
pub struct IntradayPattern {
    /// `levels[s]` is the mean of ω over the days where slot `s` was observed,
    /// `None` when it never was.
    pub levels: Vec<Option<f64>>,
    /// Number of distinct days contributing.
    pub day_count: usize,
}

impl IntradayPattern {
    /// Slots per day the pattern was built for.
    pub fn slots_per_day(&self) -> u32 {
        self.levels.len() as u32
    }
}

/// ω(t) = |ln p(t) − ln p(t−1)| over consecutive records.
///
/// With `cross_day == false` a return whose two prices sit on different days
/// is dropped, so each day loses its first value.
pub fn log_abs_returns(prices: &PriceSeries, cross_day: bool) -> Result<VolatilitySeries> {
    let records = prices.records();
    if records.len() < 2 {
        return Err(Error::TooShort { needed: 2, found: records.len() });
    }
    let points = records
        .windows(2)
        .filter(|w| cross_day || w[0].day == w[1].day)
        .map(|w| VolPoint {
            day: w[1].day,
            slot: w[1].slot,
            value: (libm::log(w[1].price) - libm::log(w[0].price)).abs(),
        })
        .collect();
    VolatilitySeries::new(points, Stage::Raw, prices.slots_per_day())
}

/// Per-slot average of ω across days.
pub fn intraday_pattern(vol: &VolatilitySeries) -> Result<IntradayPattern> {
    if vol.is_empty() {
        return Err(Error::EmptySeries);
    }
    let slots = vol.slots_per_day() as usize;
    let mut sums = vec![0.0; slots];
    let mut counts = vec![0usize; slots];
    let mut day_count = 0;
    let mut last_day = None;
    for p in vol.points() {
        sums[p.slot as usize] += p.value;
        counts[p.slot as usize] += 1;
        if last_day != Some(p.day) {
            day_count += 1;
            last_day = Some(p.day);
        }
    }
    let levels = sums.iter().zip(&counts).map(|(&s, &c)| (c > 0).then(|| s / c as f64)).collect();
    Ok(IntradayPattern { levels, day_count })
}

/// ω′ = ω / A(slot). A slot whose mean is exactly zero maps to 0.
pub fn deseasonalize(vol: &VolatilitySeries, pattern: &IntradayPattern) -> Result<VolatilitySeries> {
    if pattern.slots_per_day() != vol.slots_per_day() {
        return Err(Error::SlotsPerDayMismatch { pattern: pattern.slots_per_day(), series: vol.slots_per_day() });
    }
    let mut out = Vec::with_capacity(vol.len());
    for p in vol.points() {
        let level = pattern.levels[p.slot as usize].ok_or(Error::MissingPatternSlot { slot: p.slot })?;
        out.push(if level == 0.0 { 0.0 } else { p.value / level });
    }
    Ok(vol.with_values(Stage::Deseasonalized, out.into_iter()))
}

/// Population standard deviation √(⟨x²⟩ − ⟨x⟩²), accumulated around the mean.
pub fn population_std(values: &[f64]) -> f64 {
    if values.is_empty() {
        return 0.0;
    }
    let n = values.len() as f64;
    let mean = values.iter().sum::<f64>() / n;
    let var = values.iter().map(|v| (v - mean) * (v - mean)).sum::<f64>() / n;
    libm::sqrt(var)
}

/// v = ω′ / σ(ω′), without centering.
pub fn normalize(vol: &VolatilitySeries) -> Result<VolatilitySeries> {
    let sigma = population_std(&vol.values());
    normalize_by(vol, sigma)
}

/// Divide by a caller-supplied σ, e.g. one estimated on a training window.
pub fn normalize_by(vol: &VolatilitySeries, sigma: f64) -> Result<VolatilitySeries> {
    if !(sigma > 0.0) || !sigma.is_finite() {
        return Err(Error::ZeroVariance);
    }
    Ok(vol.with_values(Stage::Normalized, vol.points().iter().map(|p| p.value / sigma)))
}
