//! Quantile thresholds and the recurrence intervals between exceedances.

use alloc::vec::Vec;

use crate::{Error, Result};

/// Recurrence intervals above one threshold.
#[derive(Debug, Clone, PartialEq)]
pub struct IntervalSample {
    /// Target mean recurrence time, in slots.
    pub tau_q: f64,
    /// Threshold on the normalized volatility.
    pub threshold: f64,
    /// Intervals in slots, each ≥ 1.
    pub raw: Vec<u64>,
    /// `raw[i] / tau_q`.
    pub scaled: Vec<f64>,
    /// Index of the first exceedance in the series.
    pub first_index: usize,
    /// Index of the last exceedance in the series.
    pub last_index: usize,
    /// Length of the series the intervals came from.
    pub series_len: usize,
}

impl IntervalSample {
    /// Number of intervals.
    pub fn len(&self) -> usize {
        self.raw.len()
    }

    /// Whether no interval was found.
    pub fn is_empty(&self) -> bool {
        self.raw.is_empty()
    }

    /// Raw intervals as reals.
    pub fn raw_f64(&self) -> Vec<f64> {
        self.raw.iter().map(|&r| r as f64).collect()
    }
}

/// Number of strict exceedances targeted for mean recurrence `tau_q`: ⌊n/τ_Q⌋.
pub fn target_exceedances(len: usize, tau_q: f64) -> Result<usize> {
    if !(tau_q > 1.0) || !(tau_q < len as f64) {
        return Err(Error::TauOutOfRange { tau_q, len });
    }
    Ok(libm::floor(len as f64 / tau_q) as usize)
}

/// Threshold Q with ⌊n/τ_Q⌋ values strictly above it.
///
/// Q is the (n − ⌊n/τ_Q⌋)-th order statistic (1-based). Ties at Q reduce the
/// exceedance count below the target.
pub fn threshold_for_mean_interval(values: &[f64], tau_q: f64) -> Result<f64> {
    let k = target_exceedances(values.len(), tau_q)?;
    let mut sorted = values.to_vec();
    sorted.sort_unstable_by(f64::total_cmp);
    Ok(sorted[values.len() - k - 1])
}

/// Positions where `values[i] > threshold`.
pub fn exceedance_positions(values: &[f64], threshold: f64) -> Vec<usize> {
    values.iter().enumerate().filter(|(_, &v)| v > threshold).map(|(i, _)| i).collect()
}

/// Successive differences of exceedance positions, in slots.
///
/// Intervals run through day boundaries on the concatenated slot axis.
pub fn extract_intervals(values: &[f64], threshold: f64, tau_q: f64) -> Result<IntervalSample> {
    if !(tau_q > 0.0) {
        return Err(Error::TauOutOfRange { tau_q, len: values.len() });
    }
    let pos = exceedance_positions(values, threshold);
    if pos.len() < 2 {
        return Err(Error::TooFewExceedances { found: pos.len() });
    }
    let raw: Vec<u64> = pos.windows(2).map(|w| (w[1] - w[0]) as u64).collect();
    let scaled = raw.iter().map(|&r| r as f64 / tau_q).collect();
    Ok(IntervalSample {
        tau_q,
        threshold,
        raw,
        scaled,
        first_index: pos[0],
        last_index: pos[pos.len() - 1],
        series_len: values.len(),
    })
}

/// Threshold and intervals for one mean recurrence time.
pub fn sample_for_tau(values: &[f64], tau_q: f64) -> Result<IntervalSample> {
    let q = threshold_for_mean_interval(values, tau_q)?;
    extract_intervals(values, q, tau_q)
}

/// One [`IntervalSample`] per entry of `taus`, sharing a single sort.
pub fn sweep_tau(values: &[f64], taus: &[f64]) -> Result<Vec<IntervalSample>> {
    let mut sorted = values.to_vec();
    sorted.sort_unstable_by(f64::total_cmp);
    taus.iter()
        .map(|&tau_q| {
            let k = target_exceedances(values.len(), tau_q)?;
            extract_intervals(values, sorted[values.len() - k - 1], tau_q)
        })
        .collect()
}
