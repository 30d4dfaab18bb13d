//! Threshold alarms on hazard probabilities, scored against realized events.
//!
//! `W[i]` is the probability of an event in slots (i, i+Δt] given the time
//! elapsed since the most recent event at or before slot i. An alarm at slot
//! i is raised when `W[i] ≥ Q_p` and is scored against the events in
//! (i, i+Δt]; the last Δt slots cannot be scored.

use alloc::vec::Vec;

use crate::hazard::hazard_qexp;
use crate::{Error, Result};

/// Treatment of slots that precede the first event.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Warmup {
    /// Elapsed time counts from the start of the series.
    #[default]
    FromSeriesStart,
}

/// Per-slot hazard probabilities.
#[derive(Debug, Clone, PartialEq)]
pub struct HazardSeries {
    /// W(Δt|t) for every slot.
    pub values: Vec<f64>,
    /// Elapsed time t used at every slot.
    pub elapsed: Vec<u64>,
    /// Number of leading slots computed under the warmup policy.
    pub warmup_len: usize,
}

/// Per-slot W(Δt|t) of a q-exponential with raw rate λ.
pub fn hazard_series(events: &[bool], q: f64, lambda: f64, delta_t: u64, warmup: Warmup) -> Result<HazardSeries> {
    if delta_t == 0 {
        return Err(Error::InvalidConfig("delta_t must be at least one slot"));
    }
    let first = events.iter().position(|&e| e).ok_or(Error::NoEvents)?;
    let Warmup::FromSeriesStart = warmup;
    let mut values = Vec::with_capacity(events.len());
    let mut elapsed = Vec::with_capacity(events.len());
    // W depends on t only; cache the run of consecutive t values.
    let mut cache: Vec<f64> = Vec::new();
    let mut last = 0usize;
    for (i, &e) in events.iter().enumerate() {
        if e {
            last = i;
        }
        let t = i - last;
        while cache.len() <= t {
            cache.push(hazard_qexp(q, lambda, cache.len() as f64, delta_t as f64)?);
        }
        values.push(cache[t]);
        elapsed.push(t as u64);
    }
    Ok(HazardSeries { values, elapsed, warmup_len: first })
}

/// Alarm flags `W[i] ≥ q_p`.
pub fn generate_alarms(w: &[f64], q_p: f64) -> Vec<bool> {
    w.iter().map(|&v| v >= q_p).collect()
}

/// Outcome counts over the scorable slots.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct ConfusionCounts {
    /// Alarm followed by an event (hit).
    pub o11: u64,
    /// No alarm and no event (correct rejection).
    pub o00: u64,
    /// No alarm but an event (miss).
    pub o01: u64,
    /// Alarm without an event (false alarm).
    pub o10: u64,
}

impl ConfusionCounts {
    /// Number of scored slots.
    pub fn total(&self) -> u64 {
        self.o11 + self.o00 + self.o01 + self.o10
    }

    /// Hit rate D = O11/(O01+O11) and false-alarm rate A = O10/(O00+O10);
    /// `None` where the denominator is zero.
    pub fn rates(&self) -> (Option<f64>, Option<f64>) {
        (ratio(self.o11, self.o01 + self.o11), ratio(self.o10, self.o00 + self.o10))
    }
}

fn ratio(num: u64, den: u64) -> Option<f64> {
    (den > 0).then(|| num as f64 / den as f64)
}

/// Whether an event occurs in (i, i+Δt] for each scorable slot i.
pub fn targets(events: &[bool], delta_t: usize) -> Vec<bool> {
    let m = events.len().saturating_sub(delta_t);
    // Running count of events in the sliding window.
    let mut out = Vec::with_capacity(m);
    let mut count: usize = events.iter().skip(1).take(delta_t).filter(|&&e| e).count();
    for i in 0..m {
        out.push(count > 0);
        if i + 1 < m {
            count -= events[i + 1] as usize;
            count += events[i + 1 + delta_t] as usize;
        }
    }
    out
}

/// Confusion counts of `alarms` against `events` at horizon Δt.
pub fn score(alarms: &[bool], events: &[bool], delta_t: usize) -> Result<ConfusionCounts> {
    if alarms.len() != events.len() {
        return Err(Error::LengthMismatch { left: alarms.len(), right: events.len() });
    }
    if delta_t == 0 {
        return Err(Error::InvalidConfig("delta_t must be at least one slot"));
    }
    let mut c = ConfusionCounts::default();
    for (&a, y) in alarms.iter().zip(targets(events, delta_t)) {
        match (a, y) {
            (true, true) => c.o11 += 1,
            (false, false) => c.o00 += 1,
            (false, true) => c.o01 += 1,
            (true, false) => c.o10 += 1,
        }
    }
    Ok(c)
}

/// Alarm thresholds to evaluate.
#[derive(Debug, Clone, PartialEq, Default)]
pub enum QpGrid {
    /// Every distinct W value plus 0 and 1: the exact empirical curve.
    #[default]
    Distinct,
    /// Explicit thresholds; must contain 0 and 1.
    Explicit(Vec<f64>),
}

/// One point of the ROC curve.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RocPoint {
    /// Alarm threshold.
    pub q_p: f64,
    /// False-alarm rate.
    pub a: f64,
    /// Hit rate.
    pub d: f64,
    /// Underlying counts.
    pub counts: ConfusionCounts,
}

/// ROC curve sorted by ascending Q_p, with its area.
#[derive(Debug, Clone, PartialEq)]
pub struct RocResult {
    /// Points in ascending Q_p order.
    pub points: Vec<RocPoint>,
    /// Trapezoidal area under D(A).
    pub auc: f64,
}

fn resolve_grid(w: &[f64], grid: &QpGrid) -> Result<Vec<f64>> {
    let mut g = match grid {
        QpGrid::Distinct => {
            let mut g: Vec<f64> = w.iter().copied().filter(|v| (0.0..=1.0).contains(v)).collect();
            g.push(0.0);
            g.push(1.0);
            g
        }
        QpGrid::Explicit(g) => {
            if g.iter().any(|v| !(0.0..=1.0).contains(v)) || !g.contains(&0.0) || !g.contains(&1.0) {
                return Err(Error::InvalidGrid);
            }
            g.clone()
        }
    };
    g.sort_by(f64::total_cmp);
    g.dedup();
    Ok(g)
}

/// ROC curve of the alarm rule over `grid`.
///
/// Each slot's W is compared with the event indicator over its next Δt
/// slots; the trailing Δt slots are ignored.
pub fn roc_curve(w: &[f64], events: &[bool], delta_t: usize, grid: &QpGrid) -> Result<RocResult> {
    if w.len() != events.len() {
        return Err(Error::LengthMismatch { left: w.len(), right: events.len() });
    }
    if delta_t == 0 {
        return Err(Error::InvalidConfig("delta_t must be at least one slot"));
    }
    let y = targets(events, delta_t);
    let mut pos: Vec<f64> = Vec::new();
    let mut neg: Vec<f64> = Vec::new();
    for (&wi, &yi) in w.iter().zip(&y) {
        if yi {
            pos.push(wi);
        } else {
            neg.push(wi);
        }
    }
    if pos.is_empty() {
        return Err(Error::EmptyClass("no scorable slot is followed by an event"));
    }
    if neg.is_empty() {
        return Err(Error::EmptyClass("every scorable slot is followed by an event"));
    }
    pos.sort_by(f64::total_cmp);
    neg.sort_by(f64::total_cmp);
    let grid = resolve_grid(&w[..y.len()], grid)?;
    let points: Vec<RocPoint> = grid
        .iter()
        .map(|&q_p| {
            let o11 = (pos.len() - pos.partition_point(|&v| v < q_p)) as u64;
            let o10 = (neg.len() - neg.partition_point(|&v| v < q_p)) as u64;
            let counts = ConfusionCounts { o11, o01: pos.len() as u64 - o11, o10, o00: neg.len() as u64 - o10 };
            RocPoint { q_p, a: o10 as f64 / neg.len() as f64, d: o11 as f64 / pos.len() as f64, counts }
        })
        .collect();
    // Ascending Q_p means descending A and D; walk it backwards.
    let auc = points.windows(2).map(|p| (p[0].a - p[1].a) * 0.5 * (p[0].d + p[1].d)).sum();
    Ok(RocResult { points, auc })
}

/// Hit rate at false-alarm rate `a_star`, interpolating linearly between
/// the bracketing ROC points. Where several points share A = `a_star` the
/// largest D is returned.
pub fn d_at_false_alarm(roc: &RocResult, a_star: f64) -> Result<f64> {
    let mut pts: Vec<(f64, f64)> = roc.points.iter().map(|p| (p.a, p.d)).collect();
    pts.sort_by(|x, y| x.0.total_cmp(&y.0).then(x.1.total_cmp(&y.1)));
    let (min, max) = match (pts.first(), pts.last()) {
        (Some(f), Some(l)) => (f.0, l.0),
        _ => return Err(Error::TooFewPoints { needed: 1, found: 0 }),
    };
    if !(a_star >= min && a_star <= max) {
        return Err(Error::OutsideRocSpan { a_star, min, max });
    }
    if let Some(&(_, d)) = pts.iter().rev().find(|p| p.0 == a_star) {
        return Ok(d);
    }
    let right = pts.partition_point(|p| p.0 < a_star);
    let (a0, d0) = pts[right - 1];
    let (a1, d1) = pts[right];
    Ok(d0 + (d1 - d0) * (a_star - a0) / (a1 - a0))
}
