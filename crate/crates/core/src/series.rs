//! Price and volatility series labelled by trading day and intraday slot.

use alloc::vec::Vec;

use crate::{Error, Result};

/// One intraday price observation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PriceRecord {
    /// Trading-day index, starting at 0.
    pub day: u32,
    /// Slot within the day, in `[0, slots_per_day)`.
    pub slot: u32,
    /// Strictly positive price.
    pub price: f64,
}

/// Intraday prices sorted by `(day, slot)` with a fixed number of slots per day.
///
/// Days with missing slots are allowed.
#[derive(Debug, Clone, PartialEq)]
pub struct PriceSeries {
    records: Vec<PriceRecord>,
    slots_per_day: u32,
}

impl PriceSeries {
    /// Validate and wrap `records`.
    ///
    /// Out-of-order rows are rejected rather than reordered; the error carries
    /// the index of the first offending record.
    pub fn new(records: Vec<PriceRecord>, slots_per_day: u32) -> Result<Self> {
        if slots_per_day == 0 {
            return Err(Error::ZeroSlotsPerDay);
        }
        for (index, r) in records.iter().enumerate() {
            if !(r.price > 0.0) || !r.price.is_finite() {
                return Err(Error::NonPositivePrice { index });
            }
            if r.slot >= slots_per_day {
                return Err(Error::SlotOutOfRange { index, slot: r.slot, slots_per_day });
            }
            if index > 0 {
                let prev = &records[index - 1];
                match (prev.day, prev.slot).cmp(&(r.day, r.slot)) {
                    core::cmp::Ordering::Less => {}
                    core::cmp::Ordering::Equal => return Err(Error::DuplicateRecord { index }),
                    core::cmp::Ordering::Greater => return Err(Error::UnsortedInput { index }),
                }
            }
        }
        Ok(Self { records, slots_per_day })
    }

    /// The validated records.
    pub fn records(&self) -> &[PriceRecord] {
        &self.records
    }

    /// Number of slots per trading day.
    pub fn slots_per_day(&self) -> u32 {
        self.slots_per_day
    }

    /// Number of records.
    pub fn len(&self) -> usize {
        self.records.len()
    }

    /// Whether the series holds no records.
    pub fn is_empty(&self) -> bool {
        self.records.is_empty()
    }
}

/// Processing stage of a [`VolatilitySeries`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Stage {
    /// Absolute log-returns ω(t).
    Raw,
    /// Divided by the intraday pattern, ω′(t).
    Deseasonalized,
    /// Divided by the standard deviation, v(t).
    Normalized,
}

impl Stage {
    /// Lower-case name.
    pub fn name(self) -> &'static str {
        match self {
            Stage::Raw => "raw",
            Stage::Deseasonalized => "deseasonalized",
            Stage::Normalized => "normalized",
        }
    }
}

/// One labelled volatility value.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct VolPoint {
    /// Trading day of the later price in the return.
    pub day: u32,
    /// Slot of the later price in the return.
    pub slot: u32,
    /// Non-negative volatility value.
    pub value: f64,
}

/// Volatility values in series order with day/slot labels.
#[derive(Debug, Clone, PartialEq)]
pub struct VolatilitySeries {
    points: Vec<VolPoint>,
    stage: Stage,
    slots_per_day: u32,
}

impl VolatilitySeries {
    /// Wrap labelled values. Values must be finite and non-negative, slots in range.
    pub fn new(points: Vec<VolPoint>, stage: Stage, slots_per_day: u32) -> Result<Self> {
        if slots_per_day == 0 {
            return Err(Error::ZeroSlotsPerDay);
        }
        for (index, p) in points.iter().enumerate() {
            if !(p.value >= 0.0) || !p.value.is_finite() {
                return Err(Error::Domain("volatility values must be finite and non-negative"));
            }
            if p.slot >= slots_per_day {
                return Err(Error::SlotOutOfRange { index, slot: p.slot, slots_per_day });
            }
        }
        Ok(Self { points, stage, slots_per_day })
    }

    /// Wrap unlabelled values, assigning consecutive slots day by day.
    pub fn from_values(values: &[f64], stage: Stage, slots_per_day: u32) -> Result<Self> {
        if slots_per_day == 0 {
            return Err(Error::ZeroSlotsPerDay);
        }
        let points = values
            .iter()
            .enumerate()
            .map(|(i, &value)| VolPoint {
                day: (i / slots_per_day as usize) as u32,
                slot: (i % slots_per_day as usize) as u32,
                value,
            })
            .collect();
        Self::new(points, stage, slots_per_day)
    }

    pub(crate) fn with_values(&self, stage: Stage, values: impl Iterator<Item = f64>) -> Self {
        let points = self.points.iter().zip(values).map(|(p, value)| VolPoint { value, ..*p }).collect();
        Self { points, stage, slots_per_day: self.slots_per_day }
    }

    /// Labelled values.
    pub fn points(&self) -> &[VolPoint] {
        &self.points
    }

    /// Bare values in series order.
    pub fn values(&self) -> Vec<f64> {
        self.points.iter().map(|p| p.value).collect()
    }

    /// Processing stage.
    pub fn stage(&self) -> Stage {
        self.stage
    }

    /// Number of slots per trading day.
    pub fn slots_per_day(&self) -> u32 {
        self.slots_per_day
    }

    /// Number of values.
    pub fn len(&self) -> usize {
        self.points.len()
    }

    /// Whether the series is empty.
    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    /// Sub-series `[start, end)` keeping labels and stage.
    pub fn slice(&self, start: usize, end: usize) -> Self {
        Self { points: self.points[start..end].to_vec(), stage: self.stage, slots_per_day: self.slots_per_day }
    }
}
