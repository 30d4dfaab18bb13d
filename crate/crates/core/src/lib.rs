//! Recurrence-interval analysis of extreme volatility.
//!
//! The crate turns intraday price series into normalized, deseasonalized
//! volatility, extracts the waiting times between exceedances of a quantile
//! threshold, fits five candidate interval distributions by maximum
//! likelihood, and converts the fitted q-exponential into hazard
//! probabilities that drive a threshold-alarm predictor scored by ROC
//! analysis. A seeded synthetic generator supplies ground truth for every
//! statistical step.
//!
//! The crate is `no_std` and only needs `alloc`; file formats and the
//! command-line front end live in the `revol` crate.
#![cfg_attr(not(test), no_std)]
#![deny(unsafe_code)]
#![allow(clippy::neg_cmp_op_on_partial_ord)]
#![warn(missing_docs)]

extern crate alloc;

mod error;

pub mod distribution;
pub mod fit;
pub mod hazard;
pub mod pipeline;
pub mod predictor;
pub mod quadrature;
pub mod recurrence;
pub mod rolling;
pub mod series;
pub mod special;
pub mod synthetic;
pub mod volatility;

pub use distribution::{DistFamily, DistParams};
pub use error::{Error, ErrorClass, Result};
pub use fit::{DistributionFit, FitConfig, Ranking};
pub use recurrence::IntervalSample;
pub use series::{PriceRecord, PriceSeries, Stage, VolatilitySeries};
