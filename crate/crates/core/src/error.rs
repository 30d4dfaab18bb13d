use thiserror::Error;

/// Result alias used throughout the crate.
pub type Result<T, E = Error> = core::result::Result<T, E>;

/// Coarse grouping of errors, used by front ends to pick exit codes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ErrorClass {
    /// The input data violates a precondition.
    Data,
    /// A numerical procedure could not produce a usable answer.
    Numerical,
}

/// Errors produced by the analysis pipeline.
#[allow(missing_docs)]
#[derive(Debug, Clone, PartialEq, Error)]
#[non_exhaustive]
pub enum Error {
    #[error("record {index}: price must be strictly positive")]
    NonPositivePrice { index: usize },
    #[error("record {index}: not sorted by (day, slot)")]
    UnsortedInput { index: usize },
    #[error("record {index}: duplicate (day, slot)")]
    DuplicateRecord { index: usize },
    #[error("record {index}: slot {slot} outside [0, {slots_per_day})")]
    SlotOutOfRange { index: usize, slot: u32, slots_per_day: u32 },
    #[error("slots per day must be positive")]
    ZeroSlotsPerDay,
    #[error("series too short: need at least {needed} values, found {found}")]
    TooShort { needed: usize, found: usize },
    #[error("series is empty")]
    EmptySeries,
    #[error("series has stage {found}, expected {expected}")]
    WrongStage { expected: &'static str, found: &'static str },
    #[error("slot {slot} present in series but absent from the intraday pattern")]
    MissingPatternSlot { slot: u32 },
    #[error("intraday pattern has {pattern} slots but series has {series}")]
    SlotsPerDayMismatch { pattern: u32, series: u32 },
    #[error("zero variance: cannot normalize a constant series")]
    ZeroVariance,
    #[error("mean recurrence time {tau_q} outside (1, {len})")]
    TauOutOfRange { tau_q: f64, len: usize },
    #[error("need at least 2 exceedances of the threshold, found {found}")]
    TooFewExceedances { found: usize },
    #[error("invalid parameters: {0}")]
    InvalidParams(&'static str),
    #[error("argument outside domain: {0}")]
    Domain(&'static str),
    #[error("sample of {n} intervals is below the minimum of {min}")]
    SampleTooSmall { n: usize, min: usize },
    #[error("degenerate sample: all values are equal")]
    DegenerateSample,
    #[error("q-exponential optimum sits on the q -> 1 boundary (lambda_x = {lambda_x})")]
    ExponentialBoundary { q: f64, lambda_x: f64, log_likelihood: f64 },
    #[error("every candidate family failed to fit")]
    AllFitsFailed,
    #[error("survival probability below 1e-300; elapsed time is too deep in the tail")]
    SurvivalUnderflow,
    #[error("only {count} intervals exceed the elapsed time, need {min}")]
    InsufficientTail { count: usize, min: usize },
    #[error("series contains no events")]
    NoEvents,
    #[error("length mismatch: {left} vs {right}")]
    LengthMismatch { left: usize, right: usize },
    #[error("no scorable slots fall in the {0} class")]
    EmptyClass(&'static str),
    #[error("alarm-threshold grid must contain 0 and 1 and lie in [0, 1]")]
    InvalidGrid,
    #[error("false-alarm level {a_star} outside the ROC span [{min}, {max}]")]
    OutsideRocSpan { a_star: f64, min: f64, max: f64 },
    #[error("need at least {needed} points, found {found}")]
    TooFewPoints { needed: usize, found: usize },
    #[error("{0} did not converge")]
    NoConvergence(&'static str),
    #[error("invalid configuration: {0}")]
    InvalidConfig(&'static str),
}

impl Error {
    /// Whether the error stems from the input data or from numerics.
    pub fn class(&self) -> ErrorClass {
        match self {
            Error::InvalidParams(_)
            | Error::Domain(_)
            | Error::ExponentialBoundary { .. }
            | Error::AllFitsFailed
            | Error::SurvivalUnderflow
            | Error::NoConvergence(_) => ErrorClass::Numerical,
            _ => ErrorClass::Data,
        }
    }
}
