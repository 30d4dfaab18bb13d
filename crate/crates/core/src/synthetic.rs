//! Seeded generators with known recurrence statistics.
//!
//! Every generator is a pure function of its spec and a 64-bit seed. The
//! random stream is ChaCha8 seeded through `SeedableRng::seed_from_u64`,
//! uniforms are the top 53 bits of a `u64` scaled to [0, 1), and gamma and
//! exponential variates come from `rand_distr` 0.5. Changing any of these
//! is a breaking change.

use alloc::vec::Vec;
use core::f64::consts::PI;

use rand::{Rng, RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Exp1, Gamma};

use crate::distribution::DistParams;
use crate::series::{PriceRecord, PriceSeries, Stage, VolatilitySeries};
use crate::special::ln_gamma;
use crate::volatility::normalize;
use crate::{Error, Result};

/// Longest series any generator will build.
pub const MAX_SERIES_LEN: u64 = 1 << 28;

/// Deterministic random stream for `seed`.
pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Uniform draw on [0, 1) with 53 random bits.
pub fn uniform<R: Rng + ?Sized>(rng: &mut R) -> f64 {
    (rng.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
}

/// Inverse survival of the q-exponential:
/// τ = [(1−u)^{(q−1)/(q−2)} − 1] / ((q−1)λ).
pub fn sample_qexp_interval(q: f64, lambda: f64, u: f64) -> Result<f64> {
    if !(q > 1.0 && q < 2.0) || !(lambda > 0.0) || !lambda.is_finite() {
        return Err(Error::InvalidParams("q-exponential needs 1 < q < 2 and lambda > 0"));
    }
    if !(0.0..1.0).contains(&u) {
        return Err(Error::Domain("uniform variate must lie in [0, 1)"));
    }
    let c = q - 1.0;
    Ok(libm::expm1(c / (q - 2.0) * libm::log1p(-u)) / (c * lambda))
}

/// Mean of the q-exponential with raw rate λ, finite only for q < 3/2.
pub fn qexp_mean(q: f64, lambda: f64) -> Option<f64> {
    (q > 1.0 && q < 1.5 && lambda > 0.0).then(|| 1.0 / ((3.0 - 2.0 * q) * lambda))
}

fn gamma_variate<R: Rng + ?Sized>(rng: &mut R, shape: f64, scale: f64) -> Result<f64> {
    let g = Gamma::new(shape, scale).map_err(|_| Error::InvalidParams("gamma sampler parameters"))?;
    Ok(g.sample(rng))
}

/// `n` independent draws of the scaled interval x from `params`.
pub fn sample_family(params: &DistParams, n: usize, seed: u64) -> Result<Vec<f64>> {
    params.validate()?;
    let mut r = rng(seed);
    let mut out = Vec::with_capacity(n);
    for _ in 0..n {
        let x = match *params {
            DistParams::StretchedExp { mu } => {
                // (Bx)^μ is Gamma(1/μ, 1) distributed.
                let b = libm::exp(ln_gamma(2.0 / mu) - ln_gamma(1.0 / mu));
                libm::pow(gamma_variate(&mut r, 1.0 / mu, 1.0)?, 1.0 / mu) / b
            }
            DistParams::PowerLawCutoff { gamma } => gamma_variate(&mut r, -gamma, -1.0 / gamma)?,
            DistParams::QExp { q, lambda_x } => sample_qexp_interval(q, lambda_x, uniform(&mut r))?,
            DistParams::Weibull2 { zeta, d_x } => d_x * libm::pow(-libm::log1p(-uniform(&mut r)), 1.0 / zeta),
            DistParams::Weibull3 { zeta, d_x, x0 } => x0 + d_x * libm::pow(-libm::log1p(-uniform(&mut r)), 1.0 / zeta),
        };
        out.push(x);
    }
    Ok(out)
}

/// Two-state calm/turbulent volatility process.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ClusteredSpec {
    /// Per-slot probability of switching from calm to turbulent.
    pub p_enter: f64,
    /// Per-slot probability of switching from turbulent to calm.
    pub p_exit: f64,
    /// Turbulent to calm level ratio (≥ 1).
    pub ratio: f64,
    /// Relative amplitude of a cosine intraday pattern, in [0, 1).
    pub intraday_amplitude: f64,
    /// Slots per trading day.
    pub slots_per_day: u32,
}

impl Default for ClusteredSpec {
    fn default() -> Self {
        Self { p_enter: 0.002, p_exit: 0.01, ratio: 5.0, intraday_amplitude: 0.0, slots_per_day: 240 }
    }
}

impl ClusteredSpec {
    fn validate(&self) -> Result<()> {
        let prob = |p: f64| p > 0.0 && p <= 1.0;
        if !prob(self.p_enter) || !prob(self.p_exit) {
            return Err(Error::InvalidConfig("switch probabilities must lie in (0, 1]"));
        }
        if !(self.ratio >= 1.0) || !self.ratio.is_finite() {
            return Err(Error::InvalidConfig("level ratio must be finite and >= 1"));
        }
        if !(0.0..1.0).contains(&self.intraday_amplitude) {
            return Err(Error::InvalidConfig("intraday amplitude must lie in [0, 1)"));
        }
        if self.slots_per_day == 0 {
            return Err(Error::ZeroSlotsPerDay);
        }
        Ok(())
    }
}

/// Kind of generated series.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum GeneratorKind {
    /// Renewal events with q-exponential intervals (raw rate λ).
    QExpRenewal {
        /// Shape q ∈ (1, 2).
        q: f64,
        /// Raw rate λ per slot.
        lambda: f64,
    },
    /// Poisson events.
    ExponentialRenewal {
        /// Rate per slot.
        lambda: f64,
    },
    /// Renewal events with Weibull intervals.
    Weibull2Renewal {
        /// Shape ζ.
        zeta: f64,
        /// Scale d in slots.
        d: f64,
    },
    /// Regime-switching volatility.
    ClusteredVolatility(ClusteredSpec),
}

impl GeneratorKind {
    /// snake_case tag for reports.
    pub fn name(&self) -> &'static str {
        match self {
            GeneratorKind::QExpRenewal { .. } => "qexp_renewal",
            GeneratorKind::ExponentialRenewal { .. } => "exponential_renewal",
            GeneratorKind::Weibull2Renewal { .. } => "weibull2_renewal",
            GeneratorKind::ClusteredVolatility(_) => "clustered_volatility",
        }
    }
}

/// What to generate.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GeneratorSpec {
    /// Generator kind and its parameters.
    pub kind: GeneratorKind,
    /// Event count for renewal kinds, series length for clustered volatility.
    pub n: usize,
    /// Seed of the random stream.
    pub seed: u64,
}

type IntervalDraw = alloc::boxed::Box<dyn FnMut(&mut ChaCha8Rng) -> Result<f64>>;

/// Integer intervals of a renewal spec, rounded up to at least one slot.
pub fn renewal_intervals(spec: &GeneratorSpec) -> Result<Vec<u64>> {
    let mut r = rng(spec.seed);
    let mut draw: IntervalDraw = match spec.kind {
        GeneratorKind::QExpRenewal { q, lambda } => {
            sample_qexp_interval(q, lambda, 0.0)?;
            alloc::boxed::Box::new(move |r| sample_qexp_interval(q, lambda, uniform(r)))
        }
        GeneratorKind::ExponentialRenewal { lambda } => {
            if !(lambda > 0.0) || !lambda.is_finite() {
                return Err(Error::InvalidParams("exponential rate must be positive"));
            }
            alloc::boxed::Box::new(move |r| Ok(-libm::log1p(-uniform(r)) / lambda))
        }
        GeneratorKind::Weibull2Renewal { zeta, d } => {
            DistParams::Weibull2 { zeta, d_x: d }.validate()?;
            alloc::boxed::Box::new(move |r| Ok(d * libm::pow(-libm::log1p(-uniform(r)), 1.0 / zeta)))
        }
        GeneratorKind::ClusteredVolatility(_) => {
            return Err(Error::InvalidConfig("clustered volatility is not a renewal process"));
        }
    };
    let mut total: u64 = 0;
    let mut out = Vec::with_capacity(spec.n);
    for _ in 0..spec.n {
        let x = draw(&mut r)?;
        if !(x < MAX_SERIES_LEN as f64) {
            return Err(Error::InvalidConfig("generated series exceeds the length budget"));
        }
        let tau = (libm::ceil(x) as u64).max(1);
        total += tau;
        if total >= MAX_SERIES_LEN {
            return Err(Error::InvalidConfig("generated series exceeds the length budget"));
        }
        out.push(tau);
    }
    Ok(out)
}

/// Event indicators with events at the cumulative interval sums; slot 0 is
/// event-free and the series ends on the last event.
pub fn renewal_event_series(spec: &GeneratorSpec) -> Result<Vec<bool>> {
    let intervals = renewal_intervals(spec)?;
    let len = intervals.iter().sum::<u64>() as usize + 1;
    let mut events = alloc::vec![false; len];
    let mut pos = 0usize;
    for tau in intervals {
        pos += tau as usize;
        events[pos] = true;
    }
    Ok(events)
}

fn clustered_raw(spec: &ClusteredSpec, len: usize, r: &mut ChaCha8Rng) -> Result<Vec<f64>> {
    spec.validate()?;
    if len as u64 > MAX_SERIES_LEN {
        return Err(Error::InvalidConfig("generated series exceeds the length budget"));
    }
    let s = spec.slots_per_day as usize;
    // Start in the stationary distribution of the two-state chain.
    let mut turbulent = uniform(r) < spec.p_enter / (spec.p_enter + spec.p_exit);
    let mut out = Vec::with_capacity(len);
    for i in 0..len {
        let flip = uniform(r);
        turbulent = if turbulent { flip >= spec.p_exit } else { flip < spec.p_enter };
        let level = if turbulent { spec.ratio } else { 1.0 };
        let season = 1.0 + spec.intraday_amplitude * libm::cos(2.0 * PI * (i % s) as f64 / s as f64);
        let e: f64 = Exp1.sample(r);
        out.push(level * season * e);
    }
    Ok(out)
}

/// Normalized volatility of the two-state process, `len` slots long.
pub fn clustered_volatility(spec: &ClusteredSpec, len: usize, seed: u64) -> Result<VolatilitySeries> {
    let raw = clustered_raw(spec, len, &mut rng(seed))?;
    normalize(&VolatilitySeries::from_values(&raw, Stage::Raw, spec.slots_per_day)?)
}

/// Price path whose absolute log returns follow the two-state process.
///
/// One price per slot over `days` days; each slot's log return has a random
/// sign and magnitude 1e-3 times the process value.
pub fn clustered_prices(spec: &ClusteredSpec, days: u32, seed: u64) -> Result<PriceSeries> {
    let mut r = rng(seed);
    let len = days as usize * spec.slots_per_day as usize;
    let raw = clustered_raw(spec, len, &mut r)?;
    let mut ln_p = libm::log(100.0);
    let mut records = Vec::with_capacity(len);
    for (i, w) in raw.iter().enumerate() {
        if i > 0 {
            let sign = if r.next_u32() & 1 == 0 { 1.0 } else { -1.0 };
            ln_p += sign * 1e-3 * w;
        }
        let s = spec.slots_per_day as usize;
        records.push(PriceRecord { day: (i / s) as u32, slot: (i % s) as u32, price: libm::exp(ln_p) });
    }
    PriceSeries::new(records, spec.slots_per_day)
}

/// Price path whose intraday returns are large exactly at `events`.
///
/// Entry k of `events` becomes the return into slot 1 + k mod (S−1) of day
/// k div (S−1), so every event survives the removal of overnight returns.
/// Event returns have magnitude 0.01(1+E) with E exponential; prices stay
/// flat between events, so any τ_Q below the mean interval puts the
/// threshold at zero and recovers exactly the events.
pub fn prices_from_events(events: &[bool], slots_per_day: u32, seed: u64) -> Result<PriceSeries> {
    if slots_per_day < 2 {
        return Err(Error::InvalidConfig("need at least two slots per day"));
    }
    let per_day = slots_per_day as usize - 1;
    let days = events.len().div_ceil(per_day);
    let mut r = rng(seed);
    let mut ln_p = libm::log(100.0);
    let mut records = Vec::with_capacity(days * slots_per_day as usize);
    for day in 0..days {
        // Overnight move, discarded by preprocessing.
        ln_p += 0.004 * (uniform(&mut r) - 0.5);
        records.push(PriceRecord { day: day as u32, slot: 0, price: libm::exp(ln_p) });
        for j in 0..per_day {
            let k = day * per_day + j;
            let Some(&event) = events.get(k) else { break };
            if event {
                let e: f64 = Exp1.sample(&mut r);
                let sign = if r.next_u32() & 1 == 0 { 1.0 } else { -1.0 };
                ln_p += sign * 0.01 * (1.0 + e);
            }
            records.push(PriceRecord { day: day as u32, slot: j as u32 + 1, price: libm::exp(ln_p) });
        }
    }
    PriceSeries::new(records, slots_per_day)
}
