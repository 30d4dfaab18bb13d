//! Maximum-likelihood fits of the five candidate families and KS ranking.
//!
//! All fits work on scaled intervals x = τ/τ_Q.
//!
//! * Stretched exponential and power law with cutoff have one free exponent
//!   and are maximized by a staged scan of the 1e-6 lattice (see [`grid`]).
//! * The q-exponential is maximized over q by the same staged scan at 1e-5
//!   resolution; for each q the likelihood is concave in ln λ_x and λ_x is
//!   solved exactly from its score equation.
//! * The Weibull scale has a closed form given the shape, and the shape solves
//!   a monotone score equation. The shifted Weibull scans its location over
//!   `[0, min(x)(1 − 1e-9)]` with the staged lattice.

pub mod grid;

use alloc::vec::Vec;

use crate::distribution::{ks_statistic, DistFamily, DistParams};
use crate::special::ln_gamma;
use crate::{Error, Result};
use grid::{staged_argmax, Lattice, ONE_D_STAGES, POWER_LAW_LATTICE, STRETCHED_EXP_LATTICE};

/// q-exponential lattice: q = 1 + i·1e-5, i ∈ [1, 99 999].
pub const QEXP_LATTICE: Lattice = Lattice { lo: 1, hi: 99_999, unit: 1e-5 };
/// Strides of the q scan: 1e-2, 1e-3, 1e-4, 1e-5.
pub const QEXP_STAGES: [u64; 4] = [1_000, 100, 10, 1];
/// Location lattice as a fraction of the sample minimum; the last index maps to 1 − 1e-9.
const SHIFT_LATTICE: Lattice = Lattice { lo: 0, hi: 1_000_000, unit: 1e-6 };

/// Fit settings.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FitConfig {
    /// Samples smaller than this are refused.
    pub min_samples: usize,
    /// Upper bound Λ on λ_x.
    pub lambda_max: f64,
}

impl Default for FitConfig {
    fn default() -> Self {
        Self { min_samples: 100, lambda_max: 1e3 }
    }
}

/// Non-fatal remarks attached to a fit.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Diagnostic {
    /// The q-exponential optimum sits on q → 1 (plain exponential).
    ExponentialBoundary,
    /// λ_x hit the configured upper bound.
    LambdaAtBound,
    /// A lattice search ended on the edge of its range.
    AtSearchEdge,
}

impl Diagnostic {
    /// snake_case tag for reports.
    pub fn name(self) -> &'static str {
        match self {
            Diagnostic::ExponentialBoundary => "exponential_boundary",
            Diagnostic::LambdaAtBound => "lambda_at_bound",
            Diagnostic::AtSearchEdge => "at_search_edge",
        }
    }
}

/// Result of a single-family maximum-likelihood fit.
#[derive(Debug, Clone, PartialEq)]
pub struct Fit {
    /// Fitted parameters.
    pub params: DistParams,
    /// ln L at the optimum.
    pub log_likelihood: f64,
    /// Best ln L after each search stage (empty for closed-form steps).
    pub stage_best: Vec<f64>,
    /// Remarks about the optimum.
    pub diagnostics: Vec<Diagnostic>,
}

/// A fit together with its goodness of fit.
#[derive(Debug, Clone, PartialEq)]
pub struct DistributionFit {
    /// Family tag.
    pub family: DistFamily,
    /// Fitted parameters.
    pub params: DistParams,
    /// ln L at the optimum.
    pub log_likelihood: f64,
    /// KS distance to the sample.
    pub ks: f64,
    /// Sample size.
    pub n: usize,
    /// Mean recurrence time used for scaling.
    pub tau_q: f64,
    /// Remarks about the optimum.
    pub diagnostics: Vec<Diagnostic>,
}

/// All attempted fits, best KS first.
#[derive(Debug, Clone, PartialEq)]
pub struct Ranking {
    /// Successful fits sorted by KS ascending.
    pub fits: Vec<DistributionFit>,
    /// Families that failed and why.
    pub failures: Vec<(DistFamily, Error)>,
}

impl Ranking {
    /// Best-ranked fit.
    pub fn best(&self) -> &DistributionFit {
        &self.fits[0]
    }
}

/// Sample with cached logarithms and sums.
struct Prepared<'a> {
    x: &'a [f64],
    ln_x: Vec<f64>,
    n: f64,
    sum_x: f64,
    sum_ln_x: f64,
    min: f64,
    max: f64,
}

fn prepare<'a>(sample: &'a [f64], cfg: &FitConfig) -> Result<Prepared<'a>> {
    if sample.len() < cfg.min_samples.max(2) {
        return Err(Error::SampleTooSmall { n: sample.len(), min: cfg.min_samples.max(2) });
    }
    if sample.iter().any(|&x| !(x > 0.0) || !x.is_finite()) {
        return Err(Error::Domain("intervals must be finite and positive"));
    }
    let min = sample.iter().copied().fold(f64::INFINITY, f64::min);
    let max = sample.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    if min == max {
        return Err(Error::DegenerateSample);
    }
    let ln_x: Vec<f64> = sample.iter().map(|&x| libm::log(x)).collect();
    Ok(Prepared {
        x: sample,
        n: sample.len() as f64,
        sum_x: sample.iter().sum(),
        sum_ln_x: ln_x.iter().sum(),
        ln_x,
        min,
        max,
    })
}

/// ln L of `params` on `sample` by direct summation of ln f(x_i).
pub fn log_likelihood(params: &DistParams, sample: &[f64]) -> Result<f64> {
    let mut acc = 0.0;
    for &x in sample {
        acc += params.ln_pdf(x)?;
    }
    Ok(acc)
}

// ---------------------------------------------------------------- stretched exponential

fn stretched_ln_l(p: &Prepared<'_>, mu: f64) -> f64 {
    let lg1 = ln_gamma(1.0 / mu);
    let lg2 = ln_gamma(2.0 / mu);
    let ln_b = lg2 - lg1;
    let tail: f64 = p.ln_x.iter().map(|&lx| libm::exp(mu * (ln_b + lx))).sum();
    p.n * (libm::log(mu) + lg2 - 2.0 * lg1) - tail
}

/// ln L of the reduced stretched exponential as a function of the lattice
/// index i (μ = i·1e-6). Exposed so the staged search can be checked
/// against a full scan.
pub fn stretched_exp_objective<'a>(sample: &'a [f64], cfg: &FitConfig) -> Result<impl Fn(u64) -> f64 + 'a> {
    let p = prepare(sample, cfg)?;
    Ok(move |i: u64| stretched_ln_l(&p, i as f64 * STRETCHED_EXP_LATTICE.unit))
}

/// Fit μ of the stretched exponential by the staged 1e-2/1e-4/1e-6 scan of (0, 5].
pub fn fit_stretched_exp(sample: &[f64], cfg: &FitConfig) -> Result<Fit> {
    let objective = stretched_exp_objective(sample, cfg)?;
    let lat = STRETCHED_EXP_LATTICE;
    let best = staged_argmax(lat, &ONE_D_STAGES, objective);
    let mu = best.index as f64 * lat.unit;
    Ok(Fit {
        params: DistParams::StretchedExp { mu },
        log_likelihood: best.value,
        diagnostics: edge_diagnostic(best.index, lat),
        stage_best: best.stage_best,
    })
}

// ---------------------------------------------------------------- power law with cutoff

fn power_law_ln_l(p: &Prepared<'_>, alpha: f64) -> f64 {
    p.n * (alpha * libm::log(alpha) - ln_gamma(alpha)) + (alpha - 1.0) * p.sum_ln_x - alpha * p.sum_x
}

/// ln L of the reduced power law with cutoff as a function of the lattice
/// index i (γ = −i·1e-6).
pub fn power_law_objective<'a>(sample: &'a [f64], cfg: &FitConfig) -> Result<impl Fn(u64) -> f64 + 'a> {
    let p = prepare(sample, cfg)?;
    Ok(move |i: u64| power_law_ln_l(&p, i as f64 * POWER_LAW_LATTICE.unit))
}

/// Fit γ of the power law with exponential cutoff by the staged scan of (−1, 0).
pub fn fit_powerlaw_cutoff(sample: &[f64], cfg: &FitConfig) -> Result<Fit> {
    let objective = power_law_objective(sample, cfg)?;
    let lat = POWER_LAW_LATTICE;
    let best = staged_argmax(lat, &ONE_D_STAGES, objective);
    Ok(Fit {
        params: DistParams::PowerLawCutoff { gamma: -(best.index as f64 * lat.unit) },
        log_likelihood: best.value,
        diagnostics: edge_diagnostic(best.index, lat),
        stage_best: best.stage_best,
    })
}

fn edge_diagnostic(index: u64, lat: Lattice) -> Vec<Diagnostic> {
    if index == lat.lo || index == lat.hi {
        alloc::vec![Diagnostic::AtSearchEdge]
    } else {
        Vec::new()
    }
}

// ---------------------------------------------------------------- q-exponential

/// ln L of the q-exponential at (q, λ_x).
fn qexp_ln_l(x: &[f64], q: f64, lambda: f64) -> f64 {
    let c = q - 1.0;
    let s: f64 = x.iter().map(|&xi| libm::log1p(c * lambda * xi)).sum();
    x.len() as f64 * libm::log((2.0 - q) * lambda) - s / c
}

/// λ_x maximizing ln L at fixed q, clamped to `lambda_max`.
///
/// The score in u = ln λ is n − Σ λx/(1 + (q−1)λx), strictly decreasing
/// from n to n(1 − 1/(q−1)) < 0, so the root is unique.
fn qexp_best_lambda(x: &[f64], q: f64, lambda_max: f64) -> Result<(f64, bool)> {
    let n = x.len() as f64;
    let c = q - 1.0;
    let score = |u: f64| -> (f64, f64) {
        let lam = libm::exp(u);
        let (mut s, mut ds) = (0.0, 0.0);
        for &xi in x {
            let w = lam * xi / (1.0 + c * lam * xi);
            s += w;
            ds += w / (1.0 + c * lam * xi);
        }
        (n - s, -ds)
    };
    let u_max = libm::log(lambda_max);
    if score(u_max).0 >= 0.0 {
        return Ok((lambda_max, true));
    }
    // Lower bracket: halve λ until the score turns positive.
    let mut lo = u_max - 1.0;
    while score(lo).0 <= 0.0 {
        lo -= 2.0;
        if lo < -700.0 {
            return Err(Error::NoConvergence("q-exponential rate bracket"));
        }
    }
    let mut hi = u_max;
    // Start from the exponential-rate guess 1/mean, clamped into the bracket.
    let mean = x.iter().sum::<f64>() / n;
    let mut u = (-libm::log(mean)).clamp(lo, hi);
    for _ in 0..200 {
        let (g, dg) = score(u);
        if g > 0.0 {
            lo = u;
        } else {
            hi = u;
        }
        let mut next = u - g / dg;
        if !(next > lo && next < hi) {
            next = 0.5 * (lo + hi);
        }
        if (next - u).abs() < 1e-13 * u.abs().max(1.0) || hi - lo < 1e-14 {
            return Ok((libm::exp(next), false));
        }
        u = next;
    }
    Err(Error::NoConvergence("q-exponential rate"))
}

/// Fit (q, λ_x) of the q-exponential.
///
/// Returns [`Error::ExponentialBoundary`] when the optimum lies on the
/// lowest admissible q; the error carries the boundary estimate.
pub fn fit_qexp(sample: &[f64], cfg: &FitConfig) -> Result<Fit> {
    let fit = fit_qexp_unchecked(sample, cfg)?;
    if fit.diagnostics.contains(&Diagnostic::ExponentialBoundary) {
        if let DistParams::QExp { q, lambda_x } = fit.params {
            return Err(Error::ExponentialBoundary { q, lambda_x, log_likelihood: fit.log_likelihood });
        }
    }
    Ok(fit)
}

fn fit_qexp_unchecked(sample: &[f64], cfg: &FitConfig) -> Result<Fit> {
    let p = prepare(sample, cfg)?;
    if !(cfg.lambda_max > 0.0) {
        return Err(Error::InvalidConfig("lambda_max must be positive"));
    }
    let mut failure = None;
    let best = staged_argmax(QEXP_LATTICE, &QEXP_STAGES, |i| {
        let q = 1.0 + i as f64 * QEXP_LATTICE.unit;
        match qexp_best_lambda(p.x, q, cfg.lambda_max) {
            Ok((lam, _)) => qexp_ln_l(p.x, q, lam),
            Err(e) => {
                failure.get_or_insert(e);
                f64::NEG_INFINITY
            }
        }
    });
    if !best.value.is_finite() {
        return Err(failure.unwrap_or(Error::NoConvergence("q-exponential fit")));
    }
    let q = 1.0 + best.index as f64 * QEXP_LATTICE.unit;
    let (lambda_x, at_bound) = qexp_best_lambda(p.x, q, cfg.lambda_max)?;
    let mut diagnostics = Vec::new();
    if best.index == QEXP_LATTICE.lo {
        diagnostics.push(Diagnostic::ExponentialBoundary);
    } else if best.index == QEXP_LATTICE.hi {
        diagnostics.push(Diagnostic::AtSearchEdge);
    }
    if at_bound {
        diagnostics.push(Diagnostic::LambdaAtBound);
    }
    Ok(Fit { params: DistParams::QExp { q, lambda_x }, log_likelihood: best.value, stage_best: best.stage_best, diagnostics })
}

// ---------------------------------------------------------------- Weibull

/// Shape and scale maximizing the Weibull likelihood of `y` (all > 0).
///
/// The profile score Σyᶻ ln y / Σyᶻ − 1/ζ − mean(ln y) is strictly increasing
/// in ζ; it is solved by safeguarded Newton on ln ζ. The data are divided by
/// their maximum first so yᶻ never overflows.
fn weibull_profile(y: &[f64]) -> Result<(f64, f64, f64)> {
    let n = y.len() as f64;
    let y_max = y.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let ln_y: Vec<f64> = y.iter().map(|&v| libm::log(v / y_max)).collect();
    let mean_ln = ln_y.iter().sum::<f64>() / n;
    // Score and its derivative with respect to ζ.
    let score = |zeta: f64| -> (f64, f64) {
        let (mut s0, mut s1, mut s2) = (0.0, 0.0, 0.0);
        for &l in &ln_y {
            let w = libm::exp(zeta * l);
            s0 += w;
            s1 += w * l;
            s2 += w * l * l;
        }
        let m1 = s1 / s0;
        (m1 - 1.0 / zeta - mean_ln, s2 / s0 - m1 * m1 + 1.0 / (zeta * zeta))
    };
    let (mut lo, mut hi) = (1e-3_f64, 1e3_f64);
    if score(lo).0 > 0.0 || score(hi).0 < 0.0 {
        return Err(Error::NoConvergence("Weibull shape bracket"));
    }
    let mut zeta = 1.0;
    let mut converged = false;
    for _ in 0..200 {
        let (g, dg) = score(zeta);
        if g < 0.0 {
            lo = zeta;
        } else {
            hi = zeta;
        }
        let mut next = zeta - g / dg;
        if !(next > lo && next < hi) {
            next = libm::sqrt(lo * hi);
        }
        if (next - zeta).abs() < 1e-14 * zeta || (hi - lo) < 1e-15 * hi {
            zeta = next;
            converged = true;
            break;
        }
        zeta = next;
    }
    if !converged {
        return Err(Error::NoConvergence("Weibull shape"));
    }
    let mean_pow = ln_y.iter().map(|&l| libm::exp(zeta * l)).sum::<f64>() / n;
    let d = y_max * libm::pow(mean_pow, 1.0 / zeta);
    let ln_d = libm::log(d);
    let sum_ln_y: f64 = y.iter().map(|&v| libm::log(v)).sum();
    let tail: f64 = y.iter().map(|&v| libm::exp(zeta * (libm::log(v) - ln_d))).sum();
    let ln_l = n * (libm::log(zeta) - zeta * ln_d) + (zeta - 1.0) * sum_ln_y - tail;
    Ok((zeta, d, ln_l))
}

/// Fit (ζ, d_x) of the two-parameter Weibull.
pub fn fit_weibull2(sample: &[f64], cfg: &FitConfig) -> Result<Fit> {
    let p = prepare(sample, cfg)?;
    let (zeta, d_x, ln_l) = weibull_profile(p.x)?;
    Ok(Fit { params: DistParams::Weibull2 { zeta, d_x }, log_likelihood: ln_l, stage_best: Vec::new(), diagnostics: Vec::new() })
}

fn shift_from_index(i: u64, min: f64) -> f64 {
    if i >= SHIFT_LATTICE.hi {
        min * (1.0 - 1e-9)
    } else {
        min * (i as f64 * SHIFT_LATTICE.unit)
    }
}

/// Fit (ζ, d_x, x₀) of the shifted Weibull. The location lattice includes
/// x₀ = 0, so the result is never worse than [`fit_weibull2`].
pub fn fit_weibull3(sample: &[f64], cfg: &FitConfig) -> Result<Fit> {
    let p = prepare(sample, cfg)?;
    let mut shifted = alloc::vec![0.0; p.x.len()];
    let mut profile = |i: u64| -> Result<(f64, f64, f64)> {
        let x0 = shift_from_index(i, p.min);
        for (s, &x) in shifted.iter_mut().zip(p.x) {
            *s = x - x0;
        }
        weibull_profile(&shifted)
    };
    let mut failure = None;
    let best = staged_argmax(SHIFT_LATTICE, &ONE_D_STAGES, |i| match profile(i) {
        Ok((_, _, l)) => l,
        Err(e) => {
            failure.get_or_insert(e);
            f64::NEG_INFINITY
        }
    });
    if !best.value.is_finite() {
        return Err(failure.unwrap_or(Error::NoConvergence("shifted Weibull fit")));
    }
    let (zeta, d_x, ln_l) = profile(best.index)?;
    let x0 = shift_from_index(best.index, p.min);
    let diagnostics = if best.index == SHIFT_LATTICE.hi { alloc::vec![Diagnostic::AtSearchEdge] } else { Vec::new() };
    let _ = p.max;
    Ok(Fit { params: DistParams::Weibull3 { zeta, d_x, x0 }, log_likelihood: ln_l, stage_best: best.stage_best, diagnostics })
}

// ---------------------------------------------------------------- ranking

/// Fit one family.
pub fn fit_family(family: DistFamily, sample: &[f64], cfg: &FitConfig) -> Result<Fit> {
    match family {
        DistFamily::StretchedExp => fit_stretched_exp(sample, cfg),
        DistFamily::PowerLawCutoff => fit_powerlaw_cutoff(sample, cfg),
        DistFamily::QExp => fit_qexp(sample, cfg),
        DistFamily::Weibull2 => fit_weibull2(sample, cfg),
        DistFamily::Weibull3 => fit_weibull3(sample, cfg),
    }
}

/// Fit one family and attach its KS distance.
///
/// Unlike [`fit_qexp`], a q-exponential optimum on the exponential boundary
/// is kept and flagged with [`Diagnostic::ExponentialBoundary`].
pub fn fit_and_score(family: DistFamily, sample: &[f64], tau_q: f64, cfg: &FitConfig) -> Result<DistributionFit> {
    let fit = match family {
        DistFamily::QExp => fit_qexp_unchecked(sample, cfg)?,
        other => fit_family(other, sample, cfg)?,
    };
    let ks = ks_statistic(sample, &fit.params)?;
    Ok(DistributionFit {
        family,
        params: fit.params,
        log_likelihood: fit.log_likelihood,
        ks,
        n: sample.len(),
        tau_q,
        diagnostics: fit.diagnostics,
    })
}

/// Fit all five families and sort them by KS distance.
///
/// A failing family is recorded in [`Ranking::failures`] without aborting
/// the others; the call fails only when every family fails.
pub fn fit_all_and_rank(sample: &[f64], tau_q: f64, cfg: &FitConfig) -> Result<Ranking> {
    let mut fits = Vec::new();
    let mut failures = Vec::new();
    for family in DistFamily::ALL {
        match fit_and_score(family, sample, tau_q, cfg) {
            Ok(f) => fits.push(f),
            Err(e) => failures.push((family, e)),
        }
    }
    if fits.is_empty() {
        // Surface a shared precondition failure as is.
        if let Some((_, e)) = failures.first() {
            if failures.iter().all(|(_, other)| other == e) {
                return Err(e.clone());
            }
        }
        return Err(Error::AllFitsFailed);
    }
    fits.sort_by(|a, b| a.ks.total_cmp(&b.ks).then(a.family.cmp(&b.family)));
    Ok(Ranking { fits, failures })
}
