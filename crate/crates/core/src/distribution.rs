//! The five candidate recurrence-interval distributions in scaled units
//! x = τ/τ_Q, their densities, distribution functions and the KS distance.
//!
//! The stretched exponential and the power law with exponential cutoff carry
//! a single free exponent: their prefactor and rate are eliminated by the
//! unit-mass and unit-mean conditions ∫f = ∫xf = 1. The resulting densities
//! are
//!
//! * stretched exponential: f(x) = μB/Γ(1/μ) · exp(−(Bx)^μ), B = Γ(2/μ)/Γ(1/μ);
//! * power law with cutoff, α = −γ: f(x) = α^α/Γ(α) · x^{α−1} e^{−αx}.
//!
//! In raw units these correspond to a = μΓ(2/μ)/(Γ(1/μ)²τ_Q),
//! b = Γ(2/μ)/(Γ(1/μ)τ_Q), k = −γ/τ_Q and c = (−γ/τ_Q)^{−γ}/Γ(−γ).

use alloc::vec::Vec;
use core::fmt;

use crate::special::{inc_gamma, ln_gamma};
use crate::{Error, Result};

/// Candidate family tag.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum DistFamily {
    /// Stretched exponential with unit-mean reduction.
    StretchedExp,
    /// Power law with exponential cutoff with unit-mean reduction.
    PowerLawCutoff,
    /// q-exponential.
    QExp,
    /// Two-parameter Weibull.
    Weibull2,
    /// Three-parameter (shifted) Weibull.
    Weibull3,
}

impl DistFamily {
    /// All five families in canonical order.
    pub const ALL: [DistFamily; 5] =
        [DistFamily::StretchedExp, DistFamily::PowerLawCutoff, DistFamily::QExp, DistFamily::Weibull2, DistFamily::Weibull3];

    /// Stable snake_case identifier used in reports.
    pub fn name(self) -> &'static str {
        match self {
            DistFamily::StretchedExp => "stretched_exp",
            DistFamily::PowerLawCutoff => "power_law_cutoff",
            DistFamily::QExp => "q_exp",
            DistFamily::Weibull2 => "weibull2",
            DistFamily::Weibull3 => "weibull3",
        }
    }

    /// Inverse of [`DistFamily::name`].
    pub fn from_name(name: &str) -> Option<Self> {
        Self::ALL.into_iter().find(|f| f.name() == name)
    }
}

impl fmt::Display for DistFamily {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Fitted parameters in scaled units.
#[allow(missing_docs)]
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum DistParams {
    /// Stretching exponent μ > 0.
    StretchedExp { mu: f64 },
    /// Exponent γ ∈ (−1, 0).
    PowerLawCutoff { gamma: f64 },
    /// q ∈ (1, 2) and λ_x = λτ_Q > 0.
    QExp { q: f64, lambda_x: f64 },
    /// Shape ζ and scale d_x = d/τ_Q.
    Weibull2 { zeta: f64, d_x: f64 },
    /// Shape ζ, scale d_x and location x₀ = τ₀/τ_Q ≥ 0.
    Weibull3 { zeta: f64, d_x: f64, x0: f64 },
}

/// Prefactors and rates of the unscaled (raw τ) densities.
#[allow(missing_docs)]
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum RawConstants {
    /// p(τ) = a exp[−(bτ)^μ].
    StretchedExp { a: f64, b: f64 },
    /// p(τ) = c τ^{−γ−1} exp(−kτ).
    PowerLawCutoff { c: f64, k: f64 },
    /// p(τ) = (2−q)λ[1+(q−1)λτ]^{−1/(q−1)}.
    QExp { lambda: f64 },
    /// Scale d in slots.
    Weibull2 { d: f64 },
    /// Scale d and location τ₀ in slots.
    Weibull3 { d: f64, tau0: f64 },
}

fn positive(x: f64) -> bool {
    x > 0.0 && x.is_finite()
}

impl DistParams {
    /// Family tag of these parameters.
    pub fn family(&self) -> DistFamily {
        match self {
            DistParams::StretchedExp { .. } => DistFamily::StretchedExp,
            DistParams::PowerLawCutoff { .. } => DistFamily::PowerLawCutoff,
            DistParams::QExp { .. } => DistFamily::QExp,
            DistParams::Weibull2 { .. } => DistFamily::Weibull2,
            DistParams::Weibull3 { .. } => DistFamily::Weibull3,
        }
    }

    /// `(name, value)` pairs using the report parameter names.
    pub fn named_values(&self) -> Vec<(&'static str, f64)> {
        match *self {
            DistParams::StretchedExp { mu } => alloc::vec![("mu", mu)],
            DistParams::PowerLawCutoff { gamma } => alloc::vec![("gamma", gamma)],
            DistParams::QExp { q, lambda_x } => alloc::vec![("q", q), ("lambda_x", lambda_x)],
            DistParams::Weibull2 { zeta, d_x } => alloc::vec![("zeta", zeta), ("d_x", d_x)],
            DistParams::Weibull3 { zeta, d_x, x0 } => alloc::vec![("zeta", zeta), ("d_x", d_x), ("x0", x0)],
        }
    }

    /// Check the parameter domain of the family.
    pub fn validate(&self) -> Result<()> {
        let ok = match *self {
            DistParams::StretchedExp { mu } => positive(mu),
            DistParams::PowerLawCutoff { gamma } => gamma > -1.0 && gamma < 0.0,
            DistParams::QExp { q, lambda_x } => q > 1.0 && q < 2.0 && positive(lambda_x),
            DistParams::Weibull2 { zeta, d_x } => positive(zeta) && positive(d_x),
            DistParams::Weibull3 { zeta, d_x, x0 } => positive(zeta) && positive(d_x) && x0 >= 0.0 && x0.is_finite(),
        };
        if ok {
            Ok(())
        } else {
            Err(Error::InvalidParams(match self.family() {
                DistFamily::StretchedExp => "stretched exponential needs mu > 0",
                DistFamily::PowerLawCutoff => "power law with cutoff needs gamma in (-1, 0)",
                DistFamily::QExp => "q-exponential needs q in (1, 2) and lambda_x > 0",
                DistFamily::Weibull2 => "Weibull needs zeta > 0 and d_x > 0",
                DistFamily::Weibull3 => "shifted Weibull needs zeta > 0, d_x > 0, x0 >= 0",
            }))
        }
    }

    /// Prefactors of the raw-τ density for mean recurrence time `tau_q`.
    pub fn raw_constants(&self, tau_q: f64) -> Result<RawConstants> {
        self.validate()?;
        if !positive(tau_q) {
            return Err(Error::Domain("tau_q must be positive"));
        }
        Ok(match *self {
            DistParams::StretchedExp { mu } => {
                let (lg1, lg2) = (ln_gamma(1.0 / mu), ln_gamma(2.0 / mu));
                RawConstants::StretchedExp {
                    a: mu * libm::exp(lg2 - 2.0 * lg1) / tau_q,
                    b: libm::exp(lg2 - lg1) / tau_q,
                }
            }
            DistParams::PowerLawCutoff { gamma } => {
                let k = -gamma / tau_q;
                RawConstants::PowerLawCutoff { c: libm::exp(-gamma * libm::log(k) - ln_gamma(-gamma)), k }
            }
            DistParams::QExp { lambda_x, .. } => RawConstants::QExp { lambda: lambda_x / tau_q },
            DistParams::Weibull2 { d_x, .. } => RawConstants::Weibull2 { d: d_x * tau_q },
            DistParams::Weibull3 { d_x, x0, .. } => RawConstants::Weibull3 { d: d_x * tau_q, tau0: x0 * tau_q },
        })
    }

    /// Lower end of the support.
    pub fn support_start(&self) -> f64 {
        match *self {
            DistParams::Weibull3 { x0, .. } => x0,
            _ => 0.0,
        }
    }

    /// ln f(x). `-inf`/`+inf` at the support edge where the density vanishes or diverges.
    pub fn ln_pdf(&self, x: f64) -> Result<f64> {
        self.validate()?;
        if !(x >= 0.0) {
            return Err(Error::Domain("density argument must be non-negative"));
        }
        Ok(match *self {
            DistParams::StretchedExp { mu } => {
                let (lg1, lg2) = (ln_gamma(1.0 / mu), ln_gamma(2.0 / mu));
                let ln_b = lg2 - lg1;
                libm::log(mu) + lg2 - 2.0 * lg1 - libm::exp(mu * (ln_b + libm::log(x)))
            }
            DistParams::PowerLawCutoff { gamma } => {
                let alpha = -gamma;
                alpha * libm::log(alpha) - ln_gamma(alpha) + (alpha - 1.0) * libm::log(x) - alpha * x
            }
            DistParams::QExp { q, lambda_x } => {
                libm::log((2.0 - q) * lambda_x) - libm::log1p((q - 1.0) * lambda_x * x) / (q - 1.0)
            }
            DistParams::Weibull2 { zeta, d_x } => weibull_ln_pdf(zeta, d_x, x),
            DistParams::Weibull3 { zeta, d_x, x0 } => {
                if x <= x0 {
                    return Err(Error::Domain("shifted Weibull density needs x > x0"));
                }
                weibull_ln_pdf(zeta, d_x, x - x0)
            }
        })
    }

    /// Density f(x) in scaled units.
    pub fn pdf(&self, x: f64) -> Result<f64> {
        self.ln_pdf(x).map(libm::exp)
    }

    /// Survival function 1 − F(x), computed without cancellation.
    pub fn sf(&self, x: f64) -> Result<f64> {
        self.validate()?;
        if x.is_nan() {
            return Err(Error::Domain("distribution argument is NaN"));
        }
        if x <= self.support_start() {
            return Ok(1.0);
        }
        Ok(match *self {
            DistParams::StretchedExp { mu } => {
                let ln_b = ln_gamma(2.0 / mu) - ln_gamma(1.0 / mu);
                inc_gamma(1.0 / mu, libm::exp(mu * (ln_b + libm::log(x))))?.1
            }
            DistParams::PowerLawCutoff { gamma } => inc_gamma(-gamma, -gamma * x)?.1,
            DistParams::QExp { q, lambda_x } => {
                libm::exp((q - 2.0) / (q - 1.0) * libm::log1p((q - 1.0) * lambda_x * x))
            }
            DistParams::Weibull2 { zeta, d_x } => libm::exp(-libm::pow(x / d_x, zeta)),
            DistParams::Weibull3 { zeta, d_x, x0 } => libm::exp(-libm::pow((x - x0) / d_x, zeta)),
        })
    }

    /// Distribution function F(x).
    pub fn cdf(&self, x: f64) -> Result<f64> {
        self.validate()?;
        if x.is_nan() {
            return Err(Error::Domain("distribution argument is NaN"));
        }
        if x <= self.support_start() {
            return Ok(0.0);
        }
        Ok(match *self {
            DistParams::StretchedExp { mu } => {
                let ln_b = ln_gamma(2.0 / mu) - ln_gamma(1.0 / mu);
                inc_gamma(1.0 / mu, libm::exp(mu * (ln_b + libm::log(x))))?.0
            }
            DistParams::PowerLawCutoff { gamma } => inc_gamma(-gamma, -gamma * x)?.0,
            DistParams::QExp { q, lambda_x } => {
                -libm::expm1((q - 2.0) / (q - 1.0) * libm::log1p((q - 1.0) * lambda_x * x))
            }
            DistParams::Weibull2 { zeta, d_x } => -libm::expm1(-libm::pow(x / d_x, zeta)),
            DistParams::Weibull3 { zeta, d_x, x0 } => -libm::expm1(-libm::pow((x - x0) / d_x, zeta)),
        })
    }
}

fn weibull_ln_pdf(zeta: f64, d: f64, y: f64) -> f64 {
    let z = y / d;
    if z == 0.0 {
        return if zeta == 1.0 {
            -libm::log(d)
        } else if zeta < 1.0 {
            f64::INFINITY
        } else {
            f64::NEG_INFINITY
        };
    }
    libm::log(zeta / d) + (zeta - 1.0) * libm::log(z) - libm::pow(z, zeta)
}

/// Two-sided Kolmogorov–Smirnov distance between the sample's empirical
/// distribution and the fitted CDF.
///
/// At every sample point both limits of the empirical step function are
/// compared, so tied values are handled as a single step.
pub fn ks_statistic(sample: &[f64], params: &DistParams) -> Result<f64> {
    params.validate()?;
    if sample.is_empty() {
        return Err(Error::EmptySeries);
    }
    let mut sorted = sample.to_vec();
    sorted.sort_unstable_by(f64::total_cmp);
    let n = sorted.len() as f64;
    let mut d: f64 = 0.0;
    let mut i = 0;
    while i < sorted.len() {
        let mut j = i + 1;
        while j < sorted.len() && sorted[j] == sorted[i] {
            j += 1;
        }
        let f = params.cdf(sorted[i])?;
        d = d.max((i as f64 / n - f).abs()).max((j as f64 / n - f).abs());
        i = j;
    }
    Ok(d.min(1.0))
}
