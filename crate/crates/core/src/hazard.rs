//! Hazard probabilities W(Δt|t): the chance that the next event arrives
//! within Δt given that t has elapsed since the last one.

use alloc::vec::Vec;

use crate::distribution::DistParams;
use crate::quadrature::integrate;
use crate::{Error, Result};

/// Default minimum tail count for empirical estimates.
pub const DEFAULT_MIN_COUNT: usize = 20;

/// Elapsed time and horizon, both in slots.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HazardQuery {
    /// Time since the last event, t ≥ 0.
    pub t: f64,
    /// Horizon Δt > 0.
    pub delta_t: f64,
}

impl HazardQuery {
    /// Validated query.
    pub fn new(t: f64, delta_t: f64) -> Result<Self> {
        if !(t >= 0.0) || !t.is_finite() {
            return Err(Error::Domain("elapsed time must be finite and >= 0"));
        }
        if !(delta_t > 0.0) || !delta_t.is_finite() {
            return Err(Error::Domain("horizon must be finite and > 0"));
        }
        Ok(Self { t, delta_t })
    }
}

fn check_qexp(q: f64, lambda: f64) -> Result<()> {
    if !(q > 1.0 && q < 2.0) {
        return Err(Error::InvalidParams("q-exponential needs 1 < q < 2"));
    }
    if !(lambda > 0.0) || !lambda.is_finite() {
        return Err(Error::InvalidParams("q-exponential needs lambda > 0"));
    }
    Ok(())
}

fn check_times(t: f64, delta_t: f64) -> Result<()> {
    if !(t >= 0.0) || !(delta_t >= 0.0) || !t.is_finite() || !delta_t.is_finite() {
        return Err(Error::Domain("hazard query needs finite t >= 0 and delta_t >= 0"));
    }
    Ok(())
}

/// Survival S(t) = [1 + (q−1)λt]^{1−1/(q−1)} of the q-exponential in raw slots.
pub fn survival_qexp(q: f64, lambda: f64, t: f64) -> Result<f64> {
    check_qexp(q, lambda)?;
    if !(t >= 0.0) {
        return Err(Error::Domain("survival needs t >= 0"));
    }
    let c = q - 1.0;
    Ok(libm::exp((1.0 - 1.0 / c) * libm::log1p(c * lambda * t)))
}

/// W(Δt|t) of the q-exponential with raw rate λ.
///
/// Evaluated as 1 − S(t+Δt)/S(t) = 1 − (1+u)^{1−1/(q−1)} with
/// u = (q−1)λΔt / (1 + (q−1)λt), through `expm1`/`log1p` so that small
/// probabilities keep full relative precision. Δt = 0 gives 0.
pub fn hazard_qexp(q: f64, lambda: f64, t: f64, delta_t: f64) -> Result<f64> {
    check_qexp(q, lambda)?;
    check_times(t, delta_t)?;
    let c = q - 1.0;
    let u = c * lambda * delta_t / (1.0 + c * lambda * t);
    Ok(-libm::expm1((1.0 - 1.0 / c) * libm::log1p(u)))
}

/// W(Δt|t) written exactly as the closed form
/// 1 − [1 + (q−1)λΔt/(1+(q−1)λt)]^{1−1/(q−1)}, without the `expm1` rewrite.
pub fn hazard_qexp_direct(q: f64, lambda: f64, t: f64, delta_t: f64) -> Result<f64> {
    check_qexp(q, lambda)?;
    check_times(t, delta_t)?;
    let c = q - 1.0;
    Ok(1.0 - libm::pow(1.0 + c * lambda * delta_t / (1.0 + c * lambda * t), 1.0 - 1.0 / c))
}

/// W(Δt|t) for any fitted family from the ratio of pdf integrals.
///
/// `params` are in scaled units; t and Δt are raw slots divided by `tau_q`
/// internally. The numerator is integrated adaptively and the denominator
/// uses the closed-form survival.
pub fn hazard_numeric(params: &DistParams, tau_q: f64, query: HazardQuery) -> Result<f64> {
    params.validate()?;
    if !(tau_q > 0.0) || !tau_q.is_finite() {
        return Err(Error::Domain("tau_q must be positive"));
    }
    check_times(query.t, query.delta_t)?;
    let x = query.t / tau_q;
    let dx = query.delta_t / tau_q;
    let denom = params.sf(x)?;
    if denom < 1e-300 {
        return Err(Error::SurvivalUnderflow);
    }
    let lo = x.max(params.support_start());
    let hi = x + dx;
    if hi <= lo {
        return Ok(0.0);
    }
    let num = integrate(|s| params.pdf(s).unwrap_or(0.0), lo, hi, 1e-10 * denom, 1e-10)?;
    Ok((num / denom).clamp(0.0, 1.0))
}

/// Empirical hazard with its tail count.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EmpiricalHazard {
    /// #{τ : t < τ ≤ t+Δt} / #{τ : τ > t}.
    pub w: f64,
    /// #{τ : τ > t}.
    pub n_tail: usize,
}

/// Empirical W(Δt|t) from raw intervals using the half-open bin (t, t+Δt].
pub fn hazard_empirical(intervals: &[u64], query: HazardQuery, min_count: usize) -> Result<EmpiricalHazard> {
    let (t, end) = (query.t, query.t + query.delta_t);
    let mut tail = 0usize;
    let mut hits = 0usize;
    for &tau in intervals {
        let tau = tau as f64;
        if tau > t {
            tail += 1;
            if tau <= end {
                hits += 1;
            }
        }
    }
    if tail < min_count.max(1) {
        return Err(Error::InsufficientTail { count: tail, min: min_count.max(1) });
    }
    Ok(EmpiricalHazard { w: hits as f64 / tail as f64, n_tail: tail })
}

/// One row of a hazard curve.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HazardPoint {
    /// Elapsed time in slots.
    pub t: f64,
    /// q-exponential hazard.
    pub w_analytic: f64,
    /// Empirical hazard, absent where the tail is too thin.
    pub w_empirical: Option<f64>,
    /// Intervals longer than t.
    pub n_tail: usize,
}

/// Hazard as a function of t at a fixed horizon.
#[derive(Debug, Clone, PartialEq)]
pub struct HazardCurve {
    /// Horizon Δt in slots.
    pub delta_t: f64,
    /// Rows in the order of the t grid.
    pub points: Vec<HazardPoint>,
}

/// Analytic and empirical hazard over a grid of t values.
pub fn hazard_curve(q: f64, lambda: f64, intervals: &[u64], delta_t: f64, t_grid: &[f64], min_count: usize) -> Result<HazardCurve> {
    let mut points = Vec::with_capacity(t_grid.len());
    for &t in t_grid {
        let query = HazardQuery::new(t, delta_t)?;
        let w_analytic = hazard_qexp(q, lambda, t, delta_t)?;
        let (w_empirical, n_tail) = match hazard_empirical(intervals, query, min_count) {
            Ok(e) => (Some(e.w), e.n_tail),
            Err(Error::InsufficientTail { count, .. }) => (None, count),
            Err(e) => return Err(e),
        };
        points.push(HazardPoint { t, w_analytic, w_empirical, n_tail });
    }
    Ok(HazardCurve { delta_t, points })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn survival_values() {
        assert_eq!(survival_qexp(1.3, 0.7, 0.0).unwrap(), 1.0);
        assert!((survival_qexp(1.5, 1.0, 2.0).unwrap() - 0.5).abs() < 1e-15);
        let s = survival_qexp(1.0 + 1e-6, 1.0, 3.0).unwrap();
        assert!((s - (-3.0f64).exp()).abs() < 1e-6);
        assert!(survival_qexp(2.0, 1.0, 1.0).is_err());
        assert!(survival_qexp(1.5, 0.0, 1.0).is_err());
    }

    #[test]
    fn hazard_values() {
        assert!((hazard_qexp(1.5, 1.0, 1.0, 1.0).unwrap() - 0.25).abs() < 1e-15);
        assert!((hazard_qexp(1.5, 1.0, 0.0, 1.0).unwrap() - 1.0 / 3.0).abs() < 1e-15);
        assert_eq!(hazard_qexp(1.5, 1.0, 4.0, 0.0).unwrap(), 0.0);
        let a = hazard_qexp(1.0 + 1e-6, 0.3, 0.0, 2.0).unwrap();
        let b = hazard_qexp(1.0 + 1e-6, 0.3, 100.0, 2.0).unwrap();
        assert!((a - b).abs() < 1e-5);
    }

    #[test]
    fn direct_form_agrees() {
        for &(q, l, t, d) in &[(1.1, 0.2, 0.0, 1.0), (1.3, 1.0, 17.0, 5.0), (1.9, 5.0, 99.0, 10.0)] {
            let a = hazard_qexp(q, l, t, d).unwrap();
            let b = hazard_qexp_direct(q, l, t, d).unwrap();
            assert!((a - b).abs() < 1e-12, "{a} {b}");
        }
    }

    #[test]
    fn numeric_matches_closed_form() {
        let params = DistParams::QExp { q: 1.3, lambda_x: 2.0 };
        let tau_q = 50.0;
        for &t in &[0.0, 3.0, 40.0, 300.0] {
            for &d in &[1.0, 5.0, 10.0] {
                let w = hazard_numeric(&params, tau_q, HazardQuery::new(t, d).unwrap()).unwrap();
                let exact = hazard_qexp(1.3, 2.0 / tau_q, t, d).unwrap();
                assert!((w - exact).abs() < 1e-6, "t={t} d={d}: {w} vs {exact}");
            }
        }
    }

    #[test]
    fn numeric_exponential_is_memoryless() {
        let params = DistParams::Weibull2 { zeta: 1.0, d_x: 1.0 };
        let tau_q = 20.0;
        let expected = -libm::expm1(-2.0 / tau_q);
        for &t in &[0.0, 10.0, 80.0] {
            let w = hazard_numeric(&params, tau_q, HazardQuery::new(t, 2.0).unwrap()).unwrap();
            assert!((w - expected).abs() < 1e-9);
        }
    }

    #[test]
    fn deep_tail_underflows() {
        let params = DistParams::Weibull2 { zeta: 3.0, d_x: 1.0 };
        let err = hazard_numeric(&params, 1.0, HazardQuery::new(1e3, 1.0).unwrap()).unwrap_err();
        assert_eq!(err, Error::SurvivalUnderflow);
    }

    #[test]
    fn empirical_counts() {
        let iv = [1, 2, 3, 4, 5];
        let e = hazard_empirical(&iv, HazardQuery::new(2.0, 1.0).unwrap(), 1).unwrap();
        assert!((e.w - 1.0 / 3.0).abs() < 1e-15);
        assert_eq!(e.n_tail, 3);
        assert!(matches!(
            hazard_empirical(&iv, HazardQuery::new(5.0, 1.0).unwrap(), 1),
            Err(Error::InsufficientTail { count: 0, .. })
        ));
        assert!(matches!(hazard_empirical(&iv, HazardQuery::new(0.0, 1.0).unwrap(), 20), Err(Error::InsufficientTail { .. })));
    }

    #[test]
    fn curve_marks_thin_tails() {
        let iv: Vec<u64> = (1..=30).collect();
        let c = hazard_curve(1.3, 0.1, &iv, 1.0, &[0.0, 20.0], 20).unwrap();
        assert!(c.points[0].w_empirical.is_some());
        assert_eq!(c.points[1].w_empirical, None);
        assert_eq!(c.points[1].n_tail, 10);
    }
}
