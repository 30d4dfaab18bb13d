//! Gamma function and regularized incomplete gamma functions.

use crate::{Error, Result};

/// Γ(z) for z > 0; overflows to +∞ above about 171.6.
pub fn gamma(z: f64) -> Result<f64> {
    if !(z > 0.0) || !z.is_finite() {
        return Err(Error::Domain("gamma requires a finite z > 0"));
    }
    Ok(libm::tgamma(z))
}

/// ln Γ(z) for z > 0. Finite far beyond the overflow point of Γ.
pub fn ln_gamma(z: f64) -> f64 {
    debug_assert!(z > 0.0);
    libm::lgamma(z)
}

const INC_GAMMA_MAX_ITER: usize = 100_000;
const INC_GAMMA_EPS: f64 = 1e-15;
const TINY: f64 = 1e-300;

/// Regularized incomplete gamma pair (P(a, x), Q(a, x)) for a > 0, x ≥ 0.
///
/// Series expansion for x < a + 1, Lentz continued fraction otherwise; the
/// complement is never formed by subtraction of two numbers close to one.
pub(crate) fn inc_gamma(a: f64, x: f64) -> Result<(f64, f64)> {
    if !(a > 0.0) || !(x >= 0.0) {
        return Err(Error::Domain("incomplete gamma requires a > 0 and x >= 0"));
    }
    if x == 0.0 {
        return Ok((0.0, 1.0));
    }
    if x.is_infinite() {
        return Ok((1.0, 0.0));
    }
    let ln_prefactor = -x + a * libm::log(x) - ln_gamma(a);
    if x < a + 1.0 {
        let mut term = 1.0 / a;
        let mut sum = term;
        let mut ap = a;
        for _ in 0..INC_GAMMA_MAX_ITER {
            ap += 1.0;
            term *= x / ap;
            sum += term;
            if term.abs() < sum.abs() * INC_GAMMA_EPS {
                let p = (libm::exp(ln_prefactor) * sum).min(1.0);
                return Ok((p, 1.0 - p));
            }
        }
        Err(Error::NoConvergence("incomplete gamma series"))
    } else {
        let mut b = x + 1.0 - a;
        let mut c = 1.0 / TINY;
        let mut d = 1.0 / b;
        let mut h = d;
        for i in 1..INC_GAMMA_MAX_ITER {
            let an = -(i as f64) * (i as f64 - a);
            b += 2.0;
            d = an * d + b;
            if d.abs() < TINY {
                d = TINY;
            }
            c = b + an / c;
            if c.abs() < TINY {
                c = TINY;
            }
            d = 1.0 / d;
            let delta = d * c;
            h *= delta;
            if (delta - 1.0).abs() < INC_GAMMA_EPS {
                let q = (libm::exp(ln_prefactor) * h).min(1.0);
                return Ok((1.0 - q, q));
            }
        }
        Err(Error::NoConvergence("incomplete gamma continued fraction"))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gamma_known_values() {
        assert!((gamma(1.0).unwrap() - 1.0).abs() < 1e-15);
        let sqrt_pi = 1.772_453_850_905_516;
        assert!((gamma(0.5).unwrap() - sqrt_pi).abs() < 1e-14);
        assert!((gamma(5.0).unwrap() - 24.0).abs() < 1e-12);
    }

    #[test]
    fn gamma_rejects_non_positive() {
        assert!(gamma(0.0).is_err());
        assert!(gamma(-1.5).is_err());
        assert!(gamma(f64::NAN).is_err());
    }

    #[test]
    fn gamma_recurrence() {
        // Γ(z+1) = zΓ(z)
        let mut z = 0.013;
        while z < 29.0 {
            let r = gamma(z + 1.0).unwrap() / (z * gamma(z).unwrap());
            assert!((r - 1.0).abs() < 1e-10, "z = {z}: ratio {r}");
            z += 1.37;
        }
    }

    #[test]
    fn ln_gamma_matches_gamma() {
        for &z in &[0.1, 0.5, 1.0, 2.5, 10.0, 30.0, 150.0] {
            let direct = libm::log(gamma(z).unwrap());
            assert!((ln_gamma(z) - direct).abs() < 1e-12 * direct.abs().max(1.0));
        }
        // ln Γ(1e6) from Stirling: (z-1/2) ln z - z + ln(2π)/2 + 1/(12z)
        let z: f64 = 1e6;
        let stirling = (z - 0.5) * z.ln() - z + 0.918_938_533_204_672_8 + 1.0 / (12.0 * z);
        assert!((ln_gamma(z) - stirling).abs() / stirling < 1e-13);
    }

    #[test]
    fn inc_gamma_exponential_case() {
        // P(1, x) = 1 - e^{-x}
        for &x in &[0.01, 0.5, 1.0, 3.0, 20.0] {
            let (p, q) = inc_gamma(1.0, x).unwrap();
            assert!((p - (1.0 - (-x).exp())).abs() < 1e-14);
            assert!((q - (-x).exp()).abs() < 1e-14 * (-x).exp().max(1e-300) + 1e-300);
        }
    }

    #[test]
    fn inc_gamma_half_is_erf() {
        // P(1/2, x) = erf(√x)
        for &x in &[0.02, 0.3, 1.0, 2.0, 6.0] {
            let (p, _) = inc_gamma(0.5, x).unwrap();
            assert!((p - libm::erf(libm::sqrt(x))).abs() < 1e-13);
        }
    }

    #[test]
    fn inc_gamma_domain() {
        assert!(inc_gamma(0.0, 1.0).is_err());
        assert!(inc_gamma(1.0, -1.0).is_err());
        assert_eq!(inc_gamma(2.0, 0.0).unwrap(), (0.0, 1.0));
    }
}
