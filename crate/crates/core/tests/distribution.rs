mod common;

use common::*;
use revol_core::distribution::{ks_statistic, DistParams};
use revol_core::special::gamma;

fn random_params(rng: &mut SplitMix, which: usize) -> DistParams {
    let mut u = |lo: f64, hi: f64| lo + (hi - lo) * rng.uniform();
    match which % 5 {
        0 => DistParams::StretchedExp { mu: u(0.3, 3.0) },
        1 => DistParams::PowerLawCutoff { gamma: -u(0.2, 0.95) },
        2 => DistParams::QExp { q: u(1.05, 1.45), lambda_x: u(0.3, 5.0) },
        3 => DistParams::Weibull2 { zeta: u(0.5, 3.0), d_x: u(0.3, 3.0) },
        _ => DistParams::Weibull3 { zeta: u(0.5, 3.0), d_x: u(0.3, 3.0), x0: u(0.0, 0.5) },
    }
}

/// pdf at s + y, zero where the offset vanishes in rounding.
fn pdf_from_start(p: &DistParams, y: f64) -> f64 {
    let x = p.support_start() + y;
    if x > p.support_start() { p.pdf(x).unwrap() } else { 0.0 }
}

/// ∫ g(x) over the support, integrating in the distance from its start.
fn over_support(p: &DistParams, g: impl Fn(f64) -> f64) -> f64 {
    let s = p.support_start();
    tanh_sinh(|y| g(s + y), 0.0, 1.0) + exp_sinh(|y| g(s + y), 1.0, 1.0)
}

#[test]
fn gamma_reference_values() {
    for &(z, g) in GAMMA_REFERENCE.iter() {
        let rel = ((gamma(z).unwrap() - g) / g).abs();
        assert!(rel < 1e-10, "z = {z}: rel error {rel:e}");
    }
}

#[test]
fn densities_are_normalized() {
    let mut rng = SplitMix(1);
    for k in 0..60 {
        let p = random_params(&mut rng, k);
        let s = p.support_start();
        let mass = over_support(&p, |x| pdf_from_start(&p, x - s));
        assert!((mass - 1.0).abs() < 1e-5, "{p:?}: mass {mass}");
    }
}

#[test]
fn constrained_families_have_unit_mean() {
    let mut rng = SplitMix(2);
    for k in 0..40 {
        let p = random_params(&mut rng, k % 2);
        let mass = over_support(&p, |x| p.pdf(x).unwrap());
        let mean = over_support(&p, |x| x * p.pdf(x).unwrap());
        assert!((mass - 1.0).abs() < 1e-6, "{p:?}: mass {mass}");
        assert!((mean - 1.0).abs() < 1e-6, "{p:?}: mean {mean}");
    }
}

#[test]
fn cdf_matches_integrated_pdf() {
    let mut rng = SplitMix(3);
    for k in 0..25 {
        let p = random_params(&mut rng, k);
        let s = p.support_start();
        assert_eq!(p.cdf(s).unwrap(), 0.0);
        for i in 1..=50 {
            let x = s + 0.1 * i as f64;
            let integral = tanh_sinh(|y| pdf_from_start(&p, y), 0.0, x - s);
            let c = p.cdf(x).unwrap();
            assert!((c - integral).abs() < 1e-6, "{p:?} at {x}: {c} vs {integral}");
            assert!((p.cdf(x).unwrap() + p.sf(x).unwrap() - 1.0).abs() < 1e-12);
        }
    }
}

#[test]
fn pdf_is_derivative_of_cdf() {
    let mut rng = SplitMix(4);
    for k in 0..25 {
        let p = random_params(&mut rng, k);
        let s = p.support_start();
        for i in 1..=20 {
            let x = s + 0.2 * i as f64;
            let h = 1e-5 * x.max(1.0);
            let fd = (p.cdf(x + h).unwrap() - p.cdf(x - h).unwrap()) / (2.0 * h);
            let f = p.pdf(x).unwrap();
            assert!((fd - f).abs() <= 1e-4 * f.max(1e-3), "{p:?} at {x}: {fd} vs {f}");
        }
    }
}

#[test]
fn cdf_is_monotone_and_reaches_one() {
    let mut rng = SplitMix(5);
    for k in 0..25 {
        let p = random_params(&mut rng, k);
        let mut prev = 0.0;
        for i in 0..400 {
            let x = p.support_start() + 0.05 * i as f64 * (1.0 + i as f64 / 20.0);
            let c = p.cdf(x).unwrap();
            assert!(c >= prev && c <= 1.0);
            prev = c;
        }
        assert!(p.cdf(1e9).unwrap() > 1.0 - 1e-6, "{p:?}");
    }
}

#[test]
fn qexp_cdf_approaches_exponential() {
    let p = DistParams::QExp { q: 1.0 + 1e-6, lambda_x: 1.0 };
    for &x in &[0.1, 1.0, 3.0, 8.0] {
        assert!((p.cdf(x).unwrap() - (1.0 - (-x).exp())).abs() < 1e-6);
    }
}

#[test]
fn ks_on_quantile_sample_is_half_step() {
    let n = 1000;
    let (q, l) = (1.3, 2.5);
    let qexp = DistParams::QExp { q, lambda_x: l };
    let sample: Vec<f64> = (1..=n)
        .map(|i| {
            let u = (i as f64 - 0.5) / n as f64;
            ((1.0 - u).powf((q - 1.0) / (q - 2.0)) - 1.0) / ((q - 1.0) * l)
        })
        .collect();
    assert!(ks_statistic(&sample, &qexp).unwrap() <= 0.5 / n as f64 + 1e-12);
    let weib = DistParams::Weibull2 { zeta: 0.8, d_x: 1.7 };
    let sample: Vec<f64> = (1..=n).map(|i| 1.7 * (-(1.0 - (i as f64 - 0.5) / n as f64).ln()).powf(1.0 / 0.8)).collect();
    assert!(ks_statistic(&sample, &weib).unwrap() <= 0.5 / n as f64 + 1e-12);
}

#[test]
fn ks_matches_double_loop() {
    let mut rng = SplitMix(6);
    for k in 0..30 {
        let p = random_params(&mut rng, k);
        let sample: Vec<f64> = (0..100).map(|_| 0.6 + (rng.uniform() * 40.0).floor() / 10.0).collect();
        let a = ks_statistic(&sample, &p).unwrap();
        let b = ks_brute_force(&sample, |x| p.cdf(x).unwrap());
        assert!((a - b).abs() < 1e-12);
        assert!((0.0..=1.0).contains(&a));
    }
}
