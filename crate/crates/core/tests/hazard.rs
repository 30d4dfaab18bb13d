mod common;

use common::*;
use revol_core::distribution::DistParams;
use revol_core::hazard::{hazard_curve, hazard_empirical, hazard_numeric, hazard_qexp, survival_qexp, HazardQuery};
use revol_core::synthetic::{renewal_intervals, GeneratorKind, GeneratorSpec};

#[test]
fn numeric_route_matches_closed_form_on_a_grid() {
    for &(q, lambda_x) in &[(1.1, 0.5), (1.3, 2.5), (1.6, 1.0), (1.9, 4.0)] {
        let tau_q = 40.0;
        let params = DistParams::QExp { q, lambda_x };
        for &t in &[0.0, 1.0, 7.0, 33.0, 150.0] {
            for &dt in &[1.0, 5.0, 10.0] {
                let a = hazard_numeric(&params, tau_q, HazardQuery::new(t, dt).unwrap()).unwrap();
                let b = hazard_qexp(q, lambda_x / tau_q, t, dt).unwrap();
                assert!((a - b).abs() < 1e-6, "q={q} t={t} dt={dt}: {a} vs {b}");
            }
        }
    }
}

#[test]
fn exponential_members_are_memoryless() {
    let tau_q = 25.0;
    for params in [
        DistParams::StretchedExp { mu: 1.0 },
        DistParams::Weibull2 { zeta: 1.0, d_x: 1.0 },
        DistParams::PowerLawCutoff { gamma: -(1.0 - 1e-9) },
    ] {
        let w0 = hazard_numeric(&params, tau_q, HazardQuery::new(0.0, 3.0).unwrap()).unwrap();
        let w1 = hazard_numeric(&params, tau_q, HazardQuery::new(60.0, 3.0).unwrap()).unwrap();
        assert!((w0 - w1).abs() < 1e-7, "{params:?}");
        assert!((w0 + (-3.0f64 / tau_q).exp_m1()).abs() < 1e-7);
    }
    let a = hazard_qexp(1.0 + 1e-6, 0.1, 0.0, 1.0).unwrap();
    let b = hazard_qexp(1.0 + 1e-6, 0.1, 100.0, 1.0).unwrap();
    assert!((a - b).abs() < 1e-5);
}

#[test]
fn numeric_hazard_is_a_probability() {
    let mut r = SplitMix(12);
    for k in 0..200 {
        let mut u = |lo: f64, hi: f64| lo + (hi - lo) * r.uniform();
        let p = match k % 5 {
            0 => DistParams::StretchedExp { mu: u(0.3, 3.0) },
            1 => DistParams::PowerLawCutoff { gamma: -u(0.1, 0.95) },
            2 => DistParams::QExp { q: u(1.05, 1.95), lambda_x: u(0.1, 10.0) },
            3 => DistParams::Weibull2 { zeta: u(0.4, 3.0), d_x: u(0.3, 3.0) },
            _ => DistParams::Weibull3 { zeta: u(0.4, 3.0), d_x: u(0.3, 3.0), x0: u(0.0, 0.5) },
        };
        let query = HazardQuery::new(u(0.0, 200.0), u(0.5, 20.0)).unwrap();
        match hazard_numeric(&p, u(5.0, 100.0), query) {
            Ok(w) => assert!((0.0..=1.0).contains(&w)),
            Err(revol_core::Error::SurvivalUnderflow) => {}
            Err(e) => panic!("{e}"),
        }
    }
}

#[test]
fn closed_form_consistency_and_monotonicity() {
    for &(q, l) in &[(1.1, 0.2), (1.3, 1.0), (1.7, 5.0)] {
        let mut prev = f64::INFINITY;
        for k in 0..200 {
            let t = 0.5 * k as f64;
            let w = hazard_qexp(q, l, t, 1.0).unwrap();
            let ratio = 1.0 - survival_qexp(q, l, t + 1.0).unwrap() / survival_qexp(q, l, t).unwrap();
            assert!((w - ratio).abs() < 1e-12);
            assert!(w < prev);
            prev = w;
            assert!(hazard_qexp(q, l, t, 2.0).unwrap() > w);
        }
    }
}

#[test]
fn empirical_hazard_tracks_closed_form() {
    let (q, lambda) = (1.3, 0.05);
    let spec = GeneratorSpec { kind: GeneratorKind::QExpRenewal { q, lambda }, n: 100_000, seed: 5 };
    let iv = renewal_intervals(&spec).unwrap();
    let mean = 1.0 / ((3.0 - 2.0 * q) * lambda);
    for t in 0..=(5.0 * mean) as u64 {
        for &dt in &[1.0, 5.0, 10.0] {
            let e = hazard_empirical(&iv, HazardQuery::new(t as f64, dt).unwrap(), 20).unwrap();
            assert!((e.w - hazard_qexp(q, lambda, t as f64, dt).unwrap()).abs() < 0.05);
        }
    }
    let grid: Vec<f64> = (0..50).map(|k| 4.0 * k as f64).collect();
    let curve = hazard_curve(q, lambda, &iv, 5.0, &grid, 20).unwrap();
    assert!(curve.points.iter().all(|p| (0.0..=1.0).contains(&p.w_analytic)));
}
