use revol_core::fit::FitConfig;
use revol_core::pipeline::qexp_fits_by_tau;
use revol_core::rolling::{rolling_fit, PatternMode, WindowSpec};
use revol_core::series::{Stage, VolatilitySeries};
use revol_core::volatility::log_abs_returns;
use revol_core::synthetic::{clustered_prices, renewal_event_series, ClusteredSpec, GeneratorKind, GeneratorSpec};
use revol_core::DistParams;

fn indicator(q: f64, lambda: f64, n: usize, seed: u64) -> Vec<f64> {
    let spec = GeneratorSpec { kind: GeneratorKind::QExpRenewal { q, lambda }, n, seed };
    renewal_event_series(&spec).unwrap().iter().map(|&e| e as u8 as f64).collect()
}

fn quartiles(mut v: Vec<f64>) -> (f64, f64) {
    v.sort_by(f64::total_cmp);
    let at = |p: f64| v[((v.len() - 1) as f64 * p).round() as usize];
    (at(0.25), at(0.75))
}

#[test]
fn stationary_series_concentrates() {
    // Mean interval 50 slots; τ_Q below it so the threshold is zero and
    // the exceedances are exactly the events.
    let v = indicator(1.3, 0.05, 100_000, 1);
    let series = VolatilitySeries::from_values(&v, Stage::Normalized, 100).unwrap();
    let spec = WindowSpec::new(500_000, 250_000, 100).unwrap();
    let taus = [10.0, 20.0, 30.0];
    let traj = rolling_fit(&series, &taus, spec, PatternMode::PerWindow, &FitConfig::default()).unwrap();
    assert_eq!(traj.points.len(), spec.count(v.len()));
    let qs: Vec<f64> = traj.points.iter().map(|p| p.q_mean.unwrap()).collect();
    let mean = qs.iter().sum::<f64>() / qs.len() as f64;
    let sd = (qs.iter().map(|q| (q - mean).powi(2)).sum::<f64>() / qs.len() as f64).sqrt();
    assert!((mean - 1.3).abs() <= 0.05, "{mean}");
    assert!(sd <= 0.1);
    let (lo, hi) = quartiles(qs);
    assert!(hi - lo <= 0.1);
    for p in &traj.points {
        assert!(p.lambda_x.iter().all(Option::is_some));
    }
}

#[test]
fn single_window_equals_full_fit() {
    let v = indicator(1.3, 0.05, 3000, 2);
    let series = VolatilitySeries::from_values(&v, Stage::Normalized, 100).unwrap();
    let taus = [10.0, 20.0];
    let spec = WindowSpec { window_len: v.len(), step: 7, min_intervals: 100 };
    let traj = rolling_fit(&series, &taus, spec, PatternMode::PerWindow, &FitConfig::default()).unwrap();
    assert_eq!(traj.points.len(), 1);
    let full = qexp_fits_by_tau(&v, &taus, &FitConfig::default()).unwrap();
    for (k, f) in full.iter().enumerate() {
        let DistParams::QExp { q, lambda_x } = f.params else { panic!() };
        assert_eq!(traj.points[0].q[k], Some(q));
        assert_eq!(traj.points[0].lambda_x[k], Some(lambda_x));
    }
}

#[test]
fn regime_switch_is_tracked() {
    let mut v = indicator(1.1, 0.05, 20_000, 3);
    let switch = v.len();
    v.extend(indicator(1.5, 0.2, 20_000, 4));
    let series = VolatilitySeries::from_values(&v, Stage::Normalized, 100).unwrap();
    let spec = WindowSpec::new(switch / 2, switch / 8, 100).unwrap();
    let traj = rolling_fit(&series, &[8.0], spec, PatternMode::PerWindow, &FitConfig::default()).unwrap();
    // Heavy-tailed gaps can leave a window without enough intervals.
    let qs: Vec<(usize, f64)> = traj.points.iter().filter_map(|p| p.q_mean.map(|q| (p.window_end, q))).collect();
    assert!(qs.len() * 2 > traj.points.len());
    assert!(qs.first().unwrap().1 < 1.3 && qs.last().unwrap().1 > 1.3, "{qs:?}");
    let cross = qs.windows(2).find(|w| w[0].1 < 1.3 && w[1].1 >= 1.3).expect("no crossing");
    let mid = cross[1].0 as f64 - spec.window_len as f64 / 2.0;
    assert!((mid - switch as f64).abs() <= switch as f64 * 0.35, "crossing at {mid}, switch at {switch}");
}

#[test]
fn thin_windows_leave_entries_absent() {
    let v = indicator(1.3, 0.05, 400, 5);
    let series = VolatilitySeries::from_values(&v, Stage::Normalized, 100).unwrap();
    let spec = WindowSpec::new(5000, 2500, 150).unwrap();
    let traj = rolling_fit(&series, &[10.0], spec, PatternMode::PerWindow, &FitConfig::default()).unwrap();
    assert!(traj.points.iter().all(|p| p.q_mean.is_none() && p.lambda_x[0].is_none()));
}

#[test]
fn pattern_modes_both_run_on_raw_volatility() {
    let spec = ClusteredSpec { slots_per_day: 50, intraday_amplitude: 0.5, ..ClusteredSpec::default() };
    let raw = log_abs_returns(&clustered_prices(&spec, 400, 6).unwrap(), false).unwrap();
    let ws = WindowSpec::new(10_000, 5_000, 50).unwrap();
    for mode in [PatternMode::PerWindow, PatternMode::Global] {
        let t = rolling_fit(&raw, &[20.0, 40.0], ws, mode, &FitConfig::default()).unwrap();
        assert_eq!(t.points.len(), ws.count(raw.len()));
        assert!(t.points.iter().all(|p| p.q_mean.is_some()));
    }
}
