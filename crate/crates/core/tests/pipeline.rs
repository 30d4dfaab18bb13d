use revol_core::pipeline::preprocess;
use revol_core::recurrence::sample_for_tau;
use revol_core::synthetic::{prices_from_events, renewal_event_series, renewal_intervals, GeneratorKind, GeneratorSpec};

#[test]
fn event_prices_round_trip_through_preprocessing() {
    let spec = GeneratorSpec { kind: GeneratorKind::QExpRenewal { q: 1.3, lambda: 0.05 }, n: 2000, seed: 1 };
    let events = renewal_event_series(&spec).unwrap();
    let prices = prices_from_events(&events, 30, 2).unwrap();
    let v = preprocess(&prices, false).unwrap().normalized.values();
    // Day openings are dropped, so volatility index k is event index k.
    assert_eq!(v.len(), events.len());
    let sample = sample_for_tau(&v, 10.0).unwrap();
    assert_eq!(sample.threshold, 0.0);
    let mut expected = renewal_intervals(&spec).unwrap();
    expected.remove(0);
    assert_eq!(sample.raw, expected);
}
