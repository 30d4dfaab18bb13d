//! Coarse-to-fine search over an integer-indexed parameter grid.
//!
//! Every stage evaluates points of one common fine lattice, so the staged
//! result is directly comparable with an exhaustive scan of that lattice.

use alloc::vec::Vec;

/// Inclusive index range of a parameter lattice; parameter = index × `unit`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Lattice {
    /// First admissible index.
    pub lo: u64,
    /// Last admissible index.
    pub hi: u64,
    /// Parameter spacing of adjacent indices.
    pub unit: f64,
}

/// Stretching exponent μ ∈ (0, 5] in steps of 1e-6.
pub const STRETCHED_EXP_LATTICE: Lattice = Lattice { lo: 1, hi: 5_000_000, unit: 1e-6 };
/// α = −γ ∈ (0, 1) in steps of 1e-6.
pub const POWER_LAW_LATTICE: Lattice = Lattice { lo: 1, hi: 999_999, unit: 1e-6 };
/// Lattice strides of the three stages: 1e-2, 1e-4, 1e-6.
pub const ONE_D_STAGES: [u64; 3] = [10_000, 100, 1];

/// Outcome of [`staged_argmax`].
#[derive(Debug, Clone, PartialEq)]
pub struct StagedMax {
    /// Best lattice index.
    pub index: u64,
    /// Objective at `index`.
    pub value: f64,
    /// Best value after each stage; non-decreasing.
    pub stage_best: Vec<f64>,
}

/// Maximize `f` over `lattice` by successive scans with the given strides.
///
/// After each stage the next one scans ±2 strides around the incumbent with
/// the next stride, which must divide the current one. Ties keep the lowest
/// index.
pub fn staged_argmax<F: FnMut(u64) -> f64>(lattice: Lattice, strides: &[u64], mut f: F) -> StagedMax {
    debug_assert!(strides.windows(2).all(|w| w[0] % w[1] == 0));
    let (mut a, mut b) = (lattice.lo, lattice.hi);
    let mut best_index = a;
    let mut best_value = f64::NEG_INFINITY;
    let mut stage_best = Vec::with_capacity(strides.len());
    for &stride in strides {
        let mut i = a;
        while i <= b {
            let v = f(i);
            if v > best_value || (v == best_value && i < best_index) {
                best_value = v;
                best_index = i;
            }
            i += stride;
        }
        stage_best.push(best_value);
        a = best_index.saturating_sub(2 * stride).max(lattice.lo);
        b = (best_index + 2 * stride).min(lattice.hi);
    }
    StagedMax { index: best_index, value: best_value, stage_best }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn finds_parabola_peak() {
        let lat = Lattice { lo: 1, hi: 1_000_000, unit: 1e-6 };
        let r = staged_argmax(lat, &ONE_D_STAGES, |i| -((i as f64) - 123_457.0).powi(2));
        assert_eq!(r.index, 123_457);
        assert!(r.stage_best.windows(2).all(|w| w[1] >= w[0]));
    }

    #[test]
    fn peak_at_lower_edge() {
        let lat = Lattice { lo: 1, hi: 500_000, unit: 1e-6 };
        let r = staged_argmax(lat, &ONE_D_STAGES, |i| -(i as f64));
        assert_eq!(r.index, 1);
    }

    #[test]
    fn peak_at_upper_edge() {
        let lat = Lattice { lo: 1, hi: 999_999, unit: 1e-6 };
        let r = staged_argmax(lat, &ONE_D_STAGES, |i| i as f64);
        assert_eq!(r.index, 999_999);
    }
}
