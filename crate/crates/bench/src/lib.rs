//! Shared inputs for the benchmarks.

use syzygy_core::curvering::{canonical_ring, HypCurve};
use syzygy_core::hypmodel::ModelParams;
use syzygy_core::koszul::GradedRingData;
use syzygy_core::seed;

/// Petri cases of increasing size, ending at the 1260x1260 matrix.
pub fn petri_cases() -> Vec<ModelParams> {
    [(6, 2), (8, 3), (9, 4), (10, 4)].iter().map(|&(g, r)| ModelParams::new(g, r).expect("valid case")).collect()
}

/// Canonical ring of a seeded random hyperelliptic curve.
pub fn hyperelliptic_ring(g: usize, qmax: usize) -> GradedRingData {
    let curve = HypCurve::random(g, &mut seed::rng(3, &[g as u64])).expect("random curve");
    canonical_ring(&curve, qmax).expect("ring")
}
