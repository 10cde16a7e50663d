//! Shared fixtures for the benchmarks.

use cocycle_core::{extend_sl2_via_embedding, CircleRotation, DiscreteCocycle, Extension};

/// Herman cocycle at the golden rotation.
pub fn herman(lambda: f64) -> DiscreteCocycle {
    DiscreteCocycle::herman(CircleRotation::golden(), lambda).expect("valid λ")
}

/// SL(3) extension of the Herman cocycle at λ = 2.
pub fn herman_extension() -> Extension {
    extend_sl2_via_embedding(&herman(2.0)).expect("embedding extends")
}
