//! Global tolerance ladder.

/// Exact constructions (projection onto SL(d), rotations of the circle).
pub const CONSTRUCTION: f64 = 1e-12;
/// Group and algebra membership checks.
pub const INVARIANT: f64 = 1e-9;
/// Round trips through decompositions.
pub const DECOMPOSITION: f64 = 1e-8;
/// ODE fidelity per unit of integration time.
pub const ODE: f64 = 1e-6;
