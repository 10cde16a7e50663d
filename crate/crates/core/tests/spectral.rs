//! Spectral estimators on the Herman cocycle and its SL(3) extension.

use cocycle_core::spectral::*;
use cocycle_core::*;

fn herman(lambda: f64) -> DiscreteCocycle {
    DiscreteCocycle::herman(CircleRotation::golden(), lambda).unwrap()
}

#[test]
fn herman_exponents_respect_lower_bound() {
    for lambda in [1.5, 2.0, 4.0] {
        let r = lyapunov_spectrum(&herman(lambda), 0.1, 20_000).unwrap();
        let bound = ((lambda + 1.0 / lambda) / 2.0).ln();
        assert!(r.exponents[0] >= bound - 0.01, "λ = {lambda}: {:?}", r.exponents);
        assert!(r.sum.abs() <= 1e-3);
        assert!((r.exponents[0] + r.exponents[1]).abs() <= 1e-3);
    }
}

#[test]
fn fk_series_agrees_with_qr_top_exponent() {
    let h = herman(2.0);
    let fk = fk_series(&h, 0.1, 20_000).unwrap();
    let qr = lyapunov_spectrum(&h, 0.1, 20_000).unwrap();
    assert!((fk.last() - qr.exponents[0]).abs() < 5e-3);
    assert!(fk.points.windows(2).all(|w| w[0].0 < w[1].0));
}

#[test]
fn embedded_product_path_spectrum() {
    let b = half_speed(&block_embed(&herman(2.0)).unwrap());
    let r = lyapunov_spectrum(&b, 0.2, 10_000).unwrap();
    assert!(r.exponents[1].abs() <= 1e-3, "{:?}", r.exponents);
    let e3 = vector_exponent(&b, 0.2, &[0.0, 0.0, 1.0], 10_000, TimeDirection::Forward).unwrap();
    assert!(e3.last().abs() <= 1e-12);
    let d = directions_at(&b, 0.2, 2_000).unwrap();
    let c = d.center.unwrap();
    assert!((c[2].abs() - 1.0).abs() <= 1e-6 && c[0].abs() <= 1e-6 && c[1].abs() <= 1e-6);
}

#[test]
fn oseledets_directions_are_invariant() {
    let h = herman(2.0);
    let field = oseledets_directions(&h, 16, 2_000).unwrap();
    assert!(invariance_residual(&h, &field).unwrap() <= 1e-4);
}

#[test]
fn directions_require_a_gap() {
    let id = DiscreteCocycle::identity(CircleRotation::golden(), 2).unwrap();
    assert!(matches!(
        directions_at(&id, 0.0, 100),
        Err(Error::DegenerateSpectrum(_))
    ));
}

#[test]
fn lyapunov_properties_hold_at_finite_time() {
    let r = le_property_check(&herman(2.0), 0.3, &[1.0, 0.2, 0.0], &[-0.4, 1.0, 0.0], 200, 7).unwrap();
    assert!(r.passed, "{r:?}");
}

#[test]
fn spectrum_transfers_to_extension() {
    let h = herman(2.0);
    let ext = extend_sl2_via_embedding(&h).unwrap();
    let t = extension_spectrum_compare(&h, &ext, 8, 1_000).unwrap();
    assert!(t.max_product_discrepancy <= 1e-8, "{t:?}");
    assert!(t.max_spot_discrepancy <= 5e-6, "{t:?}");
}

#[test]
fn projective_orbit_bookkeeping() {
    let h = herman(2.0);
    let start = ProjectivePoint::new(0.1, [1.0, 0.0]).unwrap();
    let occ = orbit_occupancy(&h, start, 10_000, 20).unwrap();
    assert_eq!(occ.counts.iter().sum::<u64>(), 10_000);
    assert!(occ.coverage > 0.0 && occ.coverage <= 1.0);
    let next = projective_step(&h, &start);
    assert!((next.theta - CircleRotation::golden().rotate(0.1, 1)).abs() < 1e-15);
    assert!(ProjectivePoint::new(0.1, [0.0, 0.0]).is_err());
}

#[test]
fn exploratory_diagnostics_run() {
    let h = herman(2.0);
    let gap = fk_gap_diagnostic(&h, 0.1, 10).unwrap();
    assert_eq!(gap.windows.len(), 10);
    assert!(gap.windows.iter().all(|w| w.1 <= w.2));
    let osc = oscillation_diagnostic(&h, 3..=4, 200).unwrap();
    assert_eq!(osc.len(), 2);
}
