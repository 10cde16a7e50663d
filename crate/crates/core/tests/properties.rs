//! Property tests for the invariants of the linear algebra, driving,
//! discrete cocycle and homotopy layers.

use std::f64::consts::PI;

use cocycle_core::homotopy::build_homotopy;
use cocycle_core::linalg::{polar_decompose, project_to_sl, quat_lift_path};
use cocycle_core::*;
use proptest::prelude::*;

fn invertible3() -> impl Strategy<Value = Mat> {
    prop::array::uniform9(-2.0..2.0f64).prop_filter_map("well conditioned", |a| {
        let m = Mat::from_rows3([[a[0], a[1], a[2]], [a[3], a[4], a[5]], [a[6], a[7], a[8]]]);
        (m.det().abs() > 0.05).then(|| {
            let sign = m.det().signum();
            m * sign
        })
    })
}

fn invertible2() -> impl Strategy<Value = Mat> {
    prop::array::uniform4(-2.0..2.0f64).prop_filter_map("positive det", |a| {
        let m = Mat::from_rows2([[a[0], a[1]], [a[2], a[3]]]);
        (m.det() > 0.05).then_some(m)
    })
}

fn sl3() -> impl Strategy<Value = SlMatrix> {
    invertible3().prop_map(|m| project_to_sl(&m).unwrap())
}

fn sl2() -> impl Strategy<Value = SlMatrix> {
    invertible2().prop_map(|m| project_to_sl(&m).unwrap())
}

fn rz(angle: f64) -> Mat {
    let (s, c) = angle.sin_cos();
    Mat::from_rows3([[c, -s, 0.0], [s, c, 0.0], [0.0, 0.0, 1.0]])
}

/// Cocycles whose products stay bounded, so that absolute tolerances are
/// meaningful for long products.
fn bounded_cocycle() -> impl Strategy<Value = DiscreteCocycle> {
    let rot = CircleRotation::golden();
    prop_oneof![
        (-3i64..=3).prop_map(move |k| DiscreteCocycle::new(rot, Generator::RotationPower(k)).unwrap()),
        (0.0..1.0f64).prop_map(move |c| DiscreteCocycle::new(rot, Generator::DiagonalSine(c)).unwrap()),
        (1.0..1.05f64).prop_map(move |l| DiscreteCocycle::herman(rot, l).unwrap()),
    ]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn constructed_sl_matrices_are_unimodular(m in sl3()) {
        prop_assert!((m.det() - 1.0).abs() <= 1e-9);
    }

    #[test]
    fn polar_recomposes_3x3(m in sl3()) {
        let (r, s) = polar_decompose(&m).unwrap();
        prop_assert!((*r.as_mat() * *s.as_mat()).dist(&m) <= 1e-8);
        prop_assert!((r.det() - 1.0).abs() <= 1e-9);
    }

    #[test]
    fn polar_recomposes_2x2(m in sl2()) {
        let (r, s) = polar_decompose(&m).unwrap();
        prop_assert!((*r.as_mat() * *s.as_mat()).dist(&m) <= 1e-8);
    }

    #[test]
    fn operator_norm_at_least_one(m in sl3(), n in sl2()) {
        prop_assert!(m.operator_norm() >= 1.0 - 1e-12);
        prop_assert!(n.operator_norm() >= 1.0 - 1e-12);
    }

    #[test]
    fn flow_property(theta in 0.0..1.0f64, r in 0.0..1.0f64, s in -100.0..100.0f64, t in -100.0..100.0f64) {
        let flow = SuspensionFlow::new(CircleRotation::golden());
        let p = MappingTorusPoint::new(theta, r).unwrap();
        let a = flow.suspend(flow.suspend(p, s), t);
        let b = flow.suspend(p, s + t);
        let circ = |x: f64, y: f64| { let d = (x - y).abs(); d.min(1.0 - d) };
        prop_assert!(circ(a.theta, b.theta) <= 1e-9);
        prop_assert!(circ(a.r, b.r) <= 1e-9);
        let back = flow.suspend(flow.suspend(p, t), -t);
        prop_assert!(circ(back.theta, p.theta) <= 1e-9 && circ(back.r, p.r) <= 1e-9);
    }

    #[test]
    fn time_one_map_is_the_rotation(theta in 0.0..1.0f64, p in 1u64..50, q in 51u64..100) {
        let rot = CircleRotation::rational(p, q).unwrap();
        let flow = SuspensionFlow::new(rot);
        let x = flow.suspend(MappingTorusPoint::base(theta), 1.0);
        prop_assert_eq!(x.r, 0.0);
        prop_assert_eq!(x.theta, rot.rotate(theta, 1));
        let golden = SuspensionFlow::new(CircleRotation::golden());
        let y = golden.suspend(MappingTorusPoint::base(theta), 1.0);
        prop_assert!((y.theta - CircleRotation::golden().rotate(theta, 1)).abs() <= 1e-12);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(500))]

    #[test]
    fn discrete_cocycle_property(a in bounded_cocycle(), theta in 0.0..1.0f64, m in -30i64..=30, n in -30i64..=30) {
        let lhs = a.n_step(theta, m + n);
        let rhs = a.n_step(a.driving().rotate(theta, m), n) * a.n_step(theta, m);
        prop_assert!(lhs.dist(&rhs) <= 1e-9, "residual {}", lhs.dist(&rhs));
    }

    /// For expanding cocycles the residual is bounded by roundoff times the
    /// condition of the product, `‖Aⁿ‖·‖Aᵐ‖`.
    #[test]
    fn herman_cocycle_property_scaled(lambda in 1.0..4.0f64, theta in 0.0..1.0f64, m in -30i64..=30, n in -30i64..=30) {
        let a = DiscreteCocycle::herman(CircleRotation::golden(), lambda).unwrap();
        let an = a.n_step(a.driving().rotate(theta, m), n);
        let am = a.n_step(theta, m);
        let lhs = a.n_step(theta, m + n);
        let scale = an.frobenius_norm() * am.frobenius_norm();
        prop_assert!(lhs.dist(&(an * am)) <= 1e-12 * scale * scale.ln().max(1.0));
    }

    #[test]
    fn half_speed_identity(lambda in 1.0..3.0f64, theta in 0.0..1.0f64, n in -20i64..=20) {
        let a = DiscreteCocycle::herman(CircleRotation::golden(), lambda).unwrap();
        let b = half_speed(&a);
        let lhs = b.n_step(theta, n);
        let rhs = a.n_step(frac(2.0 * theta), n);
        prop_assert!(lhs.dist(&rhs) <= 1e-9 * rhs.frobenius_norm().max(1.0));
    }

    #[test]
    fn block_embedding_preserves_norm(lambda in 1.0..3.0f64, theta in 0.0..1.0f64, n in -20i64..=20) {
        let a = DiscreteCocycle::herman(CircleRotation::golden(), lambda).unwrap();
        let b = block_embed(&a).unwrap();
        let (x, y) = (b.n_step(theta, n).operator_norm(), a.n_step(theta, n).operator_norm());
        prop_assert!((x - y).abs() <= 1e-10 * y);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(40))]

    #[test]
    fn long_products_stay_unimodular(a in bounded_cocycle(), theta in 0.0..1.0f64, n in -1000i64..=1000) {
        prop_assert!((a.n_step(theta, n).det() - 1.0).abs() <= 1e-8);
    }

    #[test]
    fn winding_stable_under_refinement(k in -3i64..=3, lambda in 1.0..4.0f64, phase in 0.0..1.0f64) {
        let l = Loop::new(2, move |t| {
            Mat::rotation2(2.0 * PI * (k as f64 * t + phase)) * Mat::diag(&[lambda, 1.0 / lambda])
        }).unwrap();
        let w = winding_number(&l).unwrap();
        prop_assert_eq!(w, k);
        let fine = l.clone().with_resolution(2 * l.resolution()).unwrap();
        prop_assert_eq!(winding_number(&fine).unwrap(), w);
    }

    #[test]
    fn winding_is_additive(j in -3i64..=3, k in -3i64..=3, lambda in 1.0..3.0f64) {
        let d = Mat::diag(&[lambda, 1.0 / lambda]);
        let a = Loop::new(2, move |t| Mat::rotation2(2.0 * PI * j as f64 * t) * d).unwrap();
        let b = Loop::new(2, move |t| Mat::rotation2(2.0 * PI * k as f64 * t) * d).unwrap();
        let ab = concatenate(&a, &b).unwrap();
        prop_assert_eq!(winding_number(&ab).unwrap(), j + k);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    #[test]
    fn sl2_homotopy_contract(c in 0.0..1.5f64, m in sl2()) {
        let fixed = *m.as_mat();
        let l = Loop::new(2, move |t| {
            let x = c * (2.0 * PI * t).sin();
            fixed * Mat::diag(&[x.exp(), (-x).exp()])
        }).unwrap();
        let h = build_homotopy(&l).unwrap();
        prop_assert!(h.check(32).unwrap().passes());
    }

    #[test]
    fn sl3_homotopy_contract(lambda in 1.0..4.0f64) {
        let a = DiscreteCocycle::herman(CircleRotation::golden(), lambda).unwrap();
        let b = half_speed(&block_embed(&a).unwrap());
        let h = build_homotopy(&b.as_loop()).unwrap();
        let report = h.check(32).unwrap();
        prop_assert!(report.passes(), "{report:?}");
    }
}

#[test]
fn quaternion_lift_parity() {
    for k in 0..4i64 {
        let path: Vec<RotationMatrix> = (0..=512)
            .map(|i| RotationMatrix::new(rz(2.0 * PI * k as f64 * i as f64 / 512.0)).unwrap())
            .collect();
        let lift = quat_lift_path(&path).unwrap();
        let end = lift.last().unwrap().to_array();
        let sign = if k % 2 == 0 { 1.0 } else { -1.0 };
        let expected = [sign, 0.0, 0.0, 0.0];
        for (a, b) in end.iter().zip(expected) {
            assert!((a - b).abs() <= 1e-9, "k = {k}: {end:?}");
        }
    }
}

#[test]
fn classification_examples() {
    let rot = CircleRotation::golden();
    let h = DiscreteCocycle::herman(rot, 2.0).unwrap();
    assert_eq!(winding_number(&h.as_loop()).unwrap(), 1);
    let cw = DiscreteCocycle::new(
        rot,
        Generator::Herman(HermanParameters::with_convention(2.0, HermanConvention::Clockwise).unwrap()),
    )
    .unwrap();
    assert_eq!(winding_number(&cw.as_loop()).unwrap(), -1);
    let doubled = half_speed(&h);
    assert_eq!(winding_number(&doubled.as_loop()).unwrap(), 2);
    let embedded = half_speed(&block_embed(&h).unwrap());
    assert!(is_nullhomotopic(&embedded.as_loop()).unwrap());
    assert_eq!(
        classify(&block_embed(&h).unwrap().as_loop()).unwrap(),
        HomotopyClass::Parity { trivial: false }
    );
    assert!(is_nullhomotopic(&DiscreteCocycle::identity(rot, 2).unwrap().as_loop()).unwrap());
}
