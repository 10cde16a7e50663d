//! Checks against independent oracles: nalgebra for the linear algebra,
//! direct trigonometric products for the generators.

use std::f64::consts::PI;

use cocycle_core::linalg::{polar_decompose, project_to_sl, qr, spd_log, symmetric_eigen};
use cocycle_core::*;
use nalgebra::{Matrix2, Matrix3};

fn to_na3(m: &Mat) -> Matrix3<f64> {
    Matrix3::from_fn(|i, j| m[(i, j)])
}

fn to_na2(m: &Mat) -> Matrix2<f64> {
    Matrix2::from_fn(|i, j| m[(i, j)])
}

fn samples3() -> Vec<Mat> {
    let raw = [
        [[1.0, 2.0, 0.0], [0.0, 1.0, 3.0], [0.5, 0.0, 1.0]],
        [[4.0, -1.0, 0.2], [0.3, 0.5, 0.0], [0.0, 1.0, 2.0]],
        [[0.1, 0.0, 1.0], [1.0, 0.1, 0.0], [0.0, 1.0, 0.1]],
        [[2.0, 0.0, 0.0], [0.0, 3.0, 0.0], [0.0, 0.0, 1.0 / 6.0]],
    ];
    raw.iter()
        .map(|r| project_to_sl(&Mat::from_rows3(*r)).unwrap().into_mat())
        .collect()
}

#[test]
fn polar_matches_nalgebra_svd() {
    for m in samples3() {
        let (r, s) = polar_decompose(&SlMatrix::new(m).unwrap()).unwrap();
        let svd = to_na3(&m).svd(true, true);
        let (u, vt) = (svd.u.unwrap(), svd.v_t.unwrap());
        let r_ref = u * vt;
        let s_ref = vt.transpose() * Matrix3::from_diagonal(&svd.singular_values) * vt;
        let r_ours = to_na3(r.as_mat());
        let s_ours = to_na3(s.as_mat());
        assert!((r_ours - r_ref).norm() < 1e-10, "{m:?}");
        assert!((s_ours - s_ref).norm() < 1e-10, "{m:?}");
    }
}

#[test]
fn polar_2x2_matches_nalgebra_svd() {
    for angle in [0.0, 0.4, 2.0, -3.0] {
        let m = Mat::rotation2(angle) * Mat::from_rows2([[2.0, 1.0], [1.0, 1.0]]);
        let (r, _) = polar_decompose(&SlMatrix::new(m).unwrap()).unwrap();
        let svd = to_na2(&m).svd(true, true);
        let r_ref = svd.u.unwrap() * svd.v_t.unwrap();
        assert!((to_na2(r.as_mat()) - r_ref).norm() < 1e-12);
    }
}

#[test]
fn eigen_matches_nalgebra() {
    for m in samples3() {
        let sym = m.transpose() * m;
        let ours = symmetric_eigen(&sym);
        let mut ours_vals: Vec<f64> = ours.values[..3].to_vec();
        let mut theirs: Vec<f64> = to_na3(&sym).symmetric_eigen().eigenvalues.iter().copied().collect();
        ours_vals.sort_by(f64::total_cmp);
        theirs.sort_by(f64::total_cmp);
        for (a, b) in ours_vals.iter().zip(&theirs) {
            assert!((a - b).abs() < 1e-10 * b.abs().max(1.0));
        }
    }
}

#[test]
fn qr_matches_nalgebra_up_to_signs() {
    for m in samples3() {
        let (q, r) = qr(&m);
        let na = to_na3(&m).qr();
        let (qn, rn) = (na.q(), na.r());
        for i in 0..3 {
            let sign = rn[(i, i)].signum();
            assert!((r[(i, i)] - sign * rn[(i, i)]).abs() < 1e-12);
            for k in 0..3 {
                assert!((q[(k, i)] - sign * qn[(k, i)]).abs() < 1e-12);
            }
        }
    }
}

#[test]
fn det_and_inverse_match_nalgebra() {
    for m in samples3() {
        let inv = SlMatrix::new(m).unwrap().inverse();
        let theirs = to_na3(&m).try_inverse().unwrap();
        assert!((to_na3(inv.as_mat()) - theirs).norm() < 1e-12);
        assert!((to_na3(&m).determinant() - 1.0).abs() < 1e-12);
    }
}

#[test]
fn spd_log_matches_eigen_oracle() {
    let s = Mat::from_rows2([[2.0, 1.0], [1.0, 1.0]]);
    let log = spd_log(&SpdFactor::new(s).unwrap()).unwrap();
    let e = to_na2(&s).symmetric_eigen();
    let reference = e.eigenvectors * Matrix2::from_diagonal(&e.eigenvalues.map(f64::ln)) * e.eigenvectors.transpose();
    assert!((to_na2(log.as_mat()) - reference).norm() < 1e-12);
}

fn trig_herman(lambda: f64, theta: f64) -> [[f64; 2]; 2] {
    let (s, c) = (2.0 * PI * theta).sin_cos();
    [[c * lambda, -s / lambda], [s * lambda, c / lambda]]
}

#[test]
fn herman_matches_trig_oracle() {
    let h = DiscreteCocycle::herman(CircleRotation::golden(), 2.0).unwrap();
    assert!(h.evaluate(0.0).dist(&Mat::diag(&[2.0, 0.5])) < 1e-15);
    for theta in [0.25, 0.1, 0.77] {
        let reference = Mat::from_rows2(trig_herman(2.0, theta));
        assert!(h.evaluate(theta).dist(&reference) < 1e-15);
    }
    let q = h.evaluate(0.25);
    assert!(q.dist(&Mat::from_rows2([[0.0, -0.5], [2.0, 0.0]])) < 1e-15);
}

#[test]
fn n_step_matches_brute_force_product() {
    let rot = CircleRotation::golden();
    let h = DiscreteCocycle::herman(rot, 2.0).unwrap();
    for theta in [0.1, 0.5, 0.93] {
        let mut p = Mat::identity(2);
        let mut t = theta;
        for n in 1..=12 {
            p = Mat::from_rows2(trig_herman(2.0, t)) * p;
            t = (t + rot.value()).fract();
            let ours = h.n_step(theta, n);
            assert!(ours.dist(&p) / p.frobenius_norm() < 1e-13);
        }
    }
    let start = rot.rotate(0.1, -5);
    let inv = h.n_step(start, 5).inverse();
    assert!(h.n_step(0.1, -5).dist(&inv) < 1e-10);
}

#[test]
fn constant_power_and_identity() {
    let rot = CircleRotation::golden();
    let c = DiscreteCocycle::constant(rot, Mat::diag(&[2.0, 0.5])).unwrap();
    assert!(c.n_step(0.3, 3).dist(&Mat::diag(&[8.0, 0.125])) < 1e-15);
    for n in [-7, 0, 5] {
        assert_eq!(*c.n_step(0.3, 0).as_mat(), Mat::identity(2));
        let id = DiscreteCocycle::identity(rot, 3).unwrap();
        assert!(id.n_step(0.3, n).dist(&Mat::identity(3)) < 1e-15);
    }
}

#[test]
fn half_speed_and_block_oracles() {
    let a = DiscreteCocycle::herman(CircleRotation::golden(), 2.0).unwrap();
    let b = half_speed(&a);
    for i in 0..100 {
        let theta = (i as f64 * 0.137).fract();
        let n = 1 + i % 20;
        let lhs = b.n_step(theta, n);
        let rhs = a.n_step(frac(2.0 * theta), n);
        assert!(
            lhs.dist(&rhs) <= 1e-10,
            "{} {n} {}",
            lhs.dist(&rhs),
            rhs.frobenius_norm()
        );
    }
    let e = block_embed(&a).unwrap();
    assert!(e.evaluate(0.0).dist(&Mat::diag(&[2.0, 0.5, 1.0])) < 1e-15);
    for i in 0..100 {
        let theta = (i as f64 * 0.0731).fract();
        let (v, w) = ([0.3, -1.2, 0.0], 0.7);
        let out = e.evaluate(theta).mul_vec(&[v[0], v[1], w]);
        let top = a.evaluate(theta).mul_vec(&v);
        assert!((out[0] - top[0]).abs() < 1e-12 && (out[1] - top[1]).abs() < 1e-12);
        assert!((out[2] - w).abs() < 1e-12);
    }
}
