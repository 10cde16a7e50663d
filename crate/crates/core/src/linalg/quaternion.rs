//! Unit quaternions as the double cover of SO(3).

use serde::Serialize;

use super::groups::RotationMatrix;
use super::mat::Mat;
use crate::error::{Error, Result};

/// `(w, x, y, z)` with unit Euclidean norm.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct UnitQuaternion {
    pub w: f64,
    pub x: f64,
    pub y: f64,
    pub z: f64,
}

impl UnitQuaternion {
    pub const IDENTITY: UnitQuaternion = UnitQuaternion {
        w: 1.0,
        x: 0.0,
        y: 0.0,
        z: 0.0,
    };

    pub fn new(w: f64, x: f64, y: f64, z: f64) -> Result<Self> {
        let q = UnitQuaternion { w, x, y, z };
        if !q.to_array().iter().all(|c| c.is_finite()) || (q.norm() - 1.0).abs() > 1e-12 {
            return Err(Error::InvalidParameter(format!(
                "quaternion norm {} is not 1",
                q.norm()
            )));
        }
        Ok(q)
    }

    pub fn normalized(a: [f64; 4]) -> Self {
        let n = a.iter().map(|c| c * c).sum::<f64>().sqrt();
        UnitQuaternion::from_array(a.map(|c| c / n))
    }

    pub(crate) fn from_array(a: [f64; 4]) -> Self {
        UnitQuaternion {
            w: a[0],
            x: a[1],
            y: a[2],
            z: a[3],
        }
    }

    pub fn to_array(&self) -> [f64; 4] {
        [self.w, self.x, self.y, self.z]
    }

    pub fn norm(&self) -> f64 {
        self.to_array().iter().map(|c| c * c).sum::<f64>().sqrt()
    }

    pub fn dot(&self, other: &UnitQuaternion) -> f64 {
        self.w * other.w + self.x * other.x + self.y * other.y + self.z * other.z
    }

    pub fn neg(&self) -> Self {
        UnitQuaternion {
            w: -self.w,
            x: -self.x,
            y: -self.y,
            z: -self.z,
        }
    }

    pub fn dist(&self, other: &UnitQuaternion) -> f64 {
        let a = self.to_array();
        let b = other.to_array();
        (0..4).map(|i| (a[i] - b[i]).powi(2)).sum::<f64>().sqrt()
    }

    /// Rotation about a unit axis by `angle` radians.
    pub fn from_axis_angle(axis: [f64; 3], angle: f64) -> Self {
        let (s, c) = (angle / 2.0).sin_cos();
        UnitQuaternion::normalized([c, axis[0] * s, axis[1] * s, axis[2] * s])
    }

    /// One of the two preimages of a rotation (Shepperd's method); the
    /// returned representative has `w ≥ 0`.
    pub fn from_rotation(r: &Mat) -> Self {
        let t = r.trace();
        let q = if t > r[(0, 0)] && t > r[(1, 1)] && t > r[(2, 2)] {
            let s = (1.0 + t).sqrt() * 2.0;
            [
                0.25 * s,
                (r[(2, 1)] - r[(1, 2)]) / s,
                (r[(0, 2)] - r[(2, 0)]) / s,
                (r[(1, 0)] - r[(0, 1)]) / s,
            ]
        } else if r[(0, 0)] >= r[(1, 1)] && r[(0, 0)] >= r[(2, 2)] {
            let s = (1.0 + r[(0, 0)] - r[(1, 1)] - r[(2, 2)]).sqrt() * 2.0;
            [
                (r[(2, 1)] - r[(1, 2)]) / s,
                0.25 * s,
                (r[(0, 1)] + r[(1, 0)]) / s,
                (r[(0, 2)] + r[(2, 0)]) / s,
            ]
        } else if r[(1, 1)] >= r[(2, 2)] {
            let s = (1.0 + r[(1, 1)] - r[(0, 0)] - r[(2, 2)]).sqrt() * 2.0;
            [
                (r[(0, 2)] - r[(2, 0)]) / s,
                (r[(0, 1)] + r[(1, 0)]) / s,
                0.25 * s,
                (r[(1, 2)] + r[(2, 1)]) / s,
            ]
        } else {
            let s = (1.0 + r[(2, 2)] - r[(0, 0)] - r[(1, 1)]).sqrt() * 2.0;
            [
                (r[(1, 0)] - r[(0, 1)]) / s,
                (r[(0, 2)] + r[(2, 0)]) / s,
                (r[(1, 2)] + r[(2, 1)]) / s,
                0.25 * s,
            ]
        };
        let q = UnitQuaternion::normalized(q);
        if q.w < 0.0 {
            q.neg()
        } else {
            q
        }
    }

    pub fn to_rotation(&self) -> Mat {
        rotation_bilinear(&self.to_array(), &self.to_array())
    }
}

/// Symmetric bilinear form `B(a, b)` with `B(q, q)` the rotation matrix of a
/// unit quaternion `q`. Its derivative along a curve is `2·B(q, q̇)`.
pub(crate) fn rotation_bilinear(a: &[f64; 4], b: &[f64; 4]) -> Mat {
    let [aw, ax, ay, az] = *a;
    let [bw, bx, by, bz] = *b;
    let sym = |p: f64, q: f64, r: f64, s: f64| p * q + r * s;
    Mat::from_rows3([
        [
            aw * bw + ax * bx - ay * by - az * bz,
            sym(ax, by, ay, bx) - sym(aw, bz, az, bw),
            sym(ax, bz, az, bx) + sym(aw, by, ay, bw),
        ],
        [
            sym(ax, by, ay, bx) + sym(aw, bz, az, bw),
            aw * bw - ax * bx + ay * by - az * bz,
            sym(ay, bz, az, by) - sym(aw, bx, ax, bw),
        ],
        [
            sym(ax, bz, az, bx) - sym(aw, by, ay, bw),
            sym(ay, bz, az, by) + sym(aw, bx, ax, bw),
            aw * bw - ax * bx - ay * by + az * bz,
        ],
    ])
}

/// Smallest `|⟨q_i, q_{i+1}⟩|` accepted when choosing signs by continuity.
pub const MIN_LIFT_DOT: f64 = 0.1;

/// Lifts a sampled path in SO(3) to a continuous path of unit quaternions.
///
/// The first element is the preimage with non-negative scalar part; each
/// subsequent sign is chosen so that consecutive quaternions have a
/// non-negative inner product.
pub fn quat_lift_path(path: &[RotationMatrix]) -> Result<Vec<UnitQuaternion>> {
    let mut out: Vec<UnitQuaternion> = Vec::with_capacity(path.len());
    for r in path {
        let q = UnitQuaternion::from_rotation(r.as_mat());
        let q = match out.last() {
            None => q,
            Some(prev) => {
                let d = prev.dot(&q);
                if d.abs() < MIN_LIFT_DOT {
                    return Err(Error::SamplingTooCoarse(format!(
                        "consecutive quaternions nearly orthogonal (|dot| = {:.3})",
                        d.abs()
                    )));
                }
                if d < 0.0 {
                    q.neg()
                } else {
                    q
                }
            }
        };
        out.push(q);
    }
    Ok(out)
}
