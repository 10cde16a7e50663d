//! Checked matrix newtypes: SL(d), 𝔰𝔩(d), SO(d) and unimodular SPD.

use std::ops::{Deref, Mul};

use serde::{Serialize, Serializer};

use super::mat::Mat;
use crate::error::{Error, Result};
use crate::tol;

/// Real matrix with unit determinant.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SlMatrix(Mat);

impl SlMatrix {
    pub fn new(m: Mat) -> Result<Self> {
        check_dim(&m)?;
        if !m.is_finite() {
            return Err(Error::NonFinite);
        }
        let det = m.det();
        if (det - 1.0).abs() > tol::INVARIANT {
            return Err(Error::NotUnimodular {
                det,
                tol: tol::INVARIANT,
            });
        }
        Ok(SlMatrix(m))
    }

    /// Wraps a matrix known to be unimodular up to roundoff (products and
    /// inverses of SL matrices).
    pub(crate) fn new_unchecked(m: Mat) -> Self {
        debug_assert!(m.is_finite());
        SlMatrix(m)
    }

    pub fn identity(dim: usize) -> Self {
        SlMatrix(Mat::identity(dim))
    }

    /// Inverse through the adjugate. The determinant is taken to be 1:
    /// for products with large norm the floating-point determinant carries
    /// an error of order `ε‖m‖²` and would spoil the result.
    pub fn inverse(&self) -> SlMatrix {
        SlMatrix(self.0.adjugate())
    }

    pub fn as_mat(&self) -> &Mat {
        &self.0
    }

    pub fn into_mat(self) -> Mat {
        self.0
    }

    pub fn block_embed(&self) -> SlMatrix {
        SlMatrix(self.0.block_embed())
    }
}

impl Deref for SlMatrix {
    type Target = Mat;
    fn deref(&self) -> &Mat {
        &self.0
    }
}

impl Mul for SlMatrix {
    type Output = SlMatrix;
    fn mul(self, rhs: SlMatrix) -> SlMatrix {
        SlMatrix(self.0 * rhs.0)
    }
}

impl Serialize for SlMatrix {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.0.rows().serialize(s)
    }
}

/// Element of 𝔰𝔩(d): trace zero.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct TracelessMatrix(Mat);

impl TracelessMatrix {
    pub fn new(m: Mat) -> Result<Self> {
        if !m.is_finite() {
            return Err(Error::NonFinite);
        }
        if m.trace().abs() > 1e-8 {
            return Err(Error::InvalidParameter(format!("trace {} is not zero", m.trace())));
        }
        Ok(TracelessMatrix(m))
    }

    /// Removes the trace by subtracting `(tr/d)·Id`. Returns the projection and
    /// the magnitude of the correction.
    pub fn project(m: Mat) -> (Self, f64) {
        let d = m.dim();
        let shift = m.trace() / d as f64;
        (TracelessMatrix(m - Mat::identity(d) * shift), shift.abs())
    }

    pub fn as_mat(&self) -> &Mat {
        &self.0
    }

    pub fn into_mat(self) -> Mat {
        self.0
    }
}

impl Deref for TracelessMatrix {
    type Target = Mat;
    fn deref(&self) -> &Mat {
        &self.0
    }
}

/// Orthogonal matrix with determinant +1.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct RotationMatrix(Mat);

impl RotationMatrix {
    pub fn new(m: Mat) -> Result<Self> {
        check_dim(&m)?;
        let d = m.dim();
        let err = (m.transpose() * m).dist(&Mat::identity(d));
        if !m.is_finite() || err > tol::INVARIANT || (m.det() - 1.0).abs() > tol::INVARIANT {
            return Err(Error::InvalidParameter(format!(
                "not a rotation (orthogonality error {err:e})"
            )));
        }
        Ok(RotationMatrix(m))
    }

    pub(crate) fn new_unchecked(m: Mat) -> Self {
        RotationMatrix(m)
    }

    pub fn as_mat(&self) -> &Mat {
        &self.0
    }

    /// Rotation angle of a planar rotation, in `(−π, π]`.
    pub fn angle2(&self) -> f64 {
        debug_assert_eq!(self.0.dim(), 2);
        self.0[(1, 0)].atan2(self.0[(0, 0)])
    }
}

impl Deref for RotationMatrix {
    type Target = Mat;
    fn deref(&self) -> &Mat {
        &self.0
    }
}

/// Symmetric positive-definite matrix with unit determinant.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SpdFactor(Mat);

impl SpdFactor {
    pub fn new(m: Mat) -> Result<Self> {
        check_dim(&m)?;
        if !m.is_finite() {
            return Err(Error::NotSpd);
        }
        let asym = (m - m.transpose()).max_abs();
        if asym > tol::INVARIANT * m.max_abs().max(1.0) {
            return Err(Error::NotSpd);
        }
        let eig = super::eigen::symmetric_eigen(&m);
        if eig.values[..m.dim()].iter().any(|&x| x <= 0.0) {
            return Err(Error::NotSpd);
        }
        if (m.det() - 1.0).abs() > tol::INVARIANT {
            return Err(Error::NotSpd);
        }
        Ok(SpdFactor(m))
    }

    pub(crate) fn new_unchecked(m: Mat) -> Self {
        SpdFactor(m)
    }

    pub fn as_mat(&self) -> &Mat {
        &self.0
    }
}

impl Deref for SpdFactor {
    type Target = Mat;
    fn deref(&self) -> &Mat {
        &self.0
    }
}

fn check_dim(m: &Mat) -> Result<()> {
    if (2..=3).contains(&m.dim()) {
        Ok(())
    } else {
        Err(Error::UnsupportedDimension(m.dim()))
    }
}

/// Rescales a matrix with positive determinant onto SL(d): `m / det(m)^{1/d}`.
pub fn project_to_sl(m: &Mat) -> Result<SlMatrix> {
    check_dim(m)?;
    let det = m.det();
    if !m.is_finite() || !det.is_finite() {
        return Err(Error::NonFinite);
    }
    if det <= 0.0 {
        return Err(Error::NonPositiveDeterminant(det));
    }
    Ok(SlMatrix(renormalize(m)))
}

/// Divides by `exp(log_det / d)`, i.e. removes a determinant known from
/// well-conditioned factors rather than from `m` itself.
#[inline]
pub(crate) fn rescale_by_log_det(m: &Mat, log_det: f64) -> Mat {
    *m * (-log_det / m.dim() as f64).exp()
}

/// Unchecked variant of [`project_to_sl`] for hot loops.
#[inline]
pub(crate) fn renormalize(m: &Mat) -> Mat {
    let det = m.det();
    let s = match m.dim() {
        2 => det.sqrt(),
        _ => det.cbrt(),
    };
    *m * (1.0 / s)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn project_examples() {
        let p = project_to_sl(&(Mat::identity(2) * 2.0)).unwrap();
        assert!(p.dist(&Mat::identity(2)) < 1e-15);

        let h = Mat::from_rows2([[2.0, 0.3], [0.0, 0.5]]);
        assert!(project_to_sl(&h).unwrap().dist(&h) < 1e-15);

        // det 1.01 oracle: the determinant is evaluated directly.
        let m = Mat::from_rows2([[1.01, 0.0], [0.0, 1.0]]);
        let p = project_to_sl(&m).unwrap();
        assert!((p.det() - 1.0).abs() <= 1e-12);
        assert!(p.dist(&(m * (1.0 / 1.01f64.sqrt()))) < 1e-15);
    }

    #[test]
    fn project_rejects_negative_det() {
        let m = Mat::diag(&[-1.0, 1.0]);
        assert!(matches!(project_to_sl(&m), Err(Error::NonPositiveDeterminant(_))));
    }

    #[test]
    fn sl_rejects_off_unit_det() {
        assert!(SlMatrix::new(Mat::diag(&[2.0, 0.6])).is_err());
        assert!(SlMatrix::new(Mat::diag(&[2.0, 0.5])).is_ok());
        assert!(matches!(
            SlMatrix::new(Mat::diag(&[f64::NAN, 1.0])),
            Err(Error::NonFinite)
        ));
    }

    #[test]
    fn sl_inverse() {
        let m = SlMatrix::new(Mat::from_rows3([[1.0, 2.0, 0.0], [0.0, 1.0, 3.0], [0.0, 0.0, 1.0]])).unwrap();
        assert!((m * m.inverse()).dist(&Mat::identity(3)) < 1e-14);
    }

    #[test]
    fn traceless_projection_reports_correction() {
        let (t, c) = TracelessMatrix::project(Mat::diag(&[1.0, 0.0, 0.5]));
        assert!(t.trace().abs() < 1e-15);
        assert!((c - 0.5).abs() < 1e-15);
    }
}
