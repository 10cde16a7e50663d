//! Polar decomposition `m = R·S` and the matrix log/exp on unimodular SPD
//! matrices.

use super::eigen::{symmetric_eigen, SymmetricEigen};
use super::groups::{RotationMatrix, SlMatrix, SpdFactor, TracelessMatrix};
use super::mat::Mat;
use crate::error::{Error, Result};
use crate::tol;

/// Rotation angle of the polar factor of a 2×2 matrix with positive
/// determinant, in `(−π, π]`.
#[inline]
pub fn polar_angle2(m: &Mat) -> f64 {
    (m[(1, 0)] - m[(0, 1)]).atan2(m[(0, 0)] + m[(1, 1)])
}

/// Unique polar decomposition of a matrix with positive determinant.
///
/// The 2×2 case is closed form. The 3×3 case diagonalizes `mᵀm` by Jacobi
/// rotations, forms `S = (mᵀm)^{1/2}` and `R = m·S⁻¹`, then polishes `R` with
/// one Newton step `R ← (R + R⁻ᵀ)/2`.
pub fn polar_decompose(m: &SlMatrix) -> Result<(RotationMatrix, SpdFactor)> {
    let (r, s) = polar_raw(m.as_mat())?;
    Ok((RotationMatrix::new_unchecked(r), SpdFactor::new_unchecked(s)))
}

pub(crate) fn polar_raw(m: &Mat) -> Result<(Mat, Mat)> {
    if !m.is_finite() || m.det() <= 0.0 {
        return Err(Error::SingularInput);
    }
    match m.dim() {
        2 => {
            let r = Mat::rotation2(polar_angle2(m));
            let s = (r.transpose() * *m).symmetric_part();
            Ok((r, s))
        }
        3 => {
            let gram = m.transpose() * *m;
            let eig = symmetric_eigen(&gram);
            let inv_sqrt = eig.map(|x| 1.0 / x.max(f64::MIN_POSITIVE).sqrt());
            let mut r = *m * inv_sqrt;
            let r_inv_t = r.inverse()?.transpose();
            r = (r + r_inv_t) * 0.5;
            let s = (r.transpose() * *m).symmetric_part();
            Ok((r, s))
        }
        d => Err(Error::UnsupportedDimension(d)),
    }
}

/// Principal logarithm of a unimodular SPD matrix (symmetric, traceless).
pub fn spd_log(s: &SpdFactor) -> Result<TracelessMatrix> {
    let m = s.as_mat();
    let eig = spd_eigen(m)?;
    let (log, _) = TracelessMatrix::project(eig.map(f64::ln));
    Ok(log)
}

/// Checked eigen-decomposition of an SPD candidate.
pub(crate) fn spd_eigen(m: &Mat) -> Result<SymmetricEigen> {
    if !m.is_finite() || (*m - m.transpose()).max_abs() > tol::INVARIANT * m.max_abs().max(1.0) {
        return Err(Error::NotSpd);
    }
    let eig = symmetric_eigen(m);
    if eig.values[..m.dim()].iter().any(|&x| x <= 0.0) {
        return Err(Error::NotSpd);
    }
    Ok(eig)
}

/// Exponential of a symmetric matrix; unimodular when the input is
/// traceless.
pub fn spd_exp(x: &Mat) -> Result<SpdFactor> {
    if !x.is_finite() {
        return Err(Error::NonFinite);
    }
    let e = symmetric_eigen(&x.symmetric_part()).map(f64::exp);
    if !e.is_finite() {
        return Err(Error::NonFinite);
    }
    Ok(SpdFactor::new_unchecked(e))
}

/// Precomputed `s ↦ exp(s·L)` for a fixed symmetric `L`.
#[derive(Debug, Clone, Copy)]
pub(crate) struct SymmetricExpCurve {
    eig: SymmetricEigen,
    log: Mat,
}

impl SymmetricExpCurve {
    #[cfg(test)]
    pub fn new(log: Mat) -> Self {
        SymmetricExpCurve {
            eig: symmetric_eigen(&log),
            log,
        }
    }

    /// Curve `s ↦ S^s` from an eigen-decomposition of an SPD matrix `S`.
    pub fn from_spd_eigen(e: &SymmetricEigen) -> Self {
        let eig = SymmetricEigen {
            values: e.values.map(|x| if x > 0.0 { x.ln() } else { 0.0 }),
            vectors: e.vectors,
        };
        SymmetricExpCurve {
            log: eig.map(|x| x),
            eig,
        }
    }

    pub fn log(&self) -> &Mat {
        &self.log
    }

    pub fn at(&self, s: f64) -> Mat {
        self.eig.map(|mu| (s * mu).exp())
    }
}
