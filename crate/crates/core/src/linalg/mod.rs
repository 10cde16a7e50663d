//! Fixed-dimension (2×2 and 3×3) real linear algebra.

mod compensated;
mod eigen;
mod groups;
mod mat;
mod polar;
mod quaternion;

pub(crate) use compensated::DoubleMat;
pub use eigen::{qr, symmetric_eigen, SymmetricEigen};
pub use groups::{project_to_sl, RotationMatrix, SlMatrix, SpdFactor, TracelessMatrix};
pub(crate) use groups::{renormalize, rescale_by_log_det};
pub use mat::{canonical_sign, cross, dot, line_angle, norm, scale, Mat, Vector};
pub use polar::{polar_angle2, polar_decompose, spd_exp, spd_log};
pub(crate) use polar::{polar_raw, spd_eigen, SymmetricExpCurve};
pub(crate) use quaternion::rotation_bilinear;
pub use quaternion::{quat_lift_path, UnitQuaternion, MIN_LIFT_DOT};

/// Spectral norm.
pub fn operator_norm(m: &Mat) -> f64 {
    m.operator_norm()
}

pub fn frobenius_norm(m: &Mat) -> f64 {
    m.frobenius_norm()
}

pub fn matrix_inverse(m: &SlMatrix) -> SlMatrix {
    m.inverse()
}
