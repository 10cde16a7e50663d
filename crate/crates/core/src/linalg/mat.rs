use std::fmt;
use std::ops::{Add, AddAssign, Index, IndexMut, Mul, Neg, Sub};

use super::compensated::diff_of_products;
use crate::error::{Error, Result};

/// Column vector of length 2 or 3; unused trailing entries are zero.
pub type Vector = [f64; 3];

/// Dense real `d × d` matrix with `d ∈ {1, 2, 3}`, stored inline.
///
/// Entries outside the leading `d × d` block are kept at zero so that
/// arithmetic can run over the full 3×3 storage without branching.
#[derive(Clone, Copy, PartialEq)]
pub struct Mat {
    dim: usize,
    a: [[f64; 3]; 3],
}

impl Mat {
    pub fn zeros(dim: usize) -> Self {
        assert!((1..=3).contains(&dim), "matrix dimension {dim} out of range");
        Mat { dim, a: [[0.0; 3]; 3] }
    }

    pub fn identity(dim: usize) -> Self {
        let mut m = Mat::zeros(dim);
        for i in 0..dim {
            m.a[i][i] = 1.0;
        }
        m
    }

    pub fn diag(entries: &[f64]) -> Self {
        let mut m = Mat::zeros(entries.len());
        for (i, &x) in entries.iter().enumerate() {
            m.a[i][i] = x;
        }
        m
    }

    pub fn from_fn(dim: usize, mut f: impl FnMut(usize, usize) -> f64) -> Self {
        let mut m = Mat::zeros(dim);
        for i in 0..dim {
            for j in 0..dim {
                m.a[i][j] = f(i, j);
            }
        }
        m
    }

    pub fn from_rows2(rows: [[f64; 2]; 2]) -> Self {
        Mat::from_fn(2, |i, j| rows[i][j])
    }

    pub fn from_rows3(rows: [[f64; 3]; 3]) -> Self {
        Mat { dim: 3, a: rows }
    }

    /// Row-major slice constructor; `data.len()` must be `dim * dim`.
    pub fn from_row_slice(dim: usize, data: &[f64]) -> Result<Self> {
        if !(2..=3).contains(&dim) {
            return Err(Error::UnsupportedDimension(dim));
        }
        if data.len() != dim * dim {
            return Err(Error::DimensionMismatch {
                expected: dim * dim,
                found: data.len(),
            });
        }
        Ok(Mat::from_fn(dim, |i, j| data[i * dim + j]))
    }

    /// Counter-clockwise planar rotation by `angle` radians.
    pub fn rotation2(angle: f64) -> Self {
        let (s, c) = angle.sin_cos();
        Mat::from_rows2([[c, -s], [s, c]])
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn rows(&self) -> Vec<Vec<f64>> {
        (0..self.dim).map(|i| self.a[i][..self.dim].to_vec()).collect()
    }

    pub fn row_major(&self) -> Vec<f64> {
        self.rows().into_iter().flatten().collect()
    }

    pub fn is_finite(&self) -> bool {
        self.a.iter().flatten().all(|x| x.is_finite())
    }

    pub fn transpose(&self) -> Self {
        let mut t = *self;
        for i in 0..3 {
            for j in 0..3 {
                t.a[i][j] = self.a[j][i];
            }
        }
        t
    }

    pub fn trace(&self) -> f64 {
        (0..self.dim).map(|i| self.a[i][i]).sum()
    }

    pub fn det(&self) -> f64 {
        let a = &self.a;
        match self.dim {
            1 => a[0][0],
            2 => diff_of_products(a[0][0], a[1][1], a[0][1], a[1][0]),
            _ => {
                a[0][0] * (a[1][1] * a[2][2] - a[1][2] * a[2][1]) - a[0][1] * (a[1][0] * a[2][2] - a[1][2] * a[2][0])
                    + a[0][2] * (a[1][0] * a[2][1] - a[1][1] * a[2][0])
            }
        }
    }

    /// Classical adjugate, so that `m · adj(m) = det(m) · Id`.
    pub fn adjugate(&self) -> Self {
        let a = &self.a;
        match self.dim {
            1 => Mat::identity(1),
            2 => Mat::from_rows2([[a[1][1], -a[0][1]], [-a[1][0], a[0][0]]]),
            _ => {
                let c = |r0: usize, r1: usize, c0: usize, c1: usize| {
                    diff_of_products(a[r0][c0], a[r1][c1], a[r0][c1], a[r1][c0])
                };
                Mat::from_rows3([
                    [c(1, 2, 1, 2), -c(0, 2, 1, 2), c(0, 1, 1, 2)],
                    [-c(1, 2, 0, 2), c(0, 2, 0, 2), -c(0, 1, 0, 2)],
                    [c(1, 2, 0, 1), -c(0, 2, 0, 1), c(0, 1, 0, 1)],
                ])
            }
        }
    }

    pub fn inverse(&self) -> Result<Self> {
        let det = self.det();
        if !self.is_finite() || det == 0.0 || !det.is_finite() {
            return Err(Error::SingularInput);
        }
        Ok(self.adjugate() * (1.0 / det))
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.a.iter().flatten().map(|x| x * x).sum::<f64>().sqrt()
    }

    pub fn max_abs(&self) -> f64 {
        self.a.iter().flatten().fold(0.0, |m, x| m.max(x.abs()))
    }

    /// Spectral norm (largest singular value).
    pub fn operator_norm(&self) -> f64 {
        match self.dim {
            1 => self.a[0][0].abs(),
            2 => {
                // σ_max² = (F² + sqrt(F⁴ − 4 det²)) / 2
                let f2 = self.a.iter().flatten().map(|x| x * x).sum::<f64>();
                let det = self.det();
                let disc = (f2 * f2 - 4.0 * det * det).max(0.0);
                ((f2 + disc.sqrt()) / 2.0).sqrt()
            }
            _ => {
                let gram = self.transpose() * *self;
                let eig = super::eigen::symmetric_eigen(&gram);
                eig.values.iter().cloned().fold(0.0, f64::max).max(0.0).sqrt()
            }
        }
    }

    pub fn mul_vec(&self, x: &Vector) -> Vector {
        let mut y = [0.0; 3];
        for (i, yi) in y.iter_mut().enumerate().take(self.dim) {
            *yi = (0..self.dim).map(|j| self.a[i][j] * x[j]).sum();
        }
        y
    }

    pub fn column(&self, j: usize) -> Vector {
        [self.a[0][j], self.a[1][j], self.a[2][j]]
    }

    pub fn from_columns(dim: usize, cols: &[Vector]) -> Self {
        Mat::from_fn(dim, |i, j| cols[j][i])
    }

    /// Embeds a 2×2 matrix as the top-left block of a 3×3 matrix with a
    /// unit bottom-right entry.
    pub fn block_embed(&self) -> Self {
        debug_assert_eq!(self.dim, 2);
        let mut m = *self;
        m.dim = 3;
        m.a[2][2] = 1.0;
        m
    }

    pub fn top_left2(&self) -> Self {
        Mat::from_fn(2, |i, j| self.a[i][j])
    }

    pub fn symmetric_part(&self) -> Self {
        (*self + self.transpose()) * 0.5
    }

    pub fn dist(&self, other: &Mat) -> f64 {
        (*self - *other).frobenius_norm()
    }
}

impl Index<(usize, usize)> for Mat {
    type Output = f64;
    fn index(&self, (i, j): (usize, usize)) -> &f64 {
        &self.a[i][j]
    }
}

impl IndexMut<(usize, usize)> for Mat {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut f64 {
        &mut self.a[i][j]
    }
}

impl Add for Mat {
    type Output = Mat;
    fn add(mut self, rhs: Mat) -> Mat {
        debug_assert_eq!(self.dim, rhs.dim);
        for i in 0..3 {
            for j in 0..3 {
                self.a[i][j] += rhs.a[i][j];
            }
        }
        self
    }
}

impl AddAssign for Mat {
    fn add_assign(&mut self, rhs: Mat) {
        *self = *self + rhs;
    }
}

impl Sub for Mat {
    type Output = Mat;
    fn sub(mut self, rhs: Mat) -> Mat {
        debug_assert_eq!(self.dim, rhs.dim);
        for i in 0..3 {
            for j in 0..3 {
                self.a[i][j] -= rhs.a[i][j];
            }
        }
        self
    }
}

impl Neg for Mat {
    type Output = Mat;
    fn neg(self) -> Mat {
        self * -1.0
    }
}

impl Mul<f64> for Mat {
    type Output = Mat;
    fn mul(mut self, s: f64) -> Mat {
        for row in self.a.iter_mut() {
            for x in row.iter_mut() {
                *x *= s;
            }
        }
        self
    }
}

impl Mul for Mat {
    type Output = Mat;
    fn mul(self, rhs: Mat) -> Mat {
        debug_assert_eq!(self.dim, rhs.dim);
        let d = self.dim;
        let mut out = Mat::zeros(d);
        for i in 0..d {
            for j in 0..d {
                let mut s = 0.0;
                for k in 0..d {
                    s += self.a[i][k] * rhs.a[k][j];
                }
                out.a[i][j] = s;
            }
        }
        out
    }
}

impl fmt::Debug for Mat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Mat{:?}", self.rows())
    }
}

pub fn dot(a: &Vector, b: &Vector) -> f64 {
    a[0] * b[0] + a[1] * b[1] + a[2] * b[2]
}

pub fn norm(a: &Vector) -> f64 {
    dot(a, a).sqrt()
}

pub fn cross(a: &Vector, b: &Vector) -> Vector {
    [
        a[1] * b[2] - a[2] * b[1],
        a[2] * b[0] - a[0] * b[2],
        a[0] * b[1] - a[1] * b[0],
    ]
}

pub fn scale(a: &Vector, s: f64) -> Vector {
    [a[0] * s, a[1] * s, a[2] * s]
}

/// Angle in `[0, π/2]` between the lines spanned by two non-zero vectors.
pub fn line_angle(a: &Vector, b: &Vector) -> f64 {
    let c = dot(a, b).abs() / (norm(a) * norm(b));
    let s = norm(&cross(a, b)) / (norm(a) * norm(b));
    s.atan2(c)
}

/// Flips the sign so that the first coordinate with magnitude above
/// `1e-12` is positive.
pub fn canonical_sign(v: Vector) -> Vector {
    match v.iter().find(|x| x.abs() > 1e-12) {
        Some(&x) if x < 0.0 => scale(&v, -1.0),
        _ => v,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn adjugate_inverts_3x3() {
        let m = Mat::from_rows3([[2.0, 1.0, 0.5], [0.0, 1.5, -1.0], [0.3, 0.2, 1.0]]);
        let p = m * m.inverse().unwrap();
        assert!(p.dist(&Mat::identity(3)) < 1e-14);
    }

    #[test]
    fn operator_norm_of_diag() {
        assert_eq!(Mat::identity(2).operator_norm(), 1.0);
        assert!((Mat::diag(&[2.0, 0.5]).operator_norm() - 2.0).abs() < 1e-15);
        assert!((Mat::diag(&[0.5, 1.0, 2.0]).operator_norm() - 2.0).abs() < 1e-14);
    }

    #[test]
    fn singular_inverse_is_rejected() {
        let m = Mat::from_rows2([[1.0, 2.0], [2.0, 4.0]]);
        assert_eq!(m.inverse(), Err(Error::SingularInput));
    }

    #[test]
    fn block_embed_keeps_det() {
        let m = Mat::from_rows2([[2.0, 1.0], [1.0, 1.0]]);
        let b = m.block_embed();
        assert_eq!(b.dim(), 3);
        assert_eq!(b.det(), m.det());
        assert_eq!(b[(2, 2)], 1.0);
        assert_eq!(b.top_left2(), m);
    }

    #[test]
    fn canonical_sign_flips_leading_negative() {
        assert_eq!(canonical_sign([-1.0, 2.0, 0.0]), [1.0, -2.0, -0.0]);
        assert_eq!(canonical_sign([0.0, 3.0, -1.0]), [0.0, 3.0, -1.0]);
    }
}
