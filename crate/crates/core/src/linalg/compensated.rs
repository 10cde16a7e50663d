//! Double-word accumulation for long matrix products.
//!
//! A product of norm `N` stored in plain `f64` carries an absolute error of
//! order `ε·N` per factor, which the cocycle identity then amplifies by the
//! norm of the other side. Carrying a low-order correction keeps the product
//! accurate to a few ulps of its final rounding.

use super::mat::Mat;

#[inline]
fn two_sum(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    let bb = s - a;
    (s, (a - (s - bb)) + (b - bb))
}

#[inline]
fn two_prod(a: f64, b: f64) -> (f64, f64) {
    let p = a * b;
    (p, a.mul_add(b, -p))
}

/// `a·b − c·d` with one rounding error (Kahan).
#[inline]
pub(crate) fn diff_of_products(a: f64, b: f64, c: f64, d: f64) -> f64 {
    let w = c * d;
    let e = (-c).mul_add(d, w);
    a.mul_add(b, -w) + e
}

/// Unevaluated sum `hi + lo` of two matrices with `|lo| ≲ ε|hi|`.
#[derive(Clone, Copy, Debug)]
pub(crate) struct DoubleMat {
    hi: Mat,
    lo: Mat,
}

impl DoubleMat {
    pub fn identity(dim: usize) -> Self {
        DoubleMat {
            hi: Mat::identity(dim),
            lo: Mat::zeros(dim),
        }
    }

    pub fn dim(&self) -> usize {
        self.hi.dim()
    }

    /// `a · self`.
    pub fn left_mul(&self, a: &Mat) -> Self {
        let d = a.dim();
        let mut hi = Mat::zeros(d);
        let mut lo = Mat::zeros(d);
        for i in 0..d {
            for j in 0..d {
                let (mut s, mut c) = (0.0, 0.0);
                for k in 0..d {
                    let (p, ep) = two_prod(a[(i, k)], self.hi[(k, j)]);
                    let (t, es) = two_sum(s, p);
                    s = t;
                    c += ep + es + a[(i, k)] * self.lo[(k, j)];
                }
                let (h, l) = two_sum(s, c);
                hi[(i, j)] = h;
                lo[(i, j)] = l;
            }
        }
        DoubleMat { hi, lo }
    }

    /// `self · b`.
    pub fn right_mul(&self, b: &DoubleMat) -> Self {
        let d = b.hi.dim();
        let mut hi = Mat::zeros(d);
        let mut lo = Mat::zeros(d);
        for i in 0..d {
            for j in 0..d {
                let (mut s, mut c) = (0.0, 0.0);
                for k in 0..d {
                    let (p, ep) = two_prod(self.hi[(i, k)], b.hi[(k, j)]);
                    let (t, es) = two_sum(s, p);
                    s = t;
                    c += ep + es + self.hi[(i, k)] * b.lo[(k, j)] + self.lo[(i, k)] * b.hi[(k, j)];
                }
                let (h, l) = two_sum(s, c);
                hi[(i, j)] = h;
                lo[(i, j)] = l;
            }
        }
        DoubleMat { hi, lo }
    }

    pub fn scale(&self, c: f64) -> Self {
        let d = self.hi.dim();
        let mut out = *self;
        for i in 0..d {
            for j in 0..d {
                let (p, e) = two_prod(self.hi[(i, j)], c);
                let (h, l) = two_sum(p, e + self.lo[(i, j)] * c);
                out.hi[(i, j)] = h;
                out.lo[(i, j)] = l;
            }
        }
        out
    }

    pub fn to_mat(self) -> Mat {
        self.hi + self.lo
    }
}
