//! Cyclic Jacobi eigensolver for small symmetric matrices and a
//! Gram–Schmidt QR factorization.

use super::mat::{dot, norm, scale, Mat, Vector};

/// `m = vectors · diag(values) · vectorsᵀ`, eigenvectors stored as columns.
#[derive(Debug, Clone, Copy)]
pub struct SymmetricEigen {
    pub values: [f64; 3],
    pub vectors: Mat,
}

impl SymmetricEigen {
    /// Rebuilds `V · diag(f(μ)) · Vᵀ`.
    pub fn map(&self, f: impl Fn(f64) -> f64) -> Mat {
        let d = self.vectors.dim();
        let v = &self.vectors;
        let fv: Vec<f64> = self.values[..d].iter().map(|&x| f(x)).collect();
        Mat::from_fn(d, |i, j| (0..d).map(|k| v[(i, k)] * fv[k] * v[(j, k)]).sum())
    }
}

const MAX_SWEEPS: usize = 64;

/// Eigen-decomposition of a symmetric matrix. Only the upper triangle is
/// read.
pub fn symmetric_eigen(m: &Mat) -> SymmetricEigen {
    let d = m.dim();
    let mut a = m.symmetric_part();
    let mut v = Mat::identity(d);
    let scale_ref = a.frobenius_norm().max(f64::MIN_POSITIVE);

    for _ in 0..MAX_SWEEPS {
        let off: f64 = (0..d)
            .flat_map(|p| ((p + 1)..d).map(move |q| (p, q)))
            .map(|(p, q)| a[(p, q)] * a[(p, q)])
            .sum();
        if off.sqrt() <= 1e-15 * scale_ref {
            break;
        }
        for p in 0..d {
            for q in (p + 1)..d {
                let apq = a[(p, q)];
                if apq.abs() <= 1e-300 {
                    continue;
                }
                let theta = (a[(q, q)] - a[(p, p)]) / (2.0 * apq);
                let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;
                // A ← Jᵀ A J on rows/cols p,q
                for k in 0..d {
                    let akp = a[(k, p)];
                    let akq = a[(k, q)];
                    a[(k, p)] = c * akp - s * akq;
                    a[(k, q)] = s * akp + c * akq;
                }
                for k in 0..d {
                    let apk = a[(p, k)];
                    let aqk = a[(q, k)];
                    a[(p, k)] = c * apk - s * aqk;
                    a[(q, k)] = s * apk + c * aqk;
                }
                for k in 0..d {
                    let vkp = v[(k, p)];
                    let vkq = v[(k, q)];
                    v[(k, p)] = c * vkp - s * vkq;
                    v[(k, q)] = s * vkp + c * vkq;
                }
            }
        }
    }
    let mut values = [0.0; 3];
    for (i, val) in values.iter_mut().enumerate().take(d) {
        *val = a[(i, i)];
    }
    SymmetricEigen { values, vectors: v }
}

/// Modified Gram–Schmidt with one reorthogonalization pass. Returns `(Q, R)`
/// with `m = Q·R`, `R` upper triangular. Diagonal of `R` may be negative
/// only if a column is exactly dependent (then it is zero).
pub fn qr(m: &Mat) -> (Mat, Mat) {
    let d = m.dim();
    let mut q_cols: Vec<Vector> = Vec::with_capacity(d);
    let mut r = Mat::zeros(d);
    for j in 0..d {
        let mut v = m.column(j);
        for _pass in 0..2 {
            for (i, qi) in q_cols.iter().enumerate() {
                let c = dot(qi, &v);
                r[(i, j)] += c;
                for k in 0..3 {
                    v[k] -= c * qi[k];
                }
            }
        }
        let n = norm(&v);
        r[(j, j)] = n;
        q_cols.push(if n > 0.0 { scale(&v, 1.0 / n) } else { v });
    }
    (Mat::from_columns(d, &q_cols), r)
}
