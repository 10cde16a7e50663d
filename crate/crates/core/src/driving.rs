//! Circle rotations `θ ↦ θ + α (mod 1)` and their suspension flows on the
//! mapping torus `S¹ × [0,1] / (θ,1) ∼ (θ+α,0)`.

use serde::Serialize;

use crate::error::{Error, Result};

/// Reduces to `[0, 1)`.
#[inline]
pub fn frac(x: f64) -> f64 {
    let f = x - x.floor();
    if f >= 1.0 {
        0.0
    } else {
        f
    }
}

fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

/// Rotation constant, tagged by arithmetic type.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum Alpha {
    /// `p/q` in lowest terms, `0 ≤ p < q`.
    Rational {
        p: u64,
        q: u64,
    },
    Irrational {
        value: f64,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct CircleRotation {
    alpha: Alpha,
}

impl CircleRotation {
    pub fn rational(p: u64, q: u64) -> Result<Self> {
        if q == 0 || p >= q {
            return Err(Error::InvalidParameter(format!(
                "rational rotation needs 0 <= p < q, got {p}/{q}"
            )));
        }
        let g = gcd(p, q);
        Ok(CircleRotation {
            alpha: Alpha::Rational { p: p / g, q: q / g },
        })
    }

    pub fn irrational(value: f64) -> Result<Self> {
        if !(0.0..1.0).contains(&value) {
            return Err(Error::InvalidParameter(format!(
                "rotation constant {value} outside [0, 1)"
            )));
        }
        Ok(CircleRotation {
            alpha: Alpha::Irrational { value },
        })
    }

    /// The golden mean `(√5 − 1)/2`.
    pub fn golden() -> Self {
        CircleRotation {
            alpha: Alpha::Irrational {
                value: (5f64.sqrt() - 1.0) / 2.0,
            },
        }
    }

    pub fn alpha(&self) -> Alpha {
        self.alpha
    }

    pub fn value(&self) -> f64 {
        match self.alpha {
            Alpha::Rational { p, q } => p as f64 / q as f64,
            Alpha::Irrational { value } => value,
        }
    }

    /// Period of the rotation for rational α.
    pub fn period(&self) -> Option<u64> {
        match self.alpha {
            Alpha::Rational { q, .. } => Some(q),
            Alpha::Irrational { .. } => None,
        }
    }

    /// Rotation by `α/2`.
    pub fn half(&self) -> Self {
        match self.alpha {
            Alpha::Rational { p, q } => CircleRotation::rational(p, 2 * q).expect("p < 2q"),
            Alpha::Irrational { value } => CircleRotation {
                alpha: Alpha::Irrational { value: value / 2.0 },
            },
        }
    }

    /// `θ + nα mod 1`.
    ///
    /// Rational rotations use exact modular arithmetic on `p/q`. Irrational
    /// ones split `n·α` into an error-free product (`hi + lo` via fused
    /// multiply-add) so long orbits do not accumulate drift.
    pub fn rotate(&self, theta: f64, n: i64) -> f64 {
        if n == 0 {
            return frac(theta);
        }
        match self.alpha {
            Alpha::Rational { p, q } => {
                let k = ((n as i128 * p as i128).rem_euclid(q as i128)) as f64;
                frac(theta + k / q as f64)
            }
            Alpha::Irrational { value } => {
                let nf = n as f64;
                let hi = nf * value;
                let lo = nf.mul_add(value, -hi);
                frac(frac(hi) + lo + theta)
            }
        }
    }
}

/// Point `(θ, r)` of the mapping torus with both coordinates in `[0, 1)`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct MappingTorusPoint {
    pub theta: f64,
    pub r: f64,
}

impl MappingTorusPoint {
    pub fn new(theta: f64, r: f64) -> Result<Self> {
        if !(0.0..1.0).contains(&theta) || !(0.0..1.0).contains(&r) {
            return Err(Error::InvalidParameter(format!(
                "mapping torus point ({theta}, {r}) not canonical"
            )));
        }
        Ok(MappingTorusPoint { theta, r })
    }

    /// Point on the base fiber `r = 0`.
    pub fn base(theta: f64) -> Self {
        MappingTorusPoint {
            theta: frac(theta),
            r: 0.0,
        }
    }
}

/// Suspension flow `φᵗ(θ, r) = (θ + ⌊r+t⌋α, r + t mod 1)`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct SuspensionFlow {
    pub rotation: CircleRotation,
}

impl SuspensionFlow {
    pub fn new(rotation: CircleRotation) -> Self {
        SuspensionFlow { rotation }
    }

    pub fn suspend(&self, p: MappingTorusPoint, t: f64) -> MappingTorusPoint {
        let s = p.r + t;
        let k = s.floor();
        MappingTorusPoint {
            theta: self.rotation.rotate(p.theta, k as i64),
            r: frac(s - k),
        }
    }
}

pub fn rotate(rot: &CircleRotation, theta: f64, n: i64) -> f64 {
    rot.rotate(theta, n)
}

pub fn suspend(flow: &SuspensionFlow, p: MappingTorusPoint, t: f64) -> MappingTorusPoint {
    flow.suspend(p, t)
}
