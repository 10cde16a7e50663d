//! Discrete-time SL(d) cocycles over circle rotations.

use std::f64::consts::PI;
use std::fmt;

use serde::Serialize;

use crate::driving::{frac, CircleRotation};
use crate::error::{Error, Result};
use crate::linalg::{project_to_sl, renormalize, DoubleMat, Mat, SlMatrix};
use crate::tol;

/// Products are renormalized onto SL(d) after this many factors, using the
/// accumulated log-determinant of the factors.
pub const RENORM_INTERVAL: usize = 50;

/// Grid used to check generator invariants at construction.
pub const VALIDATION_GRID: usize = 1024;

/// Largest Frobenius jump allowed between adjacent validation samples.
pub const MAX_GRID_JUMP: f64 = 0.5;

/// Which off-diagonal entry of the rotation factor carries `+sin`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum HermanConvention {
    /// `(cos, −sin; sin, cos)`: counter-clockwise, winding +1.
    CounterClockwise,
    /// `(cos, sin; −sin, cos)`: clockwise, winding −1.
    Clockwise,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct HermanParameters {
    pub lambda: f64,
    pub convention: HermanConvention,
}

impl HermanParameters {
    pub fn new(lambda: f64) -> Result<Self> {
        Self::with_convention(lambda, HermanConvention::CounterClockwise)
    }

    pub fn with_convention(lambda: f64, convention: HermanConvention) -> Result<Self> {
        if lambda <= 0.0 || !lambda.is_finite() {
            return Err(Error::InvalidParameter(format!("Herman λ must be > 0, got {lambda}")));
        }
        Ok(HermanParameters { lambda, convention })
    }

    /// `R(±2πθ) · diag(λ, λ⁻¹)`.
    pub fn eval(&self, theta: f64) -> Mat {
        let angle = match self.convention {
            HermanConvention::CounterClockwise => 2.0 * PI * theta,
            HermanConvention::Clockwise => -2.0 * PI * theta,
        };
        Mat::rotation2(angle) * Mat::diag(&[self.lambda, 1.0 / self.lambda])
    }
}

/// Closed-form generator families `θ ↦ A_θ`.
#[derive(Clone, Debug, PartialEq)]
pub enum Generator {
    Herman(HermanParameters),
    Constant(SlMatrix),
    /// `θ ↦ R(2πkθ)`.
    RotationPower(i64),
    /// `θ ↦ diag(e^{c·sin 2πθ}, e^{−c·sin 2πθ})`.
    DiagonalSine(f64),
    /// `θ ↦ (A_θ, 0; 0, 1)`.
    BlockEmbedded(Box<Generator>),
    /// `θ ↦ A_{2θ mod 1}`.
    HalfSpeed(Box<Generator>),
    /// Samples on a uniform grid `θ_i = i/N`, linearly interpolated and
    /// projected back to SL(d). Approximate.
    Tabulated(Vec<Mat>),
}

impl Generator {
    pub fn dim(&self) -> usize {
        match self {
            Generator::Herman(_) | Generator::RotationPower(_) | Generator::DiagonalSine(_) => 2,
            Generator::Constant(m) => m.dim(),
            Generator::BlockEmbedded(_) => 3,
            Generator::HalfSpeed(inner) => inner.dim(),
            Generator::Tabulated(samples) => samples.first().map_or(2, Mat::dim),
        }
    }

    pub fn eval(&self, theta: f64) -> Mat {
        match self {
            Generator::Herman(h) => h.eval(theta),
            Generator::Constant(m) => *m.as_mat(),
            Generator::RotationPower(k) => Mat::rotation2(2.0 * PI * (*k as f64) * theta),
            Generator::DiagonalSine(c) => {
                let x = c * (2.0 * PI * theta).sin();
                Mat::diag(&[x.exp(), (-x).exp()])
            }
            Generator::BlockEmbedded(inner) => inner.eval(theta).block_embed(),
            Generator::HalfSpeed(inner) => inner.eval(frac(2.0 * theta)),
            Generator::Tabulated(samples) => {
                let n = samples.len();
                let x = frac(theta) * n as f64;
                let i = (x.floor() as usize).min(n - 1);
                let w = x - i as f64;
                let m = samples[i] * (1.0 - w) + samples[(i + 1) % n] * w;
                renormalize(&m)
            }
        }
    }

    fn label(&self) -> String {
        match self {
            Generator::Herman(h) => format!("herman(lambda={})", h.lambda),
            Generator::Constant(m) => format!("constant({:?})", m.rows()),
            Generator::RotationPower(k) => format!("rotation-power({k})"),
            Generator::DiagonalSine(c) => format!("diagonal-sine({c})"),
            Generator::BlockEmbedded(g) => format!("block({})", g.label()),
            Generator::HalfSpeed(g) => format!("half-speed({})", g.label()),
            Generator::Tabulated(s) => format!("tabulated({})", s.len()),
        }
    }
}

/// A circle rotation together with a continuous generator `A: S¹ → SL(d)`.
#[derive(Clone, Debug, PartialEq)]
pub struct DiscreteCocycle {
    driving: CircleRotation,
    generator: Generator,
}

impl DiscreteCocycle {
    /// Validates the generator on a 1024-point grid: every sample must lie
    /// in SL(d) and adjacent samples (including the wrap at θ = 1) must be
    /// within Frobenius distance 0.5.
    pub fn new(driving: CircleRotation, generator: Generator) -> Result<Self> {
        let d = generator.dim();
        if !(2..=3).contains(&d) {
            return Err(Error::UnsupportedDimension(d));
        }
        if let Generator::Tabulated(samples) = &generator {
            if samples.len() < 2 || samples.iter().any(|m| m.dim() != d) {
                return Err(Error::InvalidGenerator(
                    "tabulated generator needs >= 2 samples of equal dimension".into(),
                ));
            }
        }
        let grid: Vec<Mat> = (0..VALIDATION_GRID)
            .map(|i| generator.eval(i as f64 / VALIDATION_GRID as f64))
            .collect();
        for (i, m) in grid.iter().enumerate() {
            if m.dim() != d || !m.is_finite() || (m.det() - 1.0).abs() > tol::INVARIANT {
                return Err(Error::InvalidGenerator(format!(
                    "sample {i} has determinant {}",
                    m.det()
                )));
            }
            let next = &grid[(i + 1) % grid.len()];
            let jump = m.dist(next);
            if jump >= MAX_GRID_JUMP {
                return Err(Error::InvalidGenerator(format!(
                    "jump {jump:.3} between grid samples {i} and {}",
                    (i + 1) % grid.len()
                )));
            }
        }
        Ok(DiscreteCocycle { driving, generator })
    }

    pub fn herman(driving: CircleRotation, lambda: f64) -> Result<Self> {
        Self::new(driving, Generator::Herman(HermanParameters::new(lambda)?))
    }

    pub fn constant(driving: CircleRotation, m: Mat) -> Result<Self> {
        Self::new(driving, Generator::Constant(SlMatrix::new(m)?))
    }

    pub fn identity(driving: CircleRotation, dim: usize) -> Result<Self> {
        Self::constant(driving, Mat::identity(dim))
    }

    pub fn driving(&self) -> &CircleRotation {
        &self.driving
    }

    pub fn generator(&self) -> &Generator {
        &self.generator
    }

    pub fn dim(&self) -> usize {
        self.generator.dim()
    }

    pub fn evaluate(&self, theta: f64) -> SlMatrix {
        SlMatrix::new_unchecked(self.generator.eval(frac(theta)))
    }

    /// `Aⁿ_θ` in two-sided time.
    pub fn n_step(&self, theta: f64, n: i64) -> SlMatrix {
        let theta = frac(theta);
        if n == 0 {
            return SlMatrix::identity(self.dim());
        }
        if n < 0 {
            let start = self.driving.rotate(theta, n);
            return self.n_step(start, -n).inverse();
        }
        let n = n as u64;
        match self.driving.period() {
            Some(q) if n >= q => {
                // Aⁿ = A^{n mod q}_θ · (A^q_θ)^{⌊n/q⌋}, exact since φ^q θ = θ.
                let period = self.forward_product(theta, q);
                let power = mat_pow(&period, n / q);
                let rest = self.forward_product(theta, n % q);
                SlMatrix::new_unchecked(rest.right_mul(&power).to_mat())
            }
            _ => SlMatrix::new_unchecked(self.forward_product(theta, n).to_mat()),
        }
    }

    /// `A_{φ^{n−1}θ} ⋯ A_θ` in double-word arithmetic, with periodic
    /// renormalization by the determinants of the factors.
    fn forward_product(&self, theta: f64, n: u64) -> DoubleMat {
        let d = self.dim();
        let mut p = DoubleMat::identity(d);
        let mut log_det = 0.0;
        for k in 0..n {
            let a = self.generator.eval(self.driving.rotate(theta, k as i64));
            log_det += a.det().ln();
            p = p.left_mul(&a);
            if (k + 1) % RENORM_INTERVAL as u64 == 0 || k + 1 == n {
                if log_det != 0.0 {
                    p = p.scale((-log_det / d as f64).exp());
                }
                log_det = 0.0;
            }
        }
        p
    }

    /// The generator as a loop `S¹ → SL(d)`.
    pub fn as_loop(&self) -> crate::homotopy::Loop {
        let g = self.generator.clone();
        crate::homotopy::Loop::from_fn_unchecked(self.dim(), move |theta| g.eval(theta))
    }

    pub fn label(&self) -> String {
        format!("{} over alpha={}", self.generator.label(), self.driving.value())
    }
}

impl fmt::Display for DiscreteCocycle {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.label())
    }
}

fn mat_pow(m: &DoubleMat, mut e: u64) -> DoubleMat {
    let mut base = *m;
    let mut acc = DoubleMat::identity(m.dim());
    while e > 0 {
        if e & 1 == 1 {
            acc = acc.right_mul(&base);
        }
        e >>= 1;
        if e > 0 {
            base = base.right_mul(&base);
        }
    }
    acc
}

/// `B_θ = A_{2θ}` over the rotation by `α/2`, so that `Bⁿ_θ = Aⁿ_{2θ}`.
pub fn half_speed(a: &DiscreteCocycle) -> DiscreteCocycle {
    DiscreteCocycle {
        driving: a.driving.half(),
        generator: Generator::HalfSpeed(Box::new(a.generator.clone())),
    }
}

/// `B_θ = (A_θ, 0; 0, 1)` over the same rotation.
pub fn block_embed(a: &DiscreteCocycle) -> Result<DiscreteCocycle> {
    if a.dim() != 2 {
        return Err(Error::DimensionMismatch {
            expected: 2,
            found: a.dim(),
        });
    }
    Ok(DiscreteCocycle {
        driving: a.driving,
        generator: Generator::BlockEmbedded(Box::new(a.generator.clone())),
    })
}

/// Builds a tabulated generator from samples on a uniform grid.
pub fn tabulated(driving: CircleRotation, samples: Vec<Mat>) -> Result<DiscreteCocycle> {
    let samples = samples
        .iter()
        .map(|m| project_to_sl(m).map(SlMatrix::into_mat))
        .collect::<Result<Vec<_>>>()?;
    DiscreteCocycle::new(driving, Generator::Tabulated(samples))
}
