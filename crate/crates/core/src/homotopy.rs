//! Loops in SL(2)/SL(3): homotopy classification and explicit contractions
//! to the identity.

use std::f64::consts::{FRAC_PI_2, FRAC_PI_4, PI};
use std::fmt;
use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::linalg::{polar_angle2, polar_raw, rotation_bilinear, spd_eigen, Mat, SymmetricExpCurve, UnitQuaternion};
use crate::tol;

/// Default sampling resolution of a loop.
pub const DEFAULT_RESOLUTION: usize = 4096;
/// Refinement cap for angle and quaternion lifts.
pub const MAX_RESOLUTION: usize = 1 << 20;
/// Step of the central-difference fallback for `∂ₜh`.
pub const FD_STEP: f64 = 1e-6;
/// Smallest accepted distance between the loop and the projection pole.
pub const MIN_POLE_DISTANCE: f64 = 0.1;

const NET_SEED: u64 = 0x5eed_cafe;
const NET_SIZE: usize = 60;
const NET_SIZE_REFINED: usize = 960;

pub type LoopFn = Arc<dyn Fn(f64) -> Mat + Send + Sync>;

/// Continuous map `[0, 1] → SL(d)` with `M(0) = M(1)`.
#[derive(Clone)]
pub struct Loop {
    f: LoopFn,
    dim: usize,
    resolution: usize,
}

impl fmt::Debug for Loop {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Loop")
            .field("dim", &self.dim)
            .field("resolution", &self.resolution)
            .finish()
    }
}

impl Loop {
    /// Checks unit determinant, closure and adjacent-sample continuity on
    /// the default grid.
    pub fn new(dim: usize, f: impl Fn(f64) -> Mat + Send + Sync + 'static) -> Result<Self> {
        let l = Self::from_fn_unchecked(dim, f);
        l.validate()?;
        Ok(l)
    }

    pub(crate) fn from_fn_unchecked(dim: usize, f: impl Fn(f64) -> Mat + Send + Sync + 'static) -> Self {
        Loop {
            f: Arc::new(f),
            dim,
            resolution: DEFAULT_RESOLUTION,
        }
    }

    pub fn with_resolution(mut self, n: usize) -> Result<Self> {
        if !(4..=MAX_RESOLUTION).contains(&n) {
            return Err(Error::InvalidParameter(format!("loop resolution {n} out of range")));
        }
        self.resolution = n;
        Ok(self)
    }

    fn validate(&self) -> Result<()> {
        if !(2..=3).contains(&self.dim) {
            return Err(Error::UnsupportedDimension(self.dim));
        }
        let n = self.resolution;
        let mut prev = self.eval(0.0);
        let first = prev;
        for i in 0..=n {
            let m = self.eval(i as f64 / n as f64);
            if m.dim() != self.dim {
                return Err(Error::DimensionMismatch {
                    expected: self.dim,
                    found: m.dim(),
                });
            }
            if !m.is_finite() || (m.det() - 1.0).abs() > tol::INVARIANT {
                return Err(Error::InvalidGenerator(format!("loop sample {i} not in SL(d)")));
            }
            if m.dist(&prev) >= 0.5 {
                return Err(Error::SamplingTooCoarse(format!("jump at loop sample {i}")));
            }
            prev = m;
        }
        let gap = prev.dist(&first);
        if gap > tol::DECOMPOSITION * first.frobenius_norm().max(1.0) {
            return Err(Error::EndpointMismatch(gap));
        }
        Ok(())
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn resolution(&self) -> usize {
        self.resolution
    }

    /// `M(θ)` for `θ ∈ [0, 1]`.
    pub fn eval(&self, theta: f64) -> Mat {
        (self.f)(theta)
    }
}

/// Concatenation `ψ(θ) = l1(2θ)` on `[0, ½)`, `l2(2θ − 1)` on `[½, 1]`.
pub fn concatenate(l1: &Loop, l2: &Loop) -> Result<Loop> {
    if l1.dim != l2.dim {
        return Err(Error::DimensionMismatch {
            expected: l1.dim,
            found: l2.dim,
        });
    }
    let gap = l1.eval(1.0).dist(&l2.eval(0.0)).max(l2.eval(1.0).dist(&l1.eval(0.0)));
    if gap > tol::INVARIANT * l1.eval(0.0).frobenius_norm().max(1.0) {
        return Err(Error::EndpointMismatch(gap));
    }
    let (a, b) = (l1.f.clone(), l2.f.clone());
    Ok(Loop {
        f: Arc::new(move |theta| {
            if theta < 0.5 {
                a(2.0 * theta)
            } else {
                b(2.0 * theta - 1.0)
            }
        }),
        dim: l1.dim,
        resolution: l1.resolution.max(l2.resolution),
    })
}

fn wrap_angle(x: f64) -> f64 {
    x - 2.0 * PI * (x / (2.0 * PI)).round()
}

/// Continuous lift `ℓ` of the polar rotation angle of an SL(2) loop.
#[derive(Clone, Debug)]
pub struct AngleLift {
    samples: Vec<f64>,
    source: Loop,
}

impl AngleLift {
    /// Unwraps the angle on the loop grid, doubling the grid while any
    /// adjacent jump reaches `π/2`.
    pub fn new(l: &Loop) -> Result<Self> {
        if l.dim != 2 {
            return Err(Error::DimensionMismatch {
                expected: 2,
                found: l.dim,
            });
        }
        let mut n = l.resolution;
        loop {
            let angles: Vec<f64> = (0..=n).map(|i| polar_angle2(&l.eval(i as f64 / n as f64))).collect();
            let mut samples = Vec::with_capacity(n + 1);
            samples.push(angles[0]);
            let mut max_jump: f64 = 0.0;
            for w in angles.windows(2) {
                let d = wrap_angle(w[1] - w[0]);
                max_jump = max_jump.max(d.abs());
                samples.push(samples.last().unwrap() + d);
            }
            if max_jump < FRAC_PI_2 {
                let lift = AngleLift {
                    samples,
                    source: l.clone(),
                };
                let turns = lift.total() / (2.0 * PI);
                if (turns - turns.round()).abs() * 2.0 * PI > 1e-6 {
                    return Err(Error::EndpointMismatch(turns - turns.round()));
                }
                return Ok(lift);
            }
            if n >= MAX_RESOLUTION {
                return Err(Error::SamplingTooCoarse(format!(
                    "angle jump {max_jump:.3} rad at resolution {n}"
                )));
            }
            n *= 2;
        }
    }

    pub fn resolution(&self) -> usize {
        self.samples.len() - 1
    }

    /// `ℓ(1) − ℓ(0)`.
    pub fn total(&self) -> f64 {
        self.samples[self.samples.len() - 1] - self.samples[0]
    }

    pub fn winding(&self) -> i64 {
        (self.total() / (2.0 * PI)).round() as i64
    }

    fn interpolate(&self, theta: f64) -> f64 {
        let n = self.resolution();
        let x = theta.clamp(0.0, 1.0) * n as f64;
        let i = (x.floor() as usize).min(n - 1);
        let w = x - i as f64;
        self.samples[i] * (1.0 - w) + self.samples[i + 1] * w
    }

    /// `ℓ(θ)`: the exact polar angle at `θ` on the branch closest to the
    /// interpolated grid lift.
    pub fn at(&self, theta: f64) -> f64 {
        self.branch(theta, polar_angle2(&self.source.eval(theta)))
    }

    fn branch(&self, theta: f64, angle: f64) -> f64 {
        let guess = self.interpolate(theta);
        angle + 2.0 * PI * ((guess - angle) / (2.0 * PI)).round()
    }
}

/// Continuous lift of the polar rotation factor of an SL(3) loop to unit
/// quaternions.
#[derive(Clone, Debug)]
pub struct QuatLift {
    samples: Vec<[f64; 4]>,
    source: Loop,
}

impl QuatLift {
    pub fn new(l: &Loop) -> Result<Self> {
        if l.dim != 3 {
            return Err(Error::DimensionMismatch {
                expected: 3,
                found: l.dim,
            });
        }
        let mut n = l.resolution;
        loop {
            let mut samples: Vec<[f64; 4]> = Vec::with_capacity(n + 1);
            let mut min_dot: f64 = 1.0;
            for i in 0..=n {
                let (r, _) = polar_raw(&l.eval(i as f64 / n as f64))?;
                let q = UnitQuaternion::from_rotation(&r).to_array();
                let q = match samples.last() {
                    None => q,
                    Some(prev) => {
                        let d = dot4(prev, &q);
                        min_dot = min_dot.min(d.abs());
                        if d < 0.0 {
                            q.map(|c| -c)
                        } else {
                            q
                        }
                    }
                };
                samples.push(q);
            }
            if min_dot >= FRAC_PI_4.cos() {
                return Ok(QuatLift {
                    samples,
                    source: l.clone(),
                });
            }
            if n >= MAX_RESOLUTION {
                return Err(Error::SamplingTooCoarse(format!(
                    "quaternion lift |dot| = {min_dot:.3} at resolution {n}"
                )));
            }
            n *= 2;
        }
    }

    pub fn resolution(&self) -> usize {
        self.samples.len() - 1
    }

    pub fn samples(&self) -> impl Iterator<Item = UnitQuaternion> + '_ {
        self.samples.iter().map(|q| UnitQuaternion::from_array(*q))
    }

    /// Distance between the lifted endpoints `q(1)` and `q(0)`.
    pub fn closure_gap(&self) -> f64 {
        dist4(&self.samples[0], &self.samples[self.samples.len() - 1])
    }

    /// Whether the lift closes, i.e. the loop has trivial ℤ/2 class.
    pub fn closes(&self) -> bool {
        self.closure_gap() <= 1e-6
    }

    fn interpolate(&self, theta: f64) -> [f64; 4] {
        let n = self.resolution();
        let x = theta.clamp(0.0, 1.0) * n as f64;
        let i = (x.floor() as usize).min(n - 1);
        let w = x - i as f64;
        let (a, b) = (&self.samples[i], &self.samples[i + 1]);
        [0, 1, 2, 3].map(|k| a[k] * (1.0 - w) + b[k] * w)
    }

    /// Lift of a rotation known to be the polar factor at `θ`.
    fn branch(&self, theta: f64, rotation: &Mat) -> [f64; 4] {
        let q = UnitQuaternion::from_rotation(rotation).to_array();
        if dot4(&q, &self.interpolate(theta)) < 0.0 {
            q.map(|c| -c)
        } else {
            q
        }
    }

    pub fn at(&self, theta: f64) -> Result<UnitQuaternion> {
        let (r, _) = polar_raw(&self.source.eval(theta))?;
        Ok(UnitQuaternion::from_array(self.branch(theta, &r)))
    }
}

fn dot4(a: &[f64; 4], b: &[f64; 4]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn dist4(a: &[f64; 4], b: &[f64; 4]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum::<f64>().sqrt()
}

/// Homotopy class of a loop.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "group", rename_all = "lowercase")]
pub enum HomotopyClass {
    /// Element of `π₁(SL(2)) ≅ ℤ`.
    Winding { winding: i64 },
    /// Element of `π₁(SL(3)) ≅ ℤ/2`.
    Parity { trivial: bool },
}

impl HomotopyClass {
    pub fn is_trivial(&self) -> bool {
        match self {
            HomotopyClass::Winding { winding } => *winding == 0,
            HomotopyClass::Parity { trivial } => *trivial,
        }
    }
}

pub fn winding_number(l: &Loop) -> Result<i64> {
    Ok(AngleLift::new(l)?.winding())
}

pub fn classify(l: &Loop) -> Result<HomotopyClass> {
    match l.dim {
        2 => Ok(HomotopyClass::Winding {
            winding: winding_number(l)?,
        }),
        3 => {
            let lift = QuatLift::new(l)?;
            if lift.closes() {
                Ok(HomotopyClass::Parity { trivial: true })
            } else {
                let end = lift.samples[lift.samples.len() - 1].map(|c| -c);
                let gap = dist4(&lift.samples[0], &end);
                if gap > 1e-6 {
                    return Err(Error::EndpointMismatch(gap));
                }
                Ok(HomotopyClass::Parity { trivial: false })
            }
        }
        d => Err(Error::UnsupportedDimension(d)),
    }
}

pub fn is_nullhomotopic(l: &Loop) -> Result<bool> {
    Ok(classify(l)?.is_trivial())
}

/// `σ(t) = t − sin(2πt)/(2π)`: increasing, `σ(0)=0`, `σ(1)=1`, flat at both
/// ends.
pub fn sigma(t: f64) -> f64 {
    t - (2.0 * PI * t).sin() / (2.0 * PI)
}

pub fn sigma_prime(t: f64) -> f64 {
    1.0 - (2.0 * PI * t).cos()
}

/// One θ-slice `s ↦ H(θ, s)` of a raw homotopy.
pub trait RawFiber: Send + Sync {
    fn value(&self, s: f64) -> Mat;

    /// Analytic `∂ₛH`, if available.
    fn ds(&self, _s: f64) -> Option<Mat> {
        None
    }
}

/// A homotopy `H(θ, s)` from `Id` to a loop, smooth in `s` but not
/// necessarily flat at the endpoints.
pub trait RawHomotopy: Send + Sync {
    fn dim(&self) -> usize;
    fn fiber(&self, theta: f64) -> Result<Box<dyn RawFiber>>;
    fn name(&self) -> &'static str;
}

type SurfaceFn = Arc<dyn Fn(f64, f64) -> Mat + Send + Sync>;

/// Raw homotopy given by closures.
#[derive(Clone)]
pub struct FnHomotopy {
    dim: usize,
    value: SurfaceFn,
    ds: Option<SurfaceFn>,
}

impl FnHomotopy {
    pub fn new(dim: usize, value: impl Fn(f64, f64) -> Mat + Send + Sync + 'static) -> Self {
        FnHomotopy {
            dim,
            value: Arc::new(value),
            ds: None,
        }
    }

    pub fn with_derivative(mut self, ds: impl Fn(f64, f64) -> Mat + Send + Sync + 'static) -> Self {
        self.ds = Some(Arc::new(ds));
        self
    }
}

struct FnFiber {
    theta: f64,
    value: SurfaceFn,
    ds: Option<SurfaceFn>,
}

impl RawFiber for FnFiber {
    fn value(&self, s: f64) -> Mat {
        (self.value)(self.theta, s)
    }
    fn ds(&self, s: f64) -> Option<Mat> {
        self.ds.as_ref().map(|d| d(self.theta, s))
    }
}

impl RawHomotopy for FnHomotopy {
    fn dim(&self) -> usize {
        self.dim
    }
    fn fiber(&self, theta: f64) -> Result<Box<dyn RawFiber>> {
        Ok(Box::new(FnFiber {
            theta,
            value: self.value.clone(),
            ds: self.ds.clone(),
        }))
    }
    fn name(&self) -> &'static str {
        "closure"
    }
}

/// Homotopy `h(θ, t) = H(θ, σ(t))` from `Id` to a loop with flat endpoints.
#[derive(Clone)]
pub struct HomotopyPath {
    raw: Arc<dyn RawHomotopy>,
    target: Loop,
}

impl fmt::Debug for HomotopyPath {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("HomotopyPath")
            .field("construction", &self.raw.name())
            .field("dim", &self.raw.dim())
            .finish()
    }
}

/// One θ-slice `t ↦ h(θ, t)` of a reparametrized homotopy.
pub struct PathFiber {
    raw: Box<dyn RawFiber>,
}

impl PathFiber {
    pub fn value(&self, t: f64) -> Mat {
        self.raw.value(sigma(t))
    }

    /// `∂ₜh = σ′(t)·∂ₛH(σ(t))`, by central differences when no analytic
    /// derivative is available.
    pub fn dt(&self, t: f64) -> Mat {
        let sp = sigma_prime(t);
        let s = sigma(t);
        let ds = self
            .raw
            .ds(s)
            .unwrap_or_else(|| (self.raw.value(s + FD_STEP) - self.raw.value(s - FD_STEP)) * (0.5 / FD_STEP));
        ds * sp
    }
}

/// Composes a raw homotopy with `σ`.
pub fn reparametrize(raw: Arc<dyn RawHomotopy>, target: Loop) -> Result<HomotopyPath> {
    if raw.dim() != target.dim() {
        return Err(Error::DimensionMismatch {
            expected: target.dim(),
            found: raw.dim(),
        });
    }
    Ok(HomotopyPath { raw, target })
}

impl HomotopyPath {
    pub fn dim(&self) -> usize {
        self.raw.dim()
    }

    pub fn construction(&self) -> &'static str {
        self.raw.name()
    }

    pub fn target(&self) -> &Loop {
        &self.target
    }

    pub fn fiber(&self, theta: f64) -> Result<PathFiber> {
        Ok(PathFiber {
            raw: self.raw.fiber(theta)?,
        })
    }

    pub fn value(&self, theta: f64, t: f64) -> Result<Mat> {
        Ok(self.fiber(theta)?.value(t))
    }

    pub fn dt(&self, theta: f64, t: f64) -> Result<Mat> {
        Ok(self.fiber(theta)?.dt(t))
    }

    /// Checks the endpoint, flatness, derivative and wraparound contract on
    /// a `grid × grid` sample of `(θ, t)`.
    pub fn check(&self, grid: usize) -> Result<HomotopyReport> {
        let grid = grid.max(2);
        let delta = 1e-5;
        let id = Mat::identity(self.dim());
        let mut rep = HomotopyReport::default();
        for i in 0..grid {
            let theta = i as f64 / grid as f64;
            let f = self.fiber(theta)?;
            rep.start_error = rep.start_error.max(f.value(0.0).dist(&id));
            rep.end_error = rep.end_error.max(f.value(1.0).dist(&self.target.eval(theta)));
            rep.endpoint_derivative = rep
                .endpoint_derivative
                .max(f.dt(0.0).frobenius_norm())
                .max(f.dt(1.0).frobenius_norm());
            for j in 0..grid {
                let t = (j as f64 + 0.5) / grid as f64;
                let fd = (f.value(t + delta) - f.value(t - delta)) * (0.5 / delta);
                rep.derivative_mismatch = rep.derivative_mismatch.max(fd.dist(&f.dt(t)));
            }
        }
        let (f0, f1) = (self.fiber(0.0)?, self.fiber(1.0)?);
        for j in 0..=grid {
            let t = j as f64 / grid as f64;
            rep.wrap_error = rep.wrap_error.max(f0.value(t).dist(&f1.value(t)));
        }
        Ok(rep)
    }
}

/// Worst-case homotopy contract residuals over a sample grid.
#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize)]
pub struct HomotopyReport {
    /// `max ‖h(θ,0) − Id‖`
    pub start_error: f64,
    /// `max ‖h(θ,1) − M(θ)‖`
    pub end_error: f64,
    /// `max ‖∂ₜh(θ,0)‖, ‖∂ₜh(θ,1)‖`
    pub endpoint_derivative: f64,
    /// Central differences (step `1e-5`) against `∂ₜh`.
    pub derivative_mismatch: f64,
    /// `max_t ‖h(0,t) − h(1,t)‖`
    pub wrap_error: f64,
}

impl HomotopyReport {
    pub fn passes(&self) -> bool {
        self.start_error <= 1e-8
            && self.end_error <= 1e-7
            && self.endpoint_derivative <= 1e-8
            && self.derivative_mismatch <= 1e-4
            && self.wrap_error <= 1e-7
    }
}

/// Polar contraction in SL(2): `H(θ,s) = R(s·ℓ(θ))·exp(s·log S(θ))`.
struct Sl2Polar {
    lift: AngleLift,
}

/// `exp(sL)` for symmetric traceless `L` with eigenvalues `±μ`.
#[derive(Clone, Copy)]
struct Sl2Fiber {
    ell: f64,
    log: Mat,
    mu: f64,
}

impl Sl2Fiber {
    fn exp_log(&self, s: f64) -> Mat {
        let x = s * self.mu;
        let shc = if x.abs() < 1e-8 { s } else { x.sinh() / self.mu };
        Mat::identity(2) * x.cosh() + self.log * shc
    }
}

impl RawFiber for Sl2Fiber {
    fn value(&self, s: f64) -> Mat {
        Mat::rotation2(s * self.ell) * self.exp_log(s)
    }

    fn ds(&self, s: f64) -> Option<Mat> {
        let r = Mat::rotation2(s * self.ell);
        let dr = Mat::rotation2(s * self.ell + FRAC_PI_2) * self.ell;
        let e = self.exp_log(s);
        Some(dr * e + r * e * self.log)
    }
}

/// Logarithm of a 2×2 unimodular SPD matrix.
fn spd_log2(s: &Mat) -> (Mat, f64) {
    // S = cosh μ·I + (sinh μ/μ)·L with L = (a, b; b, −a), μ² = a² + b².
    let a = 0.5 * (s[(0, 0)] - s[(1, 1)]);
    let b = 0.5 * (s[(0, 1)] + s[(1, 0)]);
    let rho = a.hypot(b);
    let mu = rho.asinh();
    let k = if rho < 1e-300 { 1.0 } else { mu / rho };
    (Mat::from_rows2([[a * k, b * k], [b * k, -a * k]]), mu)
}

impl RawHomotopy for Sl2Polar {
    fn dim(&self) -> usize {
        2
    }

    fn fiber(&self, theta: f64) -> Result<Box<dyn RawFiber>> {
        let m = self.lift.source.eval(theta);
        let (r, s) = polar_raw(&m)?;
        let ell = self.lift.branch(theta, r[(1, 0)].atan2(r[(0, 0)]));
        let (log, mu) = spd_log2(&s);
        Ok(Box::new(Sl2Fiber { ell, log, mu }))
    }

    fn name(&self) -> &'static str {
        "sl2-polar"
    }
}

/// Contracts an SL(2) loop of winding zero.
pub fn build_homotopy_sl2(l: &Loop) -> Result<HomotopyPath> {
    if l.dim != 2 {
        return Err(Error::DimensionMismatch {
            expected: 2,
            found: l.dim,
        });
    }
    let lift = AngleLift::new(l)?;
    let w = lift.winding();
    if w != 0 {
        return Err(Error::NotNullhomotopic(format!("winding number {w}")));
    }
    reparametrize(Arc::new(Sl2Polar { lift }), l.clone())
}

/// Stereographic chart of `S³ ∖ {−p}` onto `p⊥ ≅ ℝ³`.
#[derive(Clone, Copy, Debug)]
struct Stereo {
    p: [f64; 4],
}

impl Stereo {
    fn project(&self, x: &[f64; 4]) -> [f64; 4] {
        let a = dot4(x, &self.p);
        [0, 1, 2, 3].map(|k| (x[k] - a * self.p[k]) / (1.0 + a))
    }

    /// Inverse projection and its derivative along `ẏ`.
    fn lift(&self, y: &[f64; 4], dy: &[f64; 4]) -> ([f64; 4], [f64; 4]) {
        let n = dot4(y, y);
        let dn = 2.0 * dot4(y, dy);
        let d = 1.0 + n;
        let c = (1.0 - n) / d;
        let dc = -2.0 * dn / (d * d);
        let x = [0, 1, 2, 3].map(|k| c * self.p[k] + 2.0 * y[k] / d);
        let dx = [0, 1, 2, 3].map(|k| dc * self.p[k] + 2.0 * dy[k] / d - 2.0 * y[k] * dn / (d * d));
        (x, dx)
    }
}

/// Quaternion contraction in SL(3).
struct Sl3Quaternion {
    lift: QuatLift,
    chart: Stereo,
    identity_image: [f64; 4],
}

struct Sl3Fiber {
    chart: Stereo,
    start: [f64; 4],
    velocity: [f64; 4],
    spd: SymmetricExpCurve,
}

impl Sl3Fiber {
    fn point(&self, s: f64) -> ([f64; 4], [f64; 4]) {
        let y = [0, 1, 2, 3].map(|k| self.start[k] + s * self.velocity[k]);
        self.chart.lift(&y, &self.velocity)
    }
}

impl RawFiber for Sl3Fiber {
    fn value(&self, s: f64) -> Mat {
        let (x, _) = self.point(s);
        rotation_bilinear(&x, &x) * self.spd.at(s)
    }

    fn ds(&self, s: f64) -> Option<Mat> {
        let (x, dx) = self.point(s);
        let rot = rotation_bilinear(&x, &x);
        let drot = rotation_bilinear(&x, &dx) * 2.0;
        let e = self.spd.at(s);
        Some(drot * e + rot * e * *self.spd.log())
    }
}

impl RawHomotopy for Sl3Quaternion {
    fn dim(&self) -> usize {
        3
    }

    fn fiber(&self, theta: f64) -> Result<Box<dyn RawFiber>> {
        let m = self.lift.source.eval(theta);
        let (r, s) = polar_raw(&m)?;
        let q = self.lift.branch(theta, &r);
        let yq = self.chart.project(&q);
        let start = self.identity_image;
        let velocity = [0, 1, 2, 3].map(|k| yq[k] - start[k]);
        let spd = SymmetricExpCurve::from_spd_eigen(&spd_eigen(&s)?);
        Ok(Box::new(Sl3Fiber {
            chart: self.chart,
            start,
            velocity,
            spd,
        }))
    }

    fn name(&self) -> &'static str {
        "sl3-quaternion"
    }
}

/// Deterministic net on `S³`: the 24 vertices of the 24-cell followed by
/// seeded uniform samples.
fn sphere_net(size: usize) -> Vec<[f64; 4]> {
    let mut net = Vec::with_capacity(size);
    for k in 0..4 {
        for sign in [1.0, -1.0] {
            let mut v = [0.0; 4];
            v[k] = sign;
            net.push(v);
        }
    }
    for bits in 0..16u32 {
        net.push([0, 1, 2, 3].map(|k| if bits >> k & 1 == 1 { -0.5 } else { 0.5 }));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(NET_SEED);
    while net.len() < size {
        let v = [0; 4].map(|_| rng.random_range(-1.0..1.0));
        let n = dot4(&v, &v);
        if n > 1e-4 && n <= 1.0 {
            let n = n.sqrt();
            net.push(v.map(|c| c / n));
        }
    }
    net.truncate(size);
    net
}

/// Pole `p` maximizing the minimum distance from `−p` to the lifted loop
/// and the identity quaternion.
fn choose_pole(lift: &QuatLift) -> Result<[f64; 4]> {
    let mut points: Vec<[f64; 4]> = lift.samples.clone();
    points.push(UnitQuaternion::IDENTITY.to_array());
    let mut best = ([0.0; 4], f64::NEG_INFINITY);
    for size in [NET_SIZE, NET_SIZE_REFINED] {
        for p in sphere_net(size) {
            let d = points
                .iter()
                .map(|x| [0, 1, 2, 3].map(|k| x[k] + p[k]))
                .map(|v| dot4(&v, &v).sqrt())
                .fold(f64::INFINITY, f64::min);
            if d > best.1 {
                best = (p, d);
            }
        }
        if best.1 >= MIN_POLE_DISTANCE {
            return Ok(best.0);
        }
    }
    Err(Error::NoProjectionPoint(MIN_POLE_DISTANCE))
}

/// Contracts an SL(3) loop whose rotation lift closes.
pub fn build_homotopy_sl3(l: &Loop) -> Result<HomotopyPath> {
    if l.dim != 3 {
        return Err(Error::DimensionMismatch {
            expected: 3,
            found: l.dim,
        });
    }
    let lift = QuatLift::new(l)?;
    if !lift.closes() {
        return Err(Error::NotNullhomotopic(format!(
            "rotation lift does not close (gap {:.3})",
            lift.closure_gap()
        )));
    }
    let chart = Stereo { p: choose_pole(&lift)? };
    let identity_image = chart.project(&UnitQuaternion::IDENTITY.to_array());
    reparametrize(
        Arc::new(Sl3Quaternion {
            lift,
            chart,
            identity_image,
        }),
        l.clone(),
    )
}

/// Dimension-appropriate contraction.
pub fn build_homotopy(l: &Loop) -> Result<HomotopyPath> {
    match l.dim {
        2 => build_homotopy_sl2(l),
        3 => build_homotopy_sl3(l),
        d => Err(Error::UnsupportedDimension(d)),
    }
}
