//! Furstenberg–Kesten and Lyapunov estimators, Oseledets directions and the
//! projective skew product.

use rayon::prelude::*;
use serde::Serialize;

use crate::cocycle::{block_embed, half_speed, DiscreteCocycle};
use crate::driving::frac;
use crate::error::{Error, Result};
use crate::extension::{ContinuousCocycle, Extension};
use crate::linalg::{canonical_sign, cross, line_angle, norm, qr, scale, Mat, Vector};

/// Smallest separation of consecutive stretch rates for which Oseledets
/// directions are reported.
pub const MIN_RATE_GAP: f64 = 1e-3;

/// A cocycle sampled at integer times along orbits of the base fiber.
pub trait UnitTimeCocycle: Sync {
    fn dim(&self) -> usize;

    /// `φⁿθ`.
    fn shift(&self, theta: f64, n: i64) -> f64;

    /// One-step map at `θ`.
    fn unit_map(&self, theta: f64) -> Result<Mat>;

    /// `(A_{φ⁻¹θ})⁻¹`: one step backward from `θ`.
    fn unit_map_back(&self, theta: f64) -> Result<Mat> {
        let m = self.unit_map(self.shift(theta, -1))?;
        Ok(m.adjugate() * (1.0 / m.det()))
    }

    fn label(&self) -> String;
}

impl UnitTimeCocycle for DiscreteCocycle {
    fn dim(&self) -> usize {
        DiscreteCocycle::dim(self)
    }
    fn shift(&self, theta: f64, n: i64) -> f64 {
        self.driving().rotate(theta, n)
    }
    fn unit_map(&self, theta: f64) -> Result<Mat> {
        Ok(self.evaluate(theta).into_mat())
    }
    fn label(&self) -> String {
        DiscreteCocycle::label(self)
    }
}

/// Integrated time-one maps `Φ¹_{(θ,0)}`.
impl UnitTimeCocycle for ContinuousCocycle {
    fn dim(&self) -> usize {
        ContinuousCocycle::dim(self)
    }
    fn shift(&self, theta: f64, n: i64) -> f64 {
        self.rotation().rotate(theta, n)
    }
    fn unit_map(&self, theta: f64) -> Result<Mat> {
        Ok(self.at_integer(theta, 1)?.into_mat())
    }
    fn label(&self) -> String {
        format!(
            "continuous({}) over alpha={}",
            self.field().source(),
            self.rotation().value()
        )
    }
}

/// Record times: about twenty per decade plus the final time.
pub fn log_schedule(n: u64) -> Vec<u64> {
    let mut out: Vec<u64> = (0..)
        .map(|k| 10f64.powf(k as f64 / 20.0).round() as u64)
        .take_while(|&m| m < n)
        .collect();
    out.push(n);
    out.dedup();
    out
}

struct Recorder {
    schedule: Vec<u64>,
    next: usize,
}

impl Recorder {
    fn new(n: u64) -> Self {
        Recorder {
            schedule: log_schedule(n),
            next: 0,
        }
    }
    fn hit(&mut self, n: u64) -> bool {
        if self.schedule.get(self.next) == Some(&n) {
            self.next += 1;
            true
        } else {
            false
        }
    }
}

/// `(n, value)` pairs of a finite-time estimator.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ConvergenceSeries {
    pub label: String,
    pub theta: f64,
    pub norm: &'static str,
    pub points: Vec<(u64, f64)>,
}

impl ConvergenceSeries {
    pub fn last(&self) -> f64 {
        self.points.last().map_or(0.0, |p| p.1)
    }
}

/// `(1/n)·log‖Φⁿ_θ‖₂`, with the running product rescaled every step.
pub fn fk_series<C: UnitTimeCocycle + ?Sized>(c: &C, theta: f64, n: u64) -> Result<ConvergenceSeries> {
    let mut p = Mat::identity(c.dim());
    let mut log_scale = 0.0;
    let mut rec = Recorder::new(n);
    let mut points = Vec::new();
    for k in 1..=n {
        p = c.unit_map(c.shift(theta, k as i64 - 1))? * p;
        let s = p.frobenius_norm();
        log_scale += s.ln();
        p = p * (1.0 / s);
        if rec.hit(k) {
            points.push((k, (log_scale + p.operator_norm().ln()) / k as f64));
        }
    }
    Ok(ConvergenceSeries {
        label: c.label(),
        theta,
        norm: "operator-2",
        points,
    })
}

/// Exponent estimates with their running averages.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct LyapunovReport {
    pub label: String,
    pub theta: f64,
    pub n: u64,
    /// Descending.
    pub exponents: Vec<f64>,
    pub series: Vec<ConvergenceSeries>,
    /// `|λ̂(N) − λ̂(N/2)|` per exponent.
    pub tail_change: Vec<f64>,
    pub sum: f64,
}

/// QR re-orthonormalization of a pushed frame, re-factored every step.
pub fn lyapunov_spectrum<C: UnitTimeCocycle + ?Sized>(c: &C, theta: f64, n: u64) -> Result<LyapunovReport> {
    let d = c.dim();
    // The coordinate frame sits on invariant subspaces of block cocycles.
    let mut q = generic_frame(d);
    let mut sums = vec![0.0; d];
    let mut half = vec![0.0; d];
    let mut rec = Recorder::new(n);
    let mut tracks: Vec<Vec<(u64, f64)>> = vec![Vec::new(); d];
    for k in 1..=n {
        let (q2, r) = qr(&(c.unit_map(c.shift(theta, k as i64 - 1))? * q));
        q = q2;
        for (i, s) in sums.iter_mut().enumerate() {
            *s += r[(i, i)].abs().ln();
        }
        if k == n / 2 {
            half = sums.iter().map(|s| s / k as f64).collect();
        }
        if rec.hit(k) {
            for (i, t) in tracks.iter_mut().enumerate() {
                t.push((k, sums[i] / k as f64));
            }
        }
    }
    let mut exponents: Vec<f64> = sums.iter().map(|s| s / n as f64).collect();
    let mut order: Vec<usize> = (0..d).collect();
    order.sort_by(|&a, &b| exponents[b].total_cmp(&exponents[a]));
    exponents = order.iter().map(|&i| exponents[i]).collect();
    let tail_change = order
        .iter()
        .enumerate()
        .map(|(j, &i)| if n >= 2 { (exponents[j] - half[i]).abs() } else { 0.0 })
        .collect();
    let label = c.label();
    let series = order
        .iter()
        .map(|&i| ConvergenceSeries {
            label: format!("{label} exponent {}", i + 1),
            theta,
            norm: "qr-diagonal",
            points: tracks[i].clone(),
        })
        .collect();
    Ok(LyapunovReport {
        label,
        theta,
        n,
        sum: exponents.iter().sum(),
        exponents,
        series,
        tail_change,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum TimeDirection {
    Forward,
    Backward,
}

/// Full sequence `log‖Φⁿx‖` for `n = 0..=N` (negative `n` backward).
fn log_norms<C: UnitTimeCocycle + ?Sized>(
    c: &C,
    theta: f64,
    x: &Vector,
    n: u64,
    dir: TimeDirection,
) -> Result<Vec<f64>> {
    let nx = norm(x);
    if nx == 0.0 || !nx.is_finite() {
        return Err(Error::ZeroVector);
    }
    let mut v = scale(x, 1.0 / nx);
    let mut log = nx.ln();
    let mut out = Vec::with_capacity(n as usize + 1);
    out.push(log);
    for k in 1..=n as i64 {
        let m = match dir {
            TimeDirection::Forward => c.unit_map(c.shift(theta, k - 1))?,
            TimeDirection::Backward => c.unit_map_back(c.shift(theta, 1 - k))?,
        };
        v = m.mul_vec(&v);
        let s = norm(&v);
        log += s.ln();
        v = scale(&v, 1.0 / s);
        out.push(log);
    }
    Ok(out)
}

/// `(1/n)·log‖Φⁿx‖` forward, or `(1/(−n))·log‖Φ⁻ⁿx‖` backward.
pub fn vector_exponent<C: UnitTimeCocycle + ?Sized>(
    c: &C,
    theta: f64,
    x: &Vector,
    n: u64,
    dir: TimeDirection,
) -> Result<ConvergenceSeries> {
    let logs = log_norms(c, theta, x, n, dir)?;
    let sign = match dir {
        TimeDirection::Forward => 1.0,
        TimeDirection::Backward => -1.0,
    };
    let points = log_schedule(n)
        .into_iter()
        .map(|k| (k, logs[k as usize] / (sign * k as f64)))
        .collect();
    Ok(ConvergenceSeries {
        label: format!("{} {:?}", c.label(), dir),
        theta,
        norm: "euclidean",
        points,
    })
}

struct Frame {
    q: Mat,
    rates: Vec<f64>,
}

/// Pushes the standard frame `n` steps forward from `φ⁻ⁿθ` (or backward
/// from `φⁿθ`) so that it arrives at `θ`.
fn pushed_frame<C: UnitTimeCocycle + ?Sized>(c: &C, theta: f64, n: u64, dir: TimeDirection) -> Result<Frame> {
    let d = c.dim();
    let n = n as i64;
    let mut q = generic_frame(d);
    let mut sums = vec![0.0; d];
    for k in 0..n {
        let m = match dir {
            TimeDirection::Forward => c.unit_map(c.shift(theta, k - n))?,
            TimeDirection::Backward => c.unit_map_back(c.shift(theta, n - k))?,
        };
        let (q2, r) = qr(&(m * q));
        q = q2;
        for (i, s) in sums.iter_mut().enumerate() {
            *s += r[(i, i)].abs().ln();
        }
    }
    Ok(Frame {
        q,
        rates: sums.iter().map(|s| s / n.max(1) as f64).collect(),
    })
}

/// Fixed orthonormal frame in general position with respect to the
/// coordinate axes.
fn generic_frame(d: usize) -> Mat {
    let m = Mat::from_fn(d, |i, j| if i == j { 1.0 } else { 0.3 + 0.11 * (i + 2 * j) as f64 });
    qr(&m).0
}

fn unit(v: Vector) -> Vector {
    let n = norm(&v);
    canonical_sign(scale(&v, 1.0 / n))
}

fn check_gaps(rates: &[f64]) -> Result<()> {
    if rates.windows(2).any(|w| w[0] - w[1] < MIN_RATE_GAP) {
        return Err(Error::DegenerateSpectrum(rates.to_vec()));
    }
    Ok(())
}

/// Oseledets directions at one base point.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Directions {
    pub theta: f64,
    pub unstable: Vector,
    pub stable: Vector,
    /// Intersection of the top-two and bottom-two Oseledets planes (SL(3)).
    pub center: Option<Vector>,
}

pub fn directions_at<C: UnitTimeCocycle + ?Sized>(c: &C, theta: f64, n: u64) -> Result<Directions> {
    let fwd = pushed_frame(c, theta, n, TimeDirection::Forward)?;
    check_gaps(&fwd.rates)?;
    let bwd = pushed_frame(c, theta, n, TimeDirection::Backward)?;
    let (f1, f2) = (fwd.q.column(0), fwd.q.column(1));
    let (b1, b2) = (bwd.q.column(0), bwd.q.column(1));
    let center = (c.dim() == 3).then(|| unit(cross(&cross(&f1, &f2), &cross(&b1, &b2))));
    Ok(Directions {
        theta,
        unstable: unit(f1),
        stable: unit(b1),
        center,
    })
}

/// Direction fields on a uniform θ-grid.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct DirectionField {
    pub n: u64,
    pub points: Vec<Directions>,
}

pub fn oseledets_directions<C: UnitTimeCocycle + ?Sized>(c: &C, grid: usize, n: u64) -> Result<DirectionField> {
    let points = (0..grid)
        .into_par_iter()
        .map(|i| directions_at(c, i as f64 / grid as f64, n))
        .collect::<Result<_>>()?;
    Ok(DirectionField { n, points })
}

/// Largest `∠(Φ¹E(θ), E(φθ))` over the field, for unstable and stable
/// directions.
pub fn invariance_residual<C: UnitTimeCocycle + ?Sized>(c: &C, field: &DirectionField) -> Result<f64> {
    let worst = field
        .points
        .par_iter()
        .map(|p| -> Result<f64> {
            let m = c.unit_map(p.theta)?;
            let next = directions_at(c, c.shift(p.theta, 1), field.n)?;
            let mut r = line_angle(&m.mul_vec(&p.unstable), &next.unstable)
                .max(line_angle(&m.mul_vec(&p.stable), &next.stable));
            if let (Some(a), Some(b)) = (p.center, next.center) {
                r = r.max(line_angle(&m.mul_vec(&a), &b));
            }
            Ok(r)
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(worst.into_iter().fold(0.0, f64::max))
}

/// Point of `S¹ × P¹`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct ProjectivePoint {
    pub theta: f64,
    pub direction: [f64; 2],
}

impl ProjectivePoint {
    pub fn new(theta: f64, v: [f64; 2]) -> Result<Self> {
        let n = v[0].hypot(v[1]);
        if n == 0.0 || !n.is_finite() {
            return Err(Error::ZeroVector);
        }
        Ok(ProjectivePoint {
            theta: frac(theta),
            direction: canonical2([v[0] / n, v[1] / n]),
        })
    }

    /// Angle of the line in `[0, π)`.
    pub fn angle(&self) -> f64 {
        let a = self.direction[1].atan2(self.direction[0]);
        let a = a.rem_euclid(std::f64::consts::PI);
        if a >= std::f64::consts::PI {
            0.0
        } else {
            a
        }
    }
}

fn canonical2(v: [f64; 2]) -> [f64; 2] {
    let c = canonical_sign([v[0], v[1], 0.0]);
    [c[0], c[1]]
}

/// `(θ, v̄) ↦ (φθ, A_θv̄)`.
pub fn projective_step(a: &DiscreteCocycle, p: &ProjectivePoint) -> ProjectivePoint {
    let m = a.evaluate(p.theta);
    let v = [
        m[(0, 0)] * p.direction[0] + m[(0, 1)] * p.direction[1],
        m[(1, 0)] * p.direction[0] + m[(1, 1)] * p.direction[1],
    ];
    let n = v[0].hypot(v[1]);
    ProjectivePoint {
        theta: a.driving().rotate(p.theta, 1),
        direction: canonical2([v[0] / n, v[1] / n]),
    }
}

/// Visit counts of a projective orbit on a `bins × bins` grid over
/// `S¹ × [0, π)`, row-major in θ.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Occupancy {
    pub bins: usize,
    pub steps: u64,
    pub counts: Vec<u64>,
    pub coverage: f64,
}

pub fn orbit_occupancy(a: &DiscreteCocycle, start: ProjectivePoint, steps: u64, bins: usize) -> Result<Occupancy> {
    if a.dim() != 2 {
        return Err(Error::DimensionMismatch {
            expected: 2,
            found: a.dim(),
        });
    }
    let mut counts = vec![0u64; bins * bins];
    let mut p = start;
    let bin = |x: f64| ((x * bins as f64) as usize).min(bins - 1);
    for _ in 0..steps {
        counts[bin(p.theta) * bins + bin(p.angle() / std::f64::consts::PI)] += 1;
        p = projective_step(a, &p);
    }
    let covered = counts.iter().filter(|&&c| c > 0).count();
    Ok(Occupancy {
        bins,
        steps,
        coverage: covered as f64 / counts.len() as f64,
        counts,
    })
}

/// Finite-time checks of the scaling, push-forward, max and min rules for
/// Lyapunov exponents.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct LePropertyReport {
    /// (i): `max_n |(L_{βx}(n) − L_x(n))/n − log|β|/n|`.
    pub scaling_residual: f64,
    /// (ii): `max_n |L_{(φᵗθ, Φᵗx)}(n) − L_x(n+t)|/n`.
    pub pushforward_residual: f64,
    /// (iii): forward exponent of `x + y` minus `max`, on the given cocycle.
    pub max_bound_excess: f64,
    /// (iv): `|λ(e₁+e₂) − log 2|` for `diag(2, ½)`.
    pub max_rule_error: f64,
    /// (v): `|λ⁻(e₁+e₂) + log 2|` for `diag(2, ½)`.
    pub min_rule_error: f64,
    pub passed: bool,
}

pub fn le_property_check<C: UnitTimeCocycle + ?Sized>(
    c: &C,
    theta: f64,
    x: &Vector,
    y: &Vector,
    n: u64,
    t: u64,
) -> Result<LePropertyReport> {
    let beta: f64 = 10.0;
    let base = log_norms(c, theta, x, n + t, TimeDirection::Forward)?;
    let scaled = log_norms(c, theta, &scale(x, beta), n, TimeDirection::Forward)?;
    let scaling_residual = (1..=n as usize)
        .map(|k| ((scaled[k] - base[k]) / k as f64 - beta.ln() / k as f64).abs())
        .fold(0.0, f64::max);

    let mut pushed = *x;
    for k in 0..t as i64 {
        pushed = c.unit_map(c.shift(theta, k))?.mul_vec(&pushed);
    }
    let shifted = log_norms(c, c.shift(theta, t as i64), &pushed, n, TimeDirection::Forward)?;
    let pushforward_residual = (1..=n as usize)
        .map(|k| (shifted[k] - base[k + t as usize]).abs() / k as f64)
        .fold(0.0, f64::max);

    let sum = [x[0] + y[0], x[1] + y[1], x[2] + y[2]];
    let lx = base[n as usize] / n as f64;
    let ly = log_norms(c, theta, y, n, TimeDirection::Forward)?[n as usize] / n as f64;
    let lxy = log_norms(c, theta, &sum, n, TimeDirection::Forward)?[n as usize] / n as f64;
    let max_bound_excess = lxy - lx.max(ly);

    let diag = DiscreteCocycle::constant(crate::driving::CircleRotation::golden(), Mat::diag(&[2.0, 0.5]))?;
    let e12 = [1.0, 1.0, 0.0];
    let fwd = vector_exponent(&diag, theta, &e12, n, TimeDirection::Forward)?.last();
    let bwd = vector_exponent(&diag, theta, &e12, n, TimeDirection::Backward)?.last();
    let ln2 = 2f64.ln();
    let max_rule_error = (fwd - ln2).abs();
    let min_rule_error = (bwd + ln2).abs();
    // log‖βx‖ and log‖x‖ use different normalizations; allow roundoff
    // accumulated over n steps.
    let passed = scaling_residual <= 1e-12
        && pushforward_residual <= 1e-9
        && max_bound_excess <= (2f64.ln() + 1.0) / n as f64
        && max_rule_error <= 1e-9
        && min_rule_error <= 1e-9;
    Ok(LePropertyReport {
        scaling_residual,
        pushforward_residual,
        max_bound_excess,
        max_rule_error,
        min_rule_error,
        passed,
    })
}

/// Transfer of Furstenberg–Kesten values from `A` at `2θ` to its embedded
/// extension at `(θ, 0)`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct TransferReport {
    pub n: u64,
    /// `(θ, FK of extension product path at θ, FK of A at 2θ)`.
    pub rows: Vec<(f64, f64, f64)>,
    pub max_product_discrepancy: f64,
    /// `(θ, ‖Φ⁵_{(θ,0)}‖ vs ‖A⁵_{2θ}‖ discrepancy in (1/5)·log‖·‖)`.
    pub spot_checks: Vec<(f64, f64)>,
    pub max_spot_discrepancy: f64,
}

/// Compares FK series of `A` at `2θ` with those of the embedded extension
/// at `(θ, 0)`, through the discrete product path and five integrated
/// time-one maps.
pub fn extension_spectrum_compare(a: &DiscreteCocycle, ext: &Extension, grid: usize, n: u64) -> Result<TransferReport> {
    let path = half_speed(&block_embed(a)?);
    let rows: Vec<(f64, f64, f64)> = (0..grid)
        .into_par_iter()
        .map(|i| -> Result<_> {
            let theta = i as f64 / grid as f64;
            let lhs = fk_series(&path, theta, n)?.last();
            let rhs = fk_series(a, frac(2.0 * theta), n)?.last();
            Ok((theta, lhs, rhs))
        })
        .collect::<Result<_>>()?;
    let max_product_discrepancy = rows.iter().map(|r| (r.1 - r.2).abs()).fold(0.0, f64::max);

    let spot = 5i64;
    let spot_checks: Vec<(f64, f64)> = (0..5)
        .into_par_iter()
        .map(|i| -> Result<_> {
            let theta = (i as f64 + 0.5) / 5.0;
            let phi = ext.cocycle.at_integer(theta, spot)?;
            let direct = a.n_step(frac(2.0 * theta), spot);
            let d = (phi.operator_norm().ln() - direct.operator_norm().ln()).abs() / spot as f64;
            Ok((theta, d))
        })
        .collect::<Result<_>>()?;
    let max_spot_discrepancy = spot_checks.iter().map(|r| r.1).fold(0.0, f64::max);
    Ok(TransferReport {
        n,
        rows,
        max_product_discrepancy,
        spot_checks,
        max_spot_discrepancy,
    })
}

/// Spread of `(1/n)·log‖Φⁿ‖` over dyadic windows `[2ᵏ, 2ᵏ⁺¹)`; a gap that
/// does not shrink is consistent with a non-existent limit. Exploratory.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct FkGapDiagnostic {
    pub theta: f64,
    /// `(k, liminf, limsup)` over each window.
    pub windows: Vec<(u32, f64, f64)>,
}

pub fn fk_gap_diagnostic<C: UnitTimeCocycle + ?Sized>(c: &C, theta: f64, max_log2: u32) -> Result<FkGapDiagnostic> {
    let n = 1u64 << max_log2;
    let mut p = Mat::identity(c.dim());
    let mut log_scale = 0.0;
    let mut windows = Vec::new();
    let (mut lo, mut hi) = (f64::INFINITY, f64::NEG_INFINITY);
    for k in 1..=n {
        p = c.unit_map(c.shift(theta, k as i64 - 1))? * p;
        let s = p.frobenius_norm();
        log_scale += s.ln();
        p = p * (1.0 / s);
        let v = (log_scale + p.operator_norm().ln()) / k as f64;
        lo = lo.min(v);
        hi = hi.max(v);
        if (k + 1).is_power_of_two() {
            windows.push((63 - k.leading_zeros(), lo, hi));
            lo = f64::INFINITY;
            hi = f64::NEG_INFINITY;
        }
    }
    Ok(FkGapDiagnostic { theta, windows })
}

/// Largest angle between unstable directions at adjacent grid points, per
/// dyadic resolution. Non-decaying variation under refinement is consistent
/// with discontinuous Oseledets directions. Exploratory.
pub fn oscillation_diagnostic<C: UnitTimeCocycle + ?Sized>(
    c: &C,
    log2_resolutions: std::ops::RangeInclusive<u32>,
    n: u64,
) -> Result<Vec<(u32, f64)>> {
    log2_resolutions
        .map(|k| {
            let field = oseledets_directions(c, 1 << k, n)?;
            let pts = &field.points;
            let worst = (0..pts.len())
                .map(|i| line_angle(&pts[i].unstable, &pts[(i + 1) % pts.len()].unstable))
                .fold(0.0, f64::max);
            Ok((k, worst))
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::driving::CircleRotation;

    fn constant(m: Mat) -> DiscreteCocycle {
        DiscreteCocycle::constant(CircleRotation::golden(), m).unwrap()
    }

    #[test]
    fn schedule_is_increasing_and_ends_at_n() {
        let s = log_schedule(1000);
        assert!(s.windows(2).all(|w| w[0] < w[1]));
        assert_eq!(*s.last().unwrap(), 1000);
        assert_eq!(s[0], 1);
    }

    #[test]
    fn fk_of_constant_diagonal() {
        let s = fk_series(&constant(Mat::diag(&[2.0, 0.5])), 0.1, 500).unwrap();
        assert!(s.points.iter().all(|p| (p.1 - 2f64.ln()).abs() < 1e-12));
        let id = fk_series(&constant(Mat::identity(2)), 0.1, 100).unwrap();
        assert!(id.points.iter().all(|p| p.1.abs() < 1e-15));
    }

    #[test]
    fn spectrum_of_constant_diagonals() {
        let r = lyapunov_spectrum(&constant(Mat::diag(&[2.0, 0.5])), 0.0, 20_000).unwrap();
        assert!((r.exponents[0] - 2f64.ln()).abs() < 1e-3);
        assert!((r.exponents[1] + 2f64.ln()).abs() < 1e-3);
        let r3 = lyapunov_spectrum(&constant(Mat::diag(&[2.0, 1.0, 0.5])), 0.0, 20_000).unwrap();
        assert!((r3.exponents[0] - 2f64.ln()).abs() < 1e-3);
        assert!(r3.exponents[1].abs() < 1e-3);
        assert!((r3.exponents[2] + 2f64.ln()).abs() < 1e-3);
    }

    #[test]
    fn vector_exponents_of_diagonal() {
        let c = constant(Mat::diag(&[2.0, 0.5]));
        let s = vector_exponent(&c, 0.0, &[0.0, 1.0, 0.0], 100, TimeDirection::Forward).unwrap();
        assert!((s.last() + 2f64.ln()).abs() < 1e-12);
        assert!(matches!(
            vector_exponent(&c, 0.0, &[0.0; 3], 10, TimeDirection::Forward),
            Err(Error::ZeroVector)
        ));
    }

    #[test]
    fn directions_of_diagonal() {
        let d = directions_at(&constant(Mat::diag(&[2.0, 0.5])), 0.3, 50).unwrap();
        assert!(line_angle(&d.unstable, &[1.0, 0.0, 0.0]) < 1e-15);
        assert!(line_angle(&d.stable, &[0.0, 1.0, 0.0]) < 1e-15);
        assert!(matches!(
            directions_at(&constant(Mat::identity(2)), 0.3, 50),
            Err(Error::DegenerateSpectrum(_))
        ));
    }

    #[test]
    fn projective_step_examples() {
        let id = constant(Mat::identity(2));
        let p = ProjectivePoint::new(0.2, [0.6, 0.8]).unwrap();
        let q = projective_step(&id, &p);
        assert_eq!(q.direction, p.direction);
        assert_eq!(q.theta, CircleRotation::golden().rotate(0.2, 1));
        let diag = constant(Mat::diag(&[2.0, 0.5]));
        let e2 = ProjectivePoint::new(0.0, [0.0, -1.0]).unwrap();
        assert_eq!(projective_step(&diag, &e2).direction, [0.0, 1.0]);
    }

    #[test]
    fn le_properties_on_constant_cocycle() {
        let c = constant(Mat::diag(&[2.0, 0.5]));
        let r = le_property_check(&c, 0.1, &[1.0, 0.0, 0.0], &[0.0, 1.0, 0.0], 200, 7).unwrap();
        assert!(r.passed, "{r:?}");
    }
}
