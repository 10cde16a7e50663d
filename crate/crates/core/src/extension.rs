//! Generator fields on the mapping torus and the continuous-time cocycles
//! they generate.

use std::fmt;
use std::sync::atomic::{AtomicU64, Ordering};
use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::cocycle::{block_embed, half_speed, DiscreteCocycle};
use crate::driving::{CircleRotation, MappingTorusPoint, SuspensionFlow};
use crate::error::{Error, Result};
use crate::homotopy::{build_homotopy, classify, HomotopyClass, HomotopyPath, PathFiber};
use crate::linalg::{rescale_by_log_det, Mat, SlMatrix, TracelessMatrix};
use crate::tol;

/// Largest traceless correction tolerated when deriving `G` from a homotopy.
pub const MAX_TRACE_CORRECTION: f64 = 1e-5;

/// Fixed-step classical RK4 with periodic determinant renormalization.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct IntegratorConfig {
    step: f64,
    renorm_interval: usize,
}

impl Default for IntegratorConfig {
    fn default() -> Self {
        IntegratorConfig {
            step: 1e-3,
            renorm_interval: 50,
        }
    }
}

impl IntegratorConfig {
    /// `step` must lie in `(0, 0.1]` and divide 1.
    pub fn new(step: f64, renorm_interval: usize) -> Result<Self> {
        if !(step > 0.0 && step <= 0.1) {
            return Err(Error::InvalidParameter(format!("step {step} outside (0, 0.1]")));
        }
        let m = (1.0 / step).round();
        if (m * step - 1.0).abs() > tol::CONSTRUCTION {
            return Err(Error::InvalidParameter(format!("step {step} does not divide 1")));
        }
        if renorm_interval == 0 {
            return Err(Error::InvalidParameter(
                "renormalization interval must be positive".into(),
            ));
        }
        Ok(IntegratorConfig { step, renorm_interval })
    }

    pub fn with_step(step: f64) -> Result<Self> {
        Self::new(step, IntegratorConfig::default().renorm_interval)
    }

    pub fn step(&self) -> f64 {
        self.step
    }

    pub fn renorm_interval(&self) -> usize {
        self.renorm_interval
    }

    /// Number of steps covering `t`, or `StepNotDividing`.
    fn step_count(&self, t: f64) -> Result<i64> {
        let k = (t / self.step).round();
        if !t.is_finite() || (k * self.step - t).abs() > 1e-9 * t.abs().max(1.0) {
            return Err(Error::StepNotDividing { t, step: self.step });
        }
        Ok(k as i64)
    }
}

type ClosedFn = Arc<dyn Fn(f64, f64) -> Mat + Send + Sync>;

#[derive(Clone)]
enum FieldKind {
    Zero,
    Closed(ClosedFn),
    Homotopy(HomotopyPath),
}

/// Traceless field `G(θ, r)` on the mapping torus.
#[derive(Clone)]
pub struct GeneratorField {
    dim: usize,
    kind: FieldKind,
    trace_offset: f64,
    max_correction: Arc<AtomicU64>,
}

impl fmt::Debug for GeneratorField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("GeneratorField")
            .field("dim", &self.dim)
            .field("source", &self.source())
            .field("trace_offset", &self.trace_offset)
            .finish()
    }
}

impl GeneratorField {
    pub fn zero(dim: usize) -> Self {
        Self::with_kind(dim, FieldKind::Zero)
    }

    /// Field given in closed form; values are projected to trace zero.
    pub fn closed_form(dim: usize, g: impl Fn(f64, f64) -> Mat + Send + Sync + 'static) -> Self {
        Self::with_kind(dim, FieldKind::Closed(Arc::new(g)))
    }

    /// `G = ∂ᵣh·h⁻¹`. The traceless correction is checked on a 64×64 grid.
    pub fn from_homotopy(h: HomotopyPath) -> Result<Self> {
        let field = Self::with_kind(h.dim(), FieldKind::Homotopy(h));
        let n = 64;
        for i in 0..n {
            let fiber = field.fiber(i as f64 / n as f64)?;
            for j in 0..=n {
                fiber.eval(j as f64 / n as f64);
            }
        }
        let c = field.max_trace_correction();
        if c > MAX_TRACE_CORRECTION {
            return Err(Error::TraceDriftTooLarge(c));
        }
        Ok(field)
    }

    fn with_kind(dim: usize, kind: FieldKind) -> Self {
        GeneratorField {
            dim,
            kind,
            trace_offset: 0.0,
            max_correction: Arc::new(AtomicU64::new(0)),
        }
    }

    /// Adds `c·Id` after the traceless projection. Breaks `det = 1`; used
    /// to exercise drift detection.
    pub fn with_trace_offset(mut self, c: f64) -> Self {
        self.trace_offset = c;
        self
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn source(&self) -> &'static str {
        match &self.kind {
            FieldKind::Zero => "zero",
            FieldKind::Closed(_) => "closed-form",
            FieldKind::Homotopy(h) => h.construction(),
        }
    }

    pub fn homotopy(&self) -> Option<&HomotopyPath> {
        match &self.kind {
            FieldKind::Homotopy(h) => Some(h),
            _ => None,
        }
    }

    /// Largest trace removed by projection so far.
    pub fn max_trace_correction(&self) -> f64 {
        f64::from_bits(self.max_correction.load(Ordering::Relaxed))
    }

    /// Precomputes the θ-dependent part of the field.
    pub fn fiber(&self, theta: f64) -> Result<FieldFiber<'_>> {
        let kind = match &self.kind {
            FieldKind::Zero => FiberKind::Zero,
            FieldKind::Closed(g) => FiberKind::Closed(theta, g.clone()),
            FieldKind::Homotopy(h) => FiberKind::Homotopy(h.fiber(theta)?),
        };
        Ok(FieldFiber { field: self, kind })
    }

    pub fn eval(&self, theta: f64, r: f64) -> Result<Mat> {
        Ok(self.fiber(theta)?.eval(r))
    }

    /// Trace, magnitude and seam diagnostics on a `grid × grid` sample.
    pub fn sweep(&self, grid: usize) -> Result<FieldReport> {
        let grid = grid.max(2);
        let rows: Vec<FieldReport> = (0..grid)
            .into_par_iter()
            .map(|i| -> Result<FieldReport> {
                let fiber = self.fiber(i as f64 / grid as f64)?;
                let mut rep = FieldReport::default();
                for j in 0..=grid {
                    let g = fiber.eval(j as f64 / grid as f64);
                    rep.max_trace = rep.max_trace.max(g.trace().abs());
                    rep.sup_norm = rep.sup_norm.max(g.frobenius_norm());
                }
                for r in [1e-3, 1.0 - 1e-3] {
                    let g = fiber.eval(r);
                    rep.max_trace = rep.max_trace.max(g.trace().abs());
                    rep.edge_norm = rep.edge_norm.max(g.frobenius_norm());
                }
                for r in [0.0, 1.0] {
                    rep.seam_norm = rep.seam_norm.max(fiber.eval(r).frobenius_norm());
                }
                Ok(rep)
            })
            .collect::<Result<_>>()?;
        Ok(rows.into_iter().fold(FieldReport::default(), |a, b| FieldReport {
            max_trace: a.max_trace.max(b.max_trace),
            sup_norm: a.sup_norm.max(b.sup_norm),
            edge_norm: a.edge_norm.max(b.edge_norm),
            seam_norm: a.seam_norm.max(b.seam_norm),
        }))
    }

    fn record(&self, correction: f64) {
        self.max_correction.fetch_max(correction.to_bits(), Ordering::Relaxed);
    }
}

/// Generator diagnostics over a sample grid.
#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize)]
pub struct FieldReport {
    pub max_trace: f64,
    /// `sup ‖G‖_F` over the grid.
    pub sup_norm: f64,
    /// `max ‖G‖_F` at `r ∈ {1e-3, 1 − 1e-3}`.
    pub edge_norm: f64,
    /// `max ‖G‖_F` at `r ∈ {0, 1}`.
    pub seam_norm: f64,
}

enum FiberKind {
    Zero,
    Closed(f64, ClosedFn),
    Homotopy(PathFiber),
}

/// `r ↦ G(θ, r)` for a fixed `θ`.
pub struct FieldFiber<'a> {
    field: &'a GeneratorField,
    kind: FiberKind,
}

impl FieldFiber<'_> {
    pub fn eval(&self, r: f64) -> Mat {
        let d = self.field.dim;
        let raw = match &self.kind {
            FiberKind::Zero => return Mat::identity(d) * self.field.trace_offset,
            FiberKind::Closed(theta, g) => g(*theta, r),
            FiberKind::Homotopy(h) => {
                let v = h.value(r);
                h.dt(r) * (v.adjugate() * (1.0 / v.det()))
            }
        };
        let (g, c) = TracelessMatrix::project(raw);
        self.field.record(c);
        g.into_mat() + Mat::identity(d) * self.field.trace_offset
    }
}

/// Fundamental solution of `∂ₜΦ = G(φᵗ(θ,r))·Φ` over the suspension flow.
#[derive(Clone, Debug)]
pub struct ContinuousCocycle {
    field: GeneratorField,
    flow: SuspensionFlow,
    config: IntegratorConfig,
}

/// Bookkeeping of one integration.
#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize)]
pub struct IntegrationStats {
    pub steps: u64,
    /// Largest `|det − 1|` removed by a renormalization.
    pub max_det_correction: f64,
}

impl ContinuousCocycle {
    pub fn new(field: GeneratorField, rotation: CircleRotation, config: IntegratorConfig) -> Self {
        ContinuousCocycle {
            field,
            flow: SuspensionFlow::new(rotation),
            config,
        }
    }

    pub fn field(&self) -> &GeneratorField {
        &self.field
    }

    pub fn flow(&self) -> &SuspensionFlow {
        &self.flow
    }

    pub fn rotation(&self) -> &CircleRotation {
        &self.flow.rotation
    }

    pub fn config(&self) -> &IntegratorConfig {
        &self.config
    }

    pub fn dim(&self) -> usize {
        self.field.dim
    }

    pub fn with_config(&self, config: IntegratorConfig) -> Self {
        ContinuousCocycle { config, ..self.clone() }
    }

    /// `Φᵗ_p`.
    pub fn integrate(&self, p: MappingTorusPoint, t: f64) -> Result<SlMatrix> {
        Ok(self.integrate_with_stats(p, t)?.0)
    }

    /// `Φⁿ_{(θ,0)}` for integer `n`.
    pub fn at_integer(&self, theta: f64, n: i64) -> Result<SlMatrix> {
        self.integrate(MappingTorusPoint::base(theta), n as f64)
    }

    pub fn integrate_with_stats(&self, p: MappingTorusPoint, t: f64) -> Result<(SlMatrix, IntegrationStats)> {
        let steps = self.config.step_count(t)?;
        let d = self.dim();
        let mut stats = IntegrationStats::default();
        if steps == 0 {
            return Ok((SlMatrix::identity(d), stats));
        }
        let h = if steps > 0 { self.config.step } else { -self.config.step };
        let n = steps.unsigned_abs();
        let mut phi = Mat::identity(d);
        let mut fibers = FiberCache::new(self, p.theta);
        let renorm = self.config.renorm_interval as u64;

        // ln det of the accumulated step matrices since the last rescale.
        // Each step matrix is near the identity, so its determinant is
        // accurate even when `phi` itself has a large norm.
        let mut log_det = 0.0;
        for i in 0..n {
            let a = p.r + i as f64 * h;
            let b = p.r + (i + 1) as f64 * h;
            let (lo, hi) = if a < b { (a, b) } else { (b, a) };
            let seam = lo.ceil();
            let step = if seam > lo && seam < hi {
                let first = fibers.rk4_step(a, seam)?;
                fibers.rk4_step(seam, b)? * first
            } else {
                fibers.rk4_step(a, b)?
            };
            log_det += step.det().ln();
            phi = step * phi;
            stats.steps += 1;
            if (i + 1) % renorm == 0 || i + 1 == n {
                stats.max_det_correction = stats.max_det_correction.max(log_det.exp_m1().abs());
                phi = rescale_by_log_det(&phi, log_det);
                log_det = 0.0;
            }
        }
        if !phi.is_finite() {
            return Err(Error::NonFinite);
        }
        Ok((SlMatrix::new_unchecked(phi), stats))
    }
}

/// Current fiber of the mapping torus, indexed by the integer part of the
/// unfolded coordinate `u = r + t`.
struct FiberCache<'a> {
    cocycle: &'a ContinuousCocycle,
    theta0: f64,
    index: i64,
    fiber: FieldFiber<'a>,
    last: Option<(i64, f64, Mat)>,
}

impl<'a> FiberCache<'a> {
    fn new(cocycle: &'a ContinuousCocycle, theta0: f64) -> Self {
        FiberCache {
            cocycle,
            theta0,
            index: 0,
            fiber: cocycle.field.fiber(theta0).expect("base fiber"),
            last: None,
        }
    }

    fn select(&mut self, k: i64) -> Result<()> {
        if k != self.index {
            let theta = self.cocycle.flow.rotation.rotate(self.theta0, k);
            self.fiber = self.cocycle.field.fiber(theta)?;
            self.index = k;
        }
        Ok(())
    }

    fn g(&mut self, k: i64, r: f64) -> Mat {
        if let Some((lk, lr, g)) = &self.last {
            if *lk == k && *lr == r {
                return *g;
            }
        }
        self.fiber.eval(r)
    }

    /// Matrix `M` of one RK4 step from `u = a` to `u = b` inside a single
    /// fiber, so that the step maps `Φ ↦ M·Φ`.
    fn rk4_step(&mut self, a: f64, b: f64) -> Result<Mat> {
        let k = (0.5 * (a + b)).floor() as i64;
        self.select(k)?;
        let (ra, rb) = (a - k as f64, b - k as f64);
        let h = b - a;
        let rm = ra + 0.5 * h;
        let ga = self.g(k, ra);
        let gm = self.fiber.eval(rm);
        let gb = self.fiber.eval(rb);
        self.last = Some((k, rb, gb));
        let id = Mat::identity(ga.dim());
        let k1 = ga;
        let k2 = gm * (id + k1 * (0.5 * h));
        let k3 = gm * (id + k2 * (0.5 * h));
        let k4 = gb * (id + k3 * h);
        Ok(id + (k1 + (k2 + k3) * 2.0 + k4) * (h / 6.0))
    }
}

/// Which discrete contract an extension satisfies at integer times.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum ExtensionVariant {
    /// `Φⁿ_{(θ,0)} = Aⁿ_θ`.
    Natural,
    /// `Φⁿ_{(θ,0)} = Aⁿ_{2θ}` over `α/2`.
    HalfSpeed,
    /// `Φⁿ_{(θ,0)} = diag(Aⁿ_{2θ}, 1)` over `α/2`.
    Embedding,
}

/// A continuous-time cocycle together with the discrete cocycle it extends.
#[derive(Clone, Debug)]
pub struct Extension {
    pub cocycle: ContinuousCocycle,
    /// Cocycle `B` over the new driving with `Φⁿ_{(θ,0)} = Bⁿ_θ`.
    pub discrete: DiscreteCocycle,
    pub source: DiscreteCocycle,
    pub variant: ExtensionVariant,
    pub class: HomotopyClass,
}

impl Extension {
    /// The contracted discrete value at `(θ, 0)` and integer time `n`.
    pub fn expected(&self, theta: f64, n: i64) -> Mat {
        self.discrete.n_step(theta, n).into_mat()
    }
}

/// Extension of `A` whose time-n maps on the base fiber equal `Aⁿ`; exists
/// exactly when the generator loop of `A` is nullhomotopic.
pub fn natural_extension(a: &DiscreteCocycle) -> Result<Extension> {
    natural_extension_with(a, IntegratorConfig::default())
}

pub fn natural_extension_with(a: &DiscreteCocycle, config: IntegratorConfig) -> Result<Extension> {
    let l = a.as_loop();
    let class = classify(&l)?;
    if !class.is_trivial() {
        let what = match class {
            HomotopyClass::Winding { winding } => format!("winding number {winding} in SL(2)"),
            HomotopyClass::Parity { .. } => "non-trivial class in pi_1(SL(3)) = Z/2".into(),
        };
        return Err(Error::NotNullhomotopic(what));
    }
    let field = GeneratorField::from_homotopy(build_homotopy(&l)?)?;
    Ok(Extension {
        cocycle: ContinuousCocycle::new(field, *a.driving(), config),
        discrete: a.clone(),
        source: a.clone(),
        variant: ExtensionVariant::Natural,
        class,
    })
}

/// Extension over `α/2` with `Φⁿ_{(θ,0)} = Aⁿ_{2θ}` for an SL(3) cocycle.
pub fn extend_half_speed(a: &DiscreteCocycle) -> Result<Extension> {
    extend_half_speed_with(a, IntegratorConfig::default())
}

pub fn extend_half_speed_with(a: &DiscreteCocycle, config: IntegratorConfig) -> Result<Extension> {
    if a.dim() != 3 {
        return Err(Error::DimensionMismatch {
            expected: 3,
            found: a.dim(),
        });
    }
    let b = half_speed(a);
    let mut ext = natural_extension_with(&b, config).map_err(|e| match e {
        Error::NotNullhomotopic(m) => Error::NotNullhomotopic(format!(
            "doubled loop classified non-trivial ({m}); numerical classification is inconsistent"
        )),
        e => e,
    })?;
    ext.source = a.clone();
    ext.variant = ExtensionVariant::HalfSpeed;
    Ok(ext)
}

/// Adds a neutral third coordinate, then extends at half speed.
pub fn extend_sl2_via_embedding(a: &DiscreteCocycle) -> Result<Extension> {
    extend_sl2_via_embedding_with(a, IntegratorConfig::default())
}

pub fn extend_sl2_via_embedding_with(a: &DiscreteCocycle, config: IntegratorConfig) -> Result<Extension> {
    let mut ext = extend_half_speed_with(&block_embed(a)?, config)?;
    ext.source = a.clone();
    ext.variant = ExtensionVariant::Embedding;
    Ok(ext)
}

/// Residuals of an extension against its discrete contract.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct VerificationReport {
    pub variant: ExtensionVariant,
    pub grid: usize,
    pub n_max: i64,
    /// `(θ, n, ‖Φⁿ_{(θ,0)} − expected‖_F)` for every sample.
    pub errors: Vec<(f64, i64, f64)>,
    /// `max ‖Φⁿ − expected‖_F / |n|`.
    pub fidelity: f64,
    /// `max |det Φⁿ − 1|`.
    pub det_drift: f64,
    /// Largest determinant correction applied by renormalization.
    pub renorm_correction: f64,
    pub drift_flag: bool,
    pub cocycle_residual: f64,
    pub reversal_residual: f64,
    /// For the embedding variant: largest deviation of the third row and
    /// column of `Φⁿ` from those of the identity.
    pub block_residual: Option<f64>,
    pub passed: bool,
}

/// Compares `Φⁿ_{(θ,0)}` with the discrete contract for `|n| ≤ n_max` on a
/// uniform θ-grid, and samples cocycle and time-reversal residuals.
/// Per-θ residuals `(θ, n, error)` with the worst det drift, renormalization
/// correction and block leak along them.
type GridRow = (Vec<(f64, i64, f64)>, f64, f64, f64);

pub fn verify_extension(ext: &Extension, n_max: i64, grid: usize, seed: u64) -> Result<VerificationReport> {
    let c = &ext.cocycle;
    let rows: Vec<GridRow> = (0..grid)
        .into_par_iter()
        .map(|i| -> Result<_> {
            let theta = i as f64 / grid as f64;
            let mut out = Vec::with_capacity(2 * n_max as usize);
            let (mut det, mut corr, mut leak) = (0.0f64, 0.0f64, 0.0f64);
            for dir in [1i64, -1] {
                let mut phi = Mat::identity(c.dim());
                let mut base = theta;
                for n in 1..=n_max {
                    let (step, stats) = c.integrate_with_stats(MappingTorusPoint::base(base), dir as f64)?;
                    corr = corr.max(stats.max_det_correction);
                    phi = *step.as_mat() * phi;
                    base = c.rotation().rotate(base, dir);
                    let expected = ext.expected(theta, dir * n);
                    det = det.max((phi.det() - 1.0).abs());
                    if c.dim() == 3 {
                        leak = leak.max((phi[(2, 2)] - 1.0).abs());
                        for k in 0..2 {
                            leak = leak.max(phi[(k, 2)].abs()).max(phi[(2, k)].abs());
                        }
                    }
                    out.push((theta, dir * n, phi.dist(&expected)));
                }
            }
            Ok((out, det, corr, leak))
        })
        .collect::<Result<_>>()?;

    let mut errors = Vec::new();
    let (mut det_drift, mut renorm_correction, mut leak) = (0.0f64, 0.0f64, 0.0f64);
    for (e, d, r, l) in rows {
        errors.extend(e);
        det_drift = det_drift.max(d);
        renorm_correction = renorm_correction.max(r);
        leak = leak.max(l);
    }
    errors.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1)));
    let fidelity = errors
        .iter()
        .map(|(_, n, e)| e / n.unsigned_abs() as f64)
        .fold(0.0, f64::max);

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let (mut cocycle_residual, mut reversal_residual) = (0.0f64, 0.0f64);
    let m = (1.0 / c.config().step()).round() as i64;
    for _ in 0..8 {
        let p = MappingTorusPoint::new(rng.random_range(0.0..1.0), rng.random_range(0.0..1.0))?;
        let s = rng.random_range(-2 * m..=2 * m) as f64 / m as f64;
        let t = rng.random_range(-2 * m..=2 * m) as f64 / m as f64;
        cocycle_residual = cocycle_residual.max(cocycle_residual_at(c, p, s, t)?);
        reversal_residual = reversal_residual.max(reversal_residual_at(c, p, s)?);
    }

    let block_residual = (ext.variant == ExtensionVariant::Embedding).then_some(leak);
    let drift_flag = renorm_correction > tol::DECOMPOSITION;
    let passed = fidelity <= tol::ODE
        && det_drift <= tol::DECOMPOSITION
        && !drift_flag
        && cocycle_residual <= tol::ODE
        && reversal_residual <= tol::ODE;
    Ok(VerificationReport {
        variant: ext.variant,
        grid,
        n_max,
        errors,
        fidelity,
        det_drift,
        renorm_correction,
        drift_flag,
        cocycle_residual,
        reversal_residual,
        block_residual,
        passed,
    })
}

/// `‖Φ^{s+t}_p − Φᵗ_{φˢp}·Φˢ_p‖_F`.
pub fn cocycle_residual_at(c: &ContinuousCocycle, p: MappingTorusPoint, s: f64, t: f64) -> Result<f64> {
    let whole = c.integrate(p, s + t)?;
    let first = c.integrate(p, s)?;
    let second = c.integrate(c.flow().suspend(p, s), t)?;
    Ok(whole.dist(&(second * first)))
}

/// `‖Φ^{−t}_{φᵗp}·Φᵗ_p − Id‖_F`.
pub fn reversal_residual_at(c: &ContinuousCocycle, p: MappingTorusPoint, t: f64) -> Result<f64> {
    let fwd = c.integrate(p, t)?;
    let back = c.integrate(c.flow().suspend(p, t), -t)?;
    Ok((back * fwd).dist(&SlMatrix::identity(c.dim())))
}
