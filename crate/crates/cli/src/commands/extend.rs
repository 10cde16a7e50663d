use cocycle_core::{verify_extension, Extension, ExtensionVariant, VerificationReport};
use serde::Serialize;

use super::{build_extension, cocycle, failures, integrator, parse_variant, Gate, Outcome};
use crate::config::RunConfig;
use crate::error::CliResult;
use crate::output::{Cell, RunOutput};
use crate::svg;

/// Verification summary without the per-sample residuals.
#[derive(Debug, Clone, Serialize)]
pub struct ExtendReport {
    pub cocycle: String,
    pub variant: ExtensionVariant,
    pub step: f64,
    pub n_max: i64,
    pub grid: usize,
    pub fidelity: f64,
    pub det_drift: f64,
    pub renorm_correction: f64,
    pub drift_flag: bool,
    pub cocycle_residual: f64,
    pub reversal_residual: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub block_residual: Option<f64>,
    pub field_source: &'static str,
    pub max_trace_correction: f64,
    pub gates: Vec<Gate>,
    pub passed: bool,
}

pub fn summarize(ext: &Extension, v: &VerificationReport, step: f64) -> ExtendReport {
    let mut gates = vec![
        Gate::at_most("fidelity per unit time", v.fidelity, 1e-6),
        Gate::at_most("determinant drift", v.det_drift, 1e-8),
        Gate::flag("no renormalization drift", !v.drift_flag),
        Gate::at_most("cocycle residual", v.cocycle_residual, 1e-6),
        Gate::at_most("time-reversal residual", v.reversal_residual, 1e-6),
    ];
    if let Some(b) = v.block_residual {
        gates.push(Gate::at_most("block structure residual", b, 1e-6));
    }
    let passed = v.passed && gates.iter().all(|g| g.passed);
    ExtendReport {
        cocycle: ext.source.label(),
        variant: v.variant,
        step,
        n_max: v.n_max,
        grid: v.grid,
        fidelity: v.fidelity,
        det_drift: v.det_drift,
        renorm_correction: v.renorm_correction,
        drift_flag: v.drift_flag,
        cocycle_residual: v.cocycle_residual,
        reversal_residual: v.reversal_residual,
        block_residual: v.block_residual,
        field_source: ext.cocycle.field().source(),
        max_trace_correction: ext.cocycle.field().max_trace_correction(),
        gates,
        passed,
    }
}

pub fn residual_rows(v: &VerificationReport) -> Vec<Vec<Cell>> {
    v.errors
        .iter()
        .map(|&(t, n, e)| vec![Cell::Real(t), Cell::Int(n), Cell::Real(e)])
        .collect()
}

pub fn residual_plot(v: &VerificationReport) -> String {
    let mut worst = std::collections::BTreeMap::<i64, f64>::new();
    for &(_, n, e) in &v.errors {
        let w = worst.entry(n).or_insert(0.0);
        *w = w.max(e);
    }
    let pts = worst
        .into_iter()
        .map(|(n, e)| (n as f64, e.max(1e-300).log10()))
        .collect();
    svg::line_plot("log10 max residual vs n", &[("residual".into(), pts)], false)
}

pub fn run(cfg: &RunConfig, out: &mut RunOutput) -> CliResult<Outcome> {
    let a = cocycle(cfg)?;
    let variant = parse_variant(cfg.variant.as_deref().unwrap_or("natural"))?;
    let ext = build_extension(&a, variant, integrator(cfg)?)?;
    let v = verify_extension(&ext, cfg.n as i64, cfg.grid, cfg.seed)?;
    let report = summarize(&ext, &v, cfg.step);
    out.write_csv("residuals.csv", &["theta", "n", "error"], residual_rows(&v))?;
    out.write_json("verification.json", &report)?;
    if cfg.svg {
        out.write_text("residuals.svg", &residual_plot(&v))?;
    }
    Ok(Outcome {
        summary: format!(
            "variant={}, fidelity={:.3e}, det_drift={:.3e}, passed={}",
            serde_json::to_value(variant).expect("variant").as_str().unwrap_or("?"),
            report.fidelity,
            report.det_drift,
            report.passed
        ),
        failures: failures(&report.gates),
    })
}
