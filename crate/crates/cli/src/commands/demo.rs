use cocycle_core::extension::{extend_sl2_via_embedding_with, natural_extension};
use cocycle_core::homotopy::DEFAULT_RESOLUTION;
use cocycle_core::spectral::{
    directions_at, extension_spectrum_compare, fk_gap_diagnostic, invariance_residual, lyapunov_spectrum,
    oscillation_diagnostic, oseledets_directions, vector_exponent, TimeDirection,
};
use cocycle_core::{block_embed, half_speed, verify_extension, DiscreteCocycle, Error};
use serde::Serialize;
use serde_json::json;

use super::classify::classify_cocycle;
use super::extend::{residual_plot, residual_rows, summarize};
use super::{failures, integrator, rotation, Gate, Outcome};
use crate::config::RunConfig;
use crate::error::{CliError, CliResult};
use crate::family::build_cocycle;
use crate::output::{Cell, RunOutput};

/// Largest base grid and horizon for the direction fields.
const DIRECTION_GRID: usize = 16;
const DIRECTION_N: u64 = 2_000;

#[derive(Debug, Serialize)]
struct DemoSummary {
    cocycle: String,
    lambda: f64,
    alpha: f64,
    n: u64,
    obstruction: Option<String>,
    exponents_sl2: Vec<f64>,
    exponents_sl3: Vec<f64>,
    herman_bound: f64,
    notes: Vec<String>,
    gates: Vec<Gate>,
    passed: bool,
}

pub fn run(cfg: &RunConfig, out: &mut RunOutput) -> CliResult<Outcome> {
    if !matches!(cfg.cocycle.as_str(), "herman" | "herman-cw") {
        return Err(CliError::Config(format!(
            "herman-demo needs --cocycle herman or herman-cw, got '{}'",
            cfg.cocycle
        )));
    }
    let rot = rotation(cfg)?;
    let h = build_cocycle(&cfg.cocycle, cfg.lambda, rot)?;
    let mut gates = Vec::new();
    let mut notes = Vec::new();

    // Homotopy classes: H, its doubled loop and the embedded doubled loop.
    let mut class_rows = Vec::new();
    for (name, c) in [
        ("herman", h.clone()),
        ("herman-doubled", half_speed(&h)),
        ("herman-embedded", block_embed(&h)?),
        ("herman-embedded-halfspeed", half_speed(&block_embed(&h)?)),
    ] {
        let (r, _) = classify_cocycle(&c, DEFAULT_RESOLUTION)?;
        class_rows.push(json!({ "cocycle": name, "report": r }));
        match name {
            "herman" => gates.push(Gate::flag("|winding(H)| = 1", r.winding.map(i64::abs) == Some(1))),
            "herman-doubled" => gates.push(Gate::flag(
                "|winding(H doubled)| = 2",
                r.winding.map(i64::abs) == Some(2),
            )),
            "herman-embedded" => gates.push(Gate::flag("embedded loop non-trivial", !r.nullhomotopic)),
            _ => gates.push(Gate::flag("embedded doubled loop nullhomotopic", r.nullhomotopic)),
        }
    }
    out.write_json("classes.json", &class_rows)?;

    let obstruction = match natural_extension(&h) {
        Err(e @ Error::NotNullhomotopic(_)) => Some(e.to_string()),
        Err(e) => return Err(e.into()),
        Ok(_) => None,
    };
    gates.push(Gate::flag(
        "natural extension of H is obstructed",
        obstruction.is_some(),
    ));

    // Extension through the SL(3) embedding at half speed.
    let ext = extend_sl2_via_embedding_with(&h, integrator(cfg)?)?;
    let v = verify_extension(&ext, 10, cfg.grid, cfg.seed)?;
    let ext_report = summarize(&ext, &v, cfg.step);
    gates.extend(ext_report.gates.iter().cloned());
    out.write_csv("residuals.csv", &["theta", "n", "error"], residual_rows(&v))?;
    out.write_json("verification.json", &ext_report)?;
    if cfg.svg {
        out.write_text("residuals.svg", &residual_plot(&v))?;
    }

    let field = ext.cocycle.field().sweep(256)?;
    gates.push(Gate::at_most("max |trace G|", field.max_trace, 1e-8));
    gates.push(Gate::at_most(
        "edge norm / sup norm",
        field.edge_norm / field.sup_norm.max(f64::MIN_POSITIVE),
        1e-2,
    ));
    if let Some(hp) = ext.cocycle.field().homotopy() {
        let hr = hp.check(64)?;
        gates.push(Gate::at_most("h(θ,0) - Id", hr.start_error, 1e-8));
        gates.push(Gate::at_most("h(θ,1) - loop", hr.end_error, 1e-7));
        gates.push(Gate::at_most("endpoint t-derivative", hr.endpoint_derivative, 1e-8));
        gates.push(Gate::at_most(
            "finite-difference mismatch",
            hr.derivative_mismatch,
            1e-4,
        ));
        out.write_json("homotopy.json", &hr)?;
    }
    out.write_json("field.json", &field)?;

    // Spectra: Herman in SL(2) and the extension's product path in SL(3).
    let theta = 0.2;
    let s2 = lyapunov_spectrum(&h, theta, cfg.n)?;
    let b: &DiscreteCocycle = &ext.discrete;
    let s3 = lyapunov_spectrum(b, theta, cfg.n)?;
    let bound = ((cfg.lambda + 1.0 / cfg.lambda) / 2.0).ln();
    gates.push(Gate::at_least("λ_u minus Herman bound", s2.exponents[0] - bound, -0.01));
    gates.push(Gate::at_most("|λ_u + λ_s|", s2.sum.abs(), 1e-3));
    gates.push(Gate::at_most("|middle exponent|", s3.exponents[1].abs(), 1e-3));
    let e3 = vector_exponent(b, theta, &[0.0, 0.0, 1.0], cfg.n, TimeDirection::Forward)?.last();
    gates.push(Gate::at_most("|exponent of e3|", e3.abs(), 1e-3));
    let rows = s2.series.iter().chain(&s3.series).flat_map(|s| {
        s.points
            .iter()
            .map(move |&(n, v)| vec![Cell::Text(s.label.clone()), Cell::from(n), Cell::Real(v)])
    });
    out.write_csv("spectrum.csv", &["label", "n", "value"], rows.collect::<Vec<_>>())?;

    let transfer = extension_spectrum_compare(&h, &ext, cfg.grid.min(64), cfg.n)?;
    gates.push(Gate::at_most(
        "FK transfer discrepancy",
        transfer.max_product_discrepancy,
        1e-8,
    ));
    gates.push(Gate::at_most(
        "integrated spot-check discrepancy",
        transfer.max_spot_discrepancy,
        5e-6,
    ));
    out.write_csv(
        "transfer.csv",
        &["theta", "fk_extension", "fk_herman_at_2theta"],
        transfer
            .rows
            .iter()
            .map(|r| vec![Cell::Real(r.0), Cell::Real(r.1), Cell::Real(r.2)])
            .collect::<Vec<_>>(),
    )?;

    // Oseledets directions need a spectral gap; λ = 1 has none.
    match directions_at(b, theta, DIRECTION_N) {
        Ok(d) => {
            let c = d.center.unwrap_or([0.0; 3]);
            let dev = c[0].abs().max(c[1].abs()).max((c[2].abs() - 1.0).abs());
            gates.push(Gate::at_most("E0 deviation from e3", dev, 1e-6));
            let field = oseledets_directions(&h, DIRECTION_GRID, DIRECTION_N)?;
            let res = invariance_residual(&h, &field)?;
            gates.push(Gate::at_most("Oseledets invariance residual (rad)", res, 1e-4));
            out.write_csv(
                "directions.csv",
                &["theta", "unstable_x", "unstable_y", "stable_x", "stable_y"],
                field
                    .points
                    .iter()
                    .map(|p| {
                        vec![p.theta, p.unstable[0], p.unstable[1], p.stable[0], p.stable[1]]
                            .into_iter()
                            .map(Cell::Real)
                            .collect()
                    })
                    .collect::<Vec<_>>(),
            )?;
            let osc = oscillation_diagnostic(&h, 6..=8, DIRECTION_N / 2)?;
            let gap = fk_gap_diagnostic(&h, theta, 12)?;
            out.write_json(
                "diagnostics.json",
                &json!({ "oscillation": osc, "fk_gap": gap, "exploratory": true }),
            )?;
        }
        Err(Error::DegenerateSpectrum(r)) => {
            notes.push(format!(
                "no spectral gap at θ = {theta} (rates {r:?}); Oseledets checks skipped"
            ));
        }
        Err(e) => return Err(e.into()),
    }

    let passed = gates.iter().all(|g| g.passed);
    let summary = DemoSummary {
        cocycle: h.label(),
        lambda: cfg.lambda,
        alpha: rot.value(),
        n: cfg.n,
        obstruction,
        exponents_sl2: s2.exponents.clone(),
        exponents_sl3: s3.exponents.clone(),
        herman_bound: bound,
        notes,
        gates: gates.clone(),
        passed,
    };
    out.write_json("summary.json", &summary)?;
    let fmt = |v: &[f64]| v.iter().map(|x| format!("{x:.5}")).collect::<Vec<_>>().join(", ");
    Ok(Outcome {
        summary: format!(
            "{} of {} gates passed; SL(2) exponents [{}], SL(3) exponents [{}]",
            gates.iter().filter(|g| g.passed).count(),
            gates.len(),
            fmt(&s2.exponents),
            fmt(&s3.exponents)
        ),
        failures: failures(&gates),
    })
}
