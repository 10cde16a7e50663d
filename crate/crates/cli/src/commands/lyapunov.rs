use cocycle_core::spectral::{
    fk_series, lyapunov_spectrum, vector_exponent, ConvergenceSeries, TimeDirection, UnitTimeCocycle,
};
use rayon::prelude::*;
use serde::Serialize;

use super::{build_extension, cocycle, integrator, parse_variant, seeded_thetas, Outcome};
use crate::config::RunConfig;
use crate::error::CliResult;
use crate::family::is_herman;
use crate::output::{Cell, RunOutput};
use crate::svg;

#[derive(Debug, Clone, Serialize)]
pub struct PointSummary {
    pub theta: f64,
    pub exponents: Vec<f64>,
    pub sum: f64,
    pub tail_change: Vec<f64>,
    pub fk: f64,
    /// Forward exponent of `e₃` (SL(3) only).
    #[serde(skip_serializing_if = "Option::is_none")]
    pub e3_exponent: Option<f64>,
}

#[derive(Debug, Clone, Serialize)]
pub struct LyapunovSummary {
    pub cocycle: String,
    pub integrated: bool,
    pub n: u64,
    pub points: Vec<PointSummary>,
    pub mean_exponents: Vec<f64>,
    /// `log((λ + λ⁻¹)/2)` for Herman families in SL(2).
    #[serde(skip_serializing_if = "Option::is_none")]
    pub herman_bound: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub herman_bound_holds: Option<bool>,
}

pub struct SpectrumRun {
    pub summary: LyapunovSummary,
    pub series: Series,
}

type Series = Vec<(f64, ConvergenceSeries)>;

pub fn spectrum_at_points(c: &dyn UnitTimeCocycle, thetas: &[f64], n: u64) -> CliResult<(Vec<PointSummary>, Series)> {
    let results = thetas
        .par_iter()
        .map(|&theta| -> CliResult<_> {
            let qr = lyapunov_spectrum(c, theta, n)?;
            let fk = fk_series(c, theta, n)?;
            let e3_exponent = if c.dim() == 3 {
                Some(vector_exponent(c, theta, &[0.0, 0.0, 1.0], n, TimeDirection::Forward)?.last())
            } else {
                None
            };
            let point = PointSummary {
                theta,
                exponents: qr.exponents.clone(),
                sum: qr.sum,
                tail_change: qr.tail_change.clone(),
                fk: fk.last(),
                e3_exponent,
            };
            let mut series = vec![(theta, fk)];
            series.extend(qr.series.into_iter().map(|s| (theta, s)));
            Ok((point, series))
        })
        .collect::<CliResult<Vec<_>>>()?;
    let mut points = Vec::new();
    let mut series = Vec::new();
    for (p, s) in results {
        points.push(p);
        series.extend(s);
    }
    Ok((points, series))
}

pub fn series_rows(series: &[(f64, ConvergenceSeries)]) -> Vec<Vec<Cell>> {
    series
        .iter()
        .flat_map(|(theta, s)| {
            s.points.iter().map(move |&(n, v)| {
                vec![
                    Cell::Real(*theta),
                    Cell::Text(s.label.clone()),
                    Cell::Text(s.norm.to_string()),
                    Cell::from(n),
                    Cell::Real(v),
                ]
            })
        })
        .collect()
}

pub fn compute(cfg: &RunConfig) -> CliResult<SpectrumRun> {
    let a = cocycle(cfg)?;
    let thetas = seeded_thetas(cfg.seed, cfg.grid);
    let (points, series, label, integrated) = match &cfg.variant {
        Some(v) => {
            let ext = build_extension(&a, parse_variant(v)?, integrator(cfg)?)?;
            let (p, s) = spectrum_at_points(&ext.cocycle, &thetas, cfg.n)?;
            (p, s, ext.cocycle.label(), true)
        }
        None => {
            let (p, s) = spectrum_at_points(&a, &thetas, cfg.n)?;
            (p, s, a.label(), false)
        }
    };
    let d = points.first().map_or(0, |p| p.exponents.len());
    let mean_exponents = (0..d)
        .map(|i| points.iter().map(|p| p.exponents[i]).sum::<f64>() / points.len() as f64)
        .collect::<Vec<f64>>();
    let herman_bound =
        (is_herman(&cfg.cocycle) && d == 2 && !integrated).then(|| ((cfg.lambda + 1.0 / cfg.lambda) / 2.0).ln());
    let herman_bound_holds = herman_bound.map(|b| points.iter().all(|p| p.exponents[0] >= b - 0.01));
    Ok(SpectrumRun {
        summary: LyapunovSummary {
            cocycle: label,
            integrated,
            n: cfg.n,
            points,
            mean_exponents,
            herman_bound,
            herman_bound_holds,
        },
        series,
    })
}

pub fn run(cfg: &RunConfig, out: &mut RunOutput) -> CliResult<Outcome> {
    let result = compute(cfg)?;
    out.write_csv(
        "series.csv",
        &["theta", "label", "norm", "n", "value"],
        series_rows(&result.series),
    )?;
    out.write_json("lyapunov.json", &result.summary)?;
    if cfg.svg {
        let lines: Vec<(String, Vec<(f64, f64)>)> = result
            .series
            .iter()
            .map(|(t, s)| {
                (
                    format!("{} @ {t:.4}", s.label),
                    s.points.iter().map(|&(n, v)| (n as f64, v)).collect(),
                )
            })
            .collect();
        out.write_text(
            "series.svg",
            &svg::line_plot("convergence of exponent estimates", &lines, true),
        )?;
    }
    let s = &result.summary;
    let formatted: Vec<String> = s.mean_exponents.iter().map(|x| format!("{x:.6}")).collect();
    let mut summary = format!(
        "exponents=[{}] over {} base points at n={}",
        formatted.join(", "),
        s.points.len(),
        s.n
    );
    if let (Some(b), Some(ok)) = (s.herman_bound, s.herman_bound_holds) {
        summary.push_str(&format!(", herman bound {b:.4} holds={ok}"));
    }
    Ok(Outcome {
        summary,
        failures: Vec::new(),
    })
}
