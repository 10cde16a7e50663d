use cocycle_core::spectral::{orbit_occupancy, ProjectivePoint};
use serde::Serialize;

use super::{cocycle, seeded_thetas, Outcome};
use crate::config::RunConfig;
use crate::error::CliResult;
use crate::output::{Cell, RunOutput};
use crate::svg;

#[derive(Debug, Clone, Serialize)]
struct OccupancyReport {
    cocycle: String,
    start: ProjectivePoint,
    steps: u64,
    bins: usize,
    occupied: usize,
    coverage: f64,
}

pub fn run(cfg: &RunConfig, out: &mut RunOutput) -> CliResult<Outcome> {
    let a = cocycle(cfg)?;
    let s = seeded_thetas(cfg.seed, 2);
    let angle = std::f64::consts::PI * s[1];
    let start = ProjectivePoint::new(s[0], [angle.cos(), angle.sin()])?;
    let occ = orbit_occupancy(&a, start, cfg.n, cfg.grid)?;
    let rows = occ
        .counts
        .iter()
        .enumerate()
        .map(|(k, &c)| vec![Cell::from(k / occ.bins), Cell::from(k % occ.bins), Cell::from(c)]);
    out.write_csv("occupancy.csv", &["theta_bin", "angle_bin", "count"], rows)?;
    let occupied = occ.counts.iter().filter(|&&c| c > 0).count();
    let report = OccupancyReport {
        cocycle: a.label(),
        start,
        steps: occ.steps,
        bins: occ.bins,
        occupied,
        coverage: occ.coverage,
    };
    out.write_json("occupancy.json", &report)?;
    if cfg.svg {
        out.write_text(
            "occupancy.svg",
            &svg::heatmap("projective orbit occupancy", occ.bins, &occ.counts),
        )?;
    }
    Ok(Outcome {
        summary: format!("coverage={:.4} ({occupied}/{} cells)", occ.coverage, occ.counts.len()),
        failures: Vec::new(),
    })
}
