use cocycle_core::homotopy::{AngleLift, QuatLift};
use cocycle_core::{classify, DiscreteCocycle, HomotopyClass};
use serde::Serialize;

use super::{cocycle, Outcome};
use crate::config::RunConfig;
use crate::error::CliResult;
use crate::output::{Cell, RunOutput};

#[derive(Debug, Clone, Serialize)]
pub struct ClassifyReport {
    pub cocycle: String,
    pub dim: usize,
    pub class: HomotopyClass,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub winding: Option<i64>,
    pub nullhomotopic: bool,
    /// Samples used after automatic refinement.
    pub resolution: usize,
    /// Quaternion lift closure gap (SL(3) only).
    #[serde(skip_serializing_if = "Option::is_none")]
    pub closure_gap: Option<f64>,
}

impl ClassifyReport {
    pub fn verdict(&self) -> String {
        match self.winding {
            Some(w) => format!("winding={w}, nullhomotopic={}", self.nullhomotopic),
            None => format!(
                "class={}, nullhomotopic={}",
                if self.nullhomotopic { "trivial" } else { "nontrivial" },
                self.nullhomotopic
            ),
        }
    }
}

pub fn classify_cocycle(a: &DiscreteCocycle, resolution: usize) -> CliResult<(ClassifyReport, Vec<Vec<Cell>>)> {
    let l = a.as_loop().with_resolution(resolution)?;
    let class = classify(&l)?;
    let mut rows = Vec::new();
    let report = match a.dim() {
        2 => {
            let lift = AngleLift::new(&l)?;
            let n = lift.resolution();
            for i in 0..=n {
                let t = i as f64 / n as f64;
                rows.push(vec![Cell::Real(t), Cell::Real(lift.at(t))]);
            }
            ClassifyReport {
                cocycle: a.label(),
                dim: 2,
                class,
                winding: Some(lift.winding()),
                nullhomotopic: class.is_trivial(),
                resolution: n,
                closure_gap: None,
            }
        }
        _ => {
            let lift = QuatLift::new(&l)?;
            let n = lift.resolution();
            for (i, q) in lift.samples().enumerate() {
                let mut row = vec![Cell::Real(i as f64 / n as f64)];
                row.extend(q.to_array().map(Cell::Real));
                rows.push(row);
            }
            ClassifyReport {
                cocycle: a.label(),
                dim: 3,
                class,
                winding: None,
                nullhomotopic: class.is_trivial(),
                resolution: n,
                closure_gap: Some(lift.closure_gap()),
            }
        }
    };
    Ok((report, rows))
}

pub fn run(cfg: &RunConfig, out: &mut RunOutput) -> CliResult<Outcome> {
    let a = cocycle(cfg)?;
    let (report, rows) = classify_cocycle(&a, cfg.grid)?;
    if report.dim == 2 {
        out.write_csv("lift.csv", &["theta", "angle"], rows)?;
    } else {
        out.write_csv("lift.csv", &["theta", "w", "x", "y", "z"], rows)?;
    }
    out.write_json("classify.json", &report)?;
    Ok(Outcome {
        summary: report.verdict(),
        failures: Vec::new(),
    })
}
