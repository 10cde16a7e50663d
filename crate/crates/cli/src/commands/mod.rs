//! The five subcommands. Each writes into a [`RunOutput`] and returns an
//! [`Outcome`]; tolerance breaches are reported as failures rather than
//! errors so that all artifacts are still written.

mod classify;
mod demo;
mod extend;
mod lyapunov;
mod projective;

use cocycle_core::{CircleRotation, DiscreteCocycle, ExtensionVariant, IntegratorConfig};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::config::{Command, RunConfig};
use crate::error::{CliError, CliResult};
use crate::family::{build_cocycle, parse_alpha};
use crate::output::RunOutput;

pub use classify::classify_cocycle;

/// Result of a command body.
#[derive(Debug, Default)]
pub struct Outcome {
    /// Printed to stdout.
    pub summary: String,
    pub failures: Vec<String>,
}

/// Named pass/fail check recorded in reports.
#[derive(Debug, Clone, Serialize)]
pub struct Gate {
    pub name: String,
    pub value: f64,
    pub threshold: f64,
    pub passed: bool,
}

impl Gate {
    pub fn at_most(name: &str, value: f64, threshold: f64) -> Self {
        Gate {
            name: name.into(),
            value,
            threshold,
            passed: value <= threshold,
        }
    }

    pub fn at_least(name: &str, value: f64, threshold: f64) -> Self {
        Gate {
            name: name.into(),
            value,
            threshold,
            passed: value >= threshold,
        }
    }

    pub fn flag(name: &str, ok: bool) -> Self {
        Gate {
            name: name.into(),
            value: ok as u8 as f64,
            threshold: 1.0,
            passed: ok,
        }
    }
}

pub(crate) fn failures(gates: &[Gate]) -> Vec<String> {
    gates
        .iter()
        .filter(|g| !g.passed)
        .map(|g| format!("{} = {:e} (threshold {:e})", g.name, g.value, g.threshold))
        .collect()
}

pub fn dispatch(command: Command, cfg: &RunConfig, out: &mut RunOutput) -> CliResult<Outcome> {
    match command {
        Command::Classify => classify::run(cfg, out),
        Command::Extend => extend::run(cfg, out),
        Command::Lyapunov => lyapunov::run(cfg, out),
        Command::ProjectiveOrbit => projective::run(cfg, out),
        Command::HermanDemo => demo::run(cfg, out),
    }
}

pub(crate) fn rotation(cfg: &RunConfig) -> CliResult<CircleRotation> {
    let (rot, warning) = parse_alpha(&cfg.alpha)?;
    if let Some(w) = warning {
        eprintln!("warning: {w}");
    }
    Ok(rot)
}

pub(crate) fn cocycle(cfg: &RunConfig) -> CliResult<DiscreteCocycle> {
    build_cocycle(&cfg.cocycle, cfg.lambda, rotation(cfg)?)
}

pub(crate) fn integrator(cfg: &RunConfig) -> CliResult<IntegratorConfig> {
    Ok(IntegratorConfig::with_step(cfg.step)?)
}

pub(crate) fn parse_variant(s: &str) -> CliResult<ExtensionVariant> {
    match s {
        "natural" => Ok(ExtensionVariant::Natural),
        "half-speed" => Ok(ExtensionVariant::HalfSpeed),
        "embedding" => Ok(ExtensionVariant::Embedding),
        other => Err(CliError::Config(format!(
            "unknown variant '{other}'; expected natural, half-speed or embedding"
        ))),
    }
}

pub(crate) fn build_extension(
    a: &DiscreteCocycle,
    variant: ExtensionVariant,
    config: IntegratorConfig,
) -> CliResult<cocycle_core::Extension> {
    use cocycle_core::extension::{extend_half_speed_with, extend_sl2_via_embedding_with, natural_extension_with};
    let built = match variant {
        ExtensionVariant::Natural => natural_extension_with(a, config),
        ExtensionVariant::HalfSpeed => extend_half_speed_with(a, config),
        ExtensionVariant::Embedding => extend_sl2_via_embedding_with(a, config),
    };
    built.map_err(|e| match e {
        cocycle_core::Error::NotNullhomotopic(_) => CliError::Obstruction(format!(
            "{e}. A continuous-time extension whose time-n maps on the base fiber equal Aⁿ \
             exists exactly when the generator loop is nullhomotopic. Try --variant embedding \
             for SL(2) or --variant half-speed for SL(3)."
        )),
        e => e.into(),
    })
}

/// `k` base points drawn from the run seed.
pub(crate) fn seeded_thetas(seed: u64, k: usize) -> Vec<f64> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..k).map(|_| rng.random_range(0.0..1.0)).collect()
}
