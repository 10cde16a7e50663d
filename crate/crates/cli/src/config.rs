//! Command-line flags, the optional config file and their resolution into
//! a [`RunConfig`].

use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use serde::{Deserialize, Serialize};

use crate::error::{CliError, CliResult};

/// Environment variable naming the default output root.
pub const OUT_ENV: &str = "COCYCLE_FORGE_OUT";

#[derive(Debug, Parser)]
#[command(
    name = "cocycle-forge",
    version,
    about = "SL(d) cocycles over circle rotations and their continuous-time extensions"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    #[command(flatten)]
    pub options: Options,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Subcommand)]
pub enum Command {
    /// Homotopy class of the generator loop.
    Classify,
    /// Build a continuous-time extension and verify it.
    Extend,
    /// Lyapunov exponent estimates with convergence series.
    Lyapunov,
    /// Occupancy of a projective orbit on S¹ × P¹.
    ProjectiveOrbit,
    /// End-to-end Herman bundle: classify, extend, verify, spectra.
    HermanDemo,
}

impl Command {
    pub fn name(self) -> &'static str {
        match self {
            Command::Classify => "classify",
            Command::Extend => "extend",
            Command::Lyapunov => "lyapunov",
            Command::ProjectiveOrbit => "projective-orbit",
            Command::HermanDemo => "herman-demo",
        }
    }

    /// `(n, grid)` defaults.
    fn defaults(self) -> (u64, usize) {
        match self {
            Command::Classify => (0, 4096),
            Command::Extend => (10, 64),
            Command::Lyapunov => (100_000, 4),
            Command::ProjectiveOrbit => (1_000_000, 100),
            Command::HermanDemo => (10_000, 64),
        }
    }
}

#[derive(Debug, Clone, Default, Args)]
pub struct Options {
    /// Cocycle family, e.g. herman, identity, herman-embedded-halfspeed, rotation:2.
    #[arg(long, global = true)]
    pub cocycle: Option<String>,
    /// Hyperbolicity parameter λ > 0.
    #[arg(long, global = true)]
    pub lambda: Option<f64>,
    /// Rotation number: "golden", "p/q" or a decimal.
    #[arg(long, global = true)]
    pub alpha: Option<String>,
    /// Time horizon (steps, orbit length or largest |n|, per command).
    #[arg(long, global = true)]
    pub n: Option<u64>,
    /// Grid size (θ-grid, base points, histogram bins or loop samples).
    #[arg(long, global = true)]
    pub grid: Option<usize>,
    /// RK4 step; must divide 1.
    #[arg(long, global = true)]
    pub step: Option<f64>,
    /// Seed for sampled base points and orbit starts.
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    /// Worker threads; results do not depend on it.
    #[arg(long, global = true)]
    pub threads: Option<usize>,
    /// Output directory for this run.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    /// TOML file with the same keys as the flags; flags take precedence.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    /// Extension variant: natural, half-speed or embedding.
    #[arg(long, global = true)]
    pub variant: Option<String>,
    /// Also emit SVG plots.
    #[arg(long, global = true)]
    pub svg: bool,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct FileConfig {
    cocycle: Option<String>,
    lambda: Option<f64>,
    alpha: Option<String>,
    n: Option<u64>,
    grid: Option<usize>,
    step: Option<f64>,
    seed: Option<u64>,
    threads: Option<usize>,
    out: Option<PathBuf>,
    variant: Option<String>,
    svg: Option<bool>,
}

/// Fully resolved configuration; persisted with every run.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunConfig {
    pub command: String,
    pub cocycle: String,
    pub lambda: f64,
    pub alpha: String,
    pub n: u64,
    pub grid: usize,
    pub step: f64,
    pub seed: u64,
    pub threads: usize,
    pub out: PathBuf,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub variant: Option<String>,
    pub svg: bool,
}

impl RunConfig {
    /// Flags override the config file, which overrides per-command defaults.
    pub fn resolve(command: Command, flags: &Options) -> CliResult<Self> {
        let file = match &flags.config {
            Some(path) => read_file_config(path)?,
            None => FileConfig::default(),
        };
        let (n, grid) = command.defaults();
        let default_cocycle = "herman";
        let out = flags
            .out
            .clone()
            .or(file.out)
            .unwrap_or_else(|| default_out_root().join(command.name()));
        let threads = flags
            .threads
            .or(file.threads)
            .unwrap_or_else(|| std::thread::available_parallelism().map_or(1, |n| n.get()));
        let cfg = RunConfig {
            command: command.name().to_string(),
            cocycle: flags
                .cocycle
                .clone()
                .or(file.cocycle)
                .unwrap_or_else(|| default_cocycle.into()),
            lambda: flags.lambda.or(file.lambda).unwrap_or(2.0),
            alpha: flags.alpha.clone().or(file.alpha).unwrap_or_else(|| "golden".into()),
            n: flags.n.or(file.n).unwrap_or(n),
            grid: flags.grid.or(file.grid).unwrap_or(grid),
            step: flags.step.or(file.step).unwrap_or(1e-3),
            seed: flags.seed.or(file.seed).unwrap_or(0),
            threads,
            out,
            variant: flags.variant.clone().or(file.variant),
            svg: flags.svg || file.svg.unwrap_or(false),
        };
        cfg.validate()?;
        Ok(cfg)
    }

    fn validate(&self) -> CliResult<()> {
        if !(self.lambda > 0.0 && self.lambda.is_finite()) {
            return Err(CliError::Config(format!(
                "--lambda must be positive, got {}",
                self.lambda
            )));
        }
        if self.threads == 0 {
            return Err(CliError::Config("--threads must be at least 1".into()));
        }
        if self.grid == 0 {
            return Err(CliError::Config("--grid must be at least 1".into()));
        }
        if self.command != "classify" && self.n == 0 {
            return Err(CliError::Config("--n must be at least 1".into()));
        }
        Ok(())
    }

    pub fn to_toml(&self) -> String {
        toml::to_string(self).expect("run config serializes")
    }
}

fn default_out_root() -> PathBuf {
    std::env::var_os(OUT_ENV).map_or_else(|| PathBuf::from("cocycle-forge-out"), PathBuf::from)
}

fn read_file_config(path: &Path) -> CliResult<FileConfig> {
    let text = std::fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
    toml::from_str(&text).map_err(|e| CliError::Config(format!("{}: {e}", path.display())))
}
