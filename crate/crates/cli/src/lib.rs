//! Library side of the `dce` command: argument definitions, configuration
//! merging, the operations and their output formats.

pub mod commands;
pub mod config;
pub mod output;
pub mod units;

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};
use thiserror::Error;

pub use commands::{run, Outcome, Report};
pub use config::RunConfig;

use config::{Format, Formula, GeometryKind, GridKind, Operation};

#[derive(Debug, Error)]
pub enum CliError {
    #[error(transparent)]
    Unit(#[from] units::UnitError),
    #[error("{0}")]
    Usage(String),
    #[error(transparent)]
    Core(#[from] dce_core::Error),
    #[error("output: {0}")]
    Output(String),
}

impl CliError {
    /// 2 for bad input, 4 for numerical failures, 1 for output errors.
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Unit(_) | CliError::Usage(_) => 2,
            CliError::Core(dce_core::Error::InvalidParameter { .. }) => 2,
            CliError::Core(_) => 4,
            CliError::Output(_) => 1,
        }
    }
}

/// Environment variable bounding sweep concurrency.
pub const THREADS_ENV: &str = "DCE_NUM_THREADS";

/// Parse a `DCE_NUM_THREADS` value; absent means the rayon default.
pub fn parse_threads(value: Option<&str>) -> Result<Option<usize>, CliError> {
    match value.map(str::trim) {
        None | Some("") => Ok(None),
        Some(s) => match s.parse::<usize>() {
            Ok(n) if n > 0 => Ok(Some(n)),
            _ => Err(CliError::Usage(format!(
                "{THREADS_ENV} must be a positive integer, got `{s}`"
            ))),
        },
    }
}

#[derive(Debug, Parser)]
#[command(
    name = "dce",
    version,
    about = "Photon pairs from a vibrating coaxial waveguide and from parallel plates"
)]
pub struct Cli {
    /// Output format.
    #[arg(long, global = true, value_enum)]
    pub format: Option<Format>,
    /// Write output to FILE instead of standard output.
    #[arg(long, global = true, value_name = "FILE")]
    pub out: Option<PathBuf>,
    /// JSON run configuration; flags override its values.
    #[arg(long, global = true, value_name = "FILE")]
    pub config: Option<PathBuf>,
    #[command(subcommand)]
    pub command: Option<Command>,
}

#[derive(Debug, Clone, Default, Args)]
pub struct ParamArgs {
    /// Gap between the conductors, or plate separation (e.g. 1um).
    #[arg(long)]
    pub a: Option<String>,
    /// Inner conductor radius (e.g. 1cm).
    #[arg(long)]
    pub b: Option<String>,
    /// Guide length (e.g. 3cm).
    #[arg(long = "L", value_name = "L")]
    pub length: Option<String>,
    /// Plate area (e.g. 9cm2).
    #[arg(long = "A", value_name = "A")]
    pub area: Option<String>,
    /// Drive frequency, Hz-family (times 2 pi) or rad/s.
    #[arg(long)]
    pub f0: Option<String>,
    /// Radial wall amplitude (coax).
    #[arg(long)]
    pub drho0: Option<String>,
    /// Plate displacement amplitude.
    #[arg(long)]
    pub dz0: Option<String>,
    /// Peak wall speed, e.g. 30m/s or 1e-7c; the amplitude is v0/omega0.
    #[arg(long)]
    pub v0: Option<String>,
}

#[derive(Debug, Clone, Default, Args)]
pub struct CutoffArgs {
    /// Highest azimuthal order in the TE/TM cutoff search.
    #[arg(long)]
    pub m_max: Option<u32>,
    /// Radial zeros per (family, m).
    #[arg(long)]
    pub p_max: Option<u32>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Pair emission rate.
    Rate {
        #[arg(value_enum)]
        geometry: Option<GeometryKind>,
        #[command(flatten)]
        params: ParamArgs,
        /// Coax closed form.
        #[arg(long, value_enum)]
        formula: Option<Formula>,
        #[command(flatten)]
        cutoff: CutoffArgs,
    },
    /// TE/TM cutoff table of the coax cross-section.
    Cutoff {
        #[command(flatten)]
        params: ParamArgs,
        #[command(flatten)]
        cutoff: CutoffArgs,
        /// Compare this drive frequency with the lowest cutoff.
        #[arg(long)]
        check_f0: Option<String>,
    },
    /// Finite-time emission spectrum of the coax.
    Spectrum {
        #[command(flatten)]
        params: ParamArgs,
        #[command(flatten)]
        cutoff: CutoffArgs,
        /// Drive duration (e.g. 16ns).
        #[arg(long)]
        dt: Option<String>,
        /// Drive duration as omega0 * dt.
        #[arg(long)]
        w0dt: Option<f64>,
        #[arg(long, value_enum)]
        grid: Option<GridKind>,
        /// Upper end of the grid in units of omega0.
        #[arg(long)]
        omega_max_factor: Option<f64>,
        /// Uniform grid lower bound.
        #[arg(long)]
        omega_min: Option<String>,
        /// Uniform grid upper bound.
        #[arg(long)]
        omega_max: Option<String>,
        /// Uniform grid size.
        #[arg(long)]
        points: Option<usize>,
    },
    /// Rate over a parameter grid with a log-log slope fit.
    Sweep {
        #[arg(value_enum)]
        geometry: Option<GeometryKind>,
        /// name:min:max:count:lin|log, repeatable (e.g. f0:1GHz:10GHz:11:log).
        #[arg(long = "axis", value_name = "SPEC")]
        axes: Vec<String>,
        #[command(flatten)]
        params: ParamArgs,
        #[arg(long, value_enum)]
        formula: Option<Formula>,
        #[command(flatten)]
        cutoff: CutoffArgs,
    },
    /// Regime checks (TEM-only, perturbative, nonrelativistic, long guide).
    Validate {
        #[arg(value_enum)]
        geometry: Option<GeometryKind>,
        #[command(flatten)]
        params: ParamArgs,
        #[command(flatten)]
        cutoff: CutoffArgs,
    },
}

fn with_params(mut cfg: RunConfig, p: ParamArgs, c: CutoffArgs) -> RunConfig {
    cfg.a = p.a;
    cfg.b = p.b;
    cfg.length = p.length;
    cfg.area = p.area;
    cfg.f0 = p.f0;
    cfg.drho0 = p.drho0;
    cfg.dz0 = p.dz0;
    cfg.v0 = p.v0;
    cfg.m_max = c.m_max;
    cfg.p_max = c.p_max;
    cfg
}

impl Command {
    pub fn into_config(self) -> RunConfig {
        match self {
            Command::Rate {
                geometry,
                params,
                formula,
                cutoff,
            } => with_params(
                RunConfig {
                    operation: Some(Operation::Rate),
                    geometry,
                    formula,
                    ..RunConfig::default()
                },
                params,
                cutoff,
            ),
            Command::Cutoff {
                params,
                cutoff,
                check_f0,
            } => with_params(
                RunConfig {
                    operation: Some(Operation::Cutoff),
                    check_f0,
                    ..RunConfig::default()
                },
                params,
                cutoff,
            ),
            Command::Spectrum {
                params,
                cutoff,
                dt,
                w0dt,
                grid,
                omega_max_factor,
                omega_min,
                omega_max,
                points,
            } => with_params(
                RunConfig {
                    operation: Some(Operation::Spectrum),
                    dt,
                    w0dt,
                    grid,
                    omega_max_factor,
                    omega_min,
                    omega_max,
                    points,
                    ..RunConfig::default()
                },
                params,
                cutoff,
            ),
            Command::Sweep {
                geometry,
                axes,
                params,
                formula,
                cutoff,
            } => with_params(
                RunConfig {
                    operation: Some(Operation::Sweep),
                    geometry,
                    axes,
                    formula,
                    ..RunConfig::default()
                },
                params,
                cutoff,
            ),
            Command::Validate {
                geometry,
                params,
                cutoff,
            } => with_params(
                RunConfig {
                    operation: Some(Operation::Validate),
                    geometry,
                    ..RunConfig::default()
                },
                params,
                cutoff,
            ),
        }
    }
}

impl Cli {
    /// File configuration overlaid with the command line.
    pub fn resolve(self) -> Result<RunConfig, CliError> {
        let file = match &self.config {
            Some(path) => RunConfig::from_file(path)?,
            None => RunConfig::default(),
        };
        let mut flags = self.command.map(Command::into_config).unwrap_or_default();
        flags.format = self.format;
        Ok(file.overlay(flags))
    }
}

/// Run a resolved configuration and render it in the requested format.
pub fn execute(cfg: &RunConfig, threads: Option<usize>) -> Result<(String, Report), CliError> {
    let report = run(cfg, threads)?;
    let text = output::render(&report.records, &report.table, cfg.format.unwrap_or_default())?;
    Ok((text, report))
}
