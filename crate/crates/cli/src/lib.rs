//! Command-line front end: argument parsing, config merging, the
//! subcommands and report rendering.

pub mod commands;
pub mod config;
pub mod output;
pub mod parse;

use std::path::PathBuf;

use clap::{ArgAction, Args, Parser, Subcommand};

use config::{Format, RunConfig, Settings};

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_NUMERIC: i32 = 3;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("{0}")]
    Numeric(String),
    #[error("i/o error: {0}")]
    Io(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            Self::Usage(_) => EXIT_USAGE,
            Self::Numeric(_) | Self::Io(_) => EXIT_NUMERIC,
        }
    }
}

impl From<intellistate::Error> for CliError {
    fn from(e: intellistate::Error) -> Self {
        match e {
            intellistate::Error::InvalidInput(_) | intellistate::Error::DimensionMismatch { .. } => {
                CliError::Usage(e.to_string())
            }
            other => CliError::Numeric(other.to_string()),
        }
    }
}

#[derive(Debug, Parser)]
#[command(name = "intellistate", version, about = "Ordinary and generalized intelligent states for su(2) and su(1,1)")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,

    /// More log output on stderr (-v warnings, -vv info)
    #[arg(short, long, action = ArgAction::Count, global = true)]
    pub verbose: u8,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Solve (A + i lambda B)|psi> = beta|psi> and report moments
    States(CommandArgs),
    /// Invert Lambda into (lambda, phi) and check the round trip
    Map(CommandArgs),
    /// Transport OIS branches to each Lambda and check both theorem directions
    Verify(CommandArgs),
    /// One row per Lambda grid point, for plotting
    Sweep(CommandArgs),
    /// Build an optical element unitary and its leakage report
    Bosonic(CommandArgs),
}

#[derive(Debug, Args)]
pub struct CommandArgs {
    /// JSON file with the same keys as the flags; flags take precedence
    #[arg(long)]
    pub config: Option<PathBuf>,

    #[command(flatten)]
    pub settings: Settings,
}

impl Command {
    fn parts(self) -> (&'static str, CommandArgs) {
        match self {
            Self::States(a) => ("states", a),
            Self::Map(a) => ("map", a),
            Self::Verify(a) => ("verify", a),
            Self::Sweep(a) => ("sweep", a),
            Self::Bosonic(a) => ("bosonic", a),
        }
    }
}

/// Runs one subcommand to completion, writing its report. Returns the exit
/// code.
pub fn run(command: Command) -> Result<i32, CliError> {
    let (name, args) = command.parts();
    let default_format = if name == "sweep" { Format::Csv } else { Format::Json };
    let cfg = RunConfig::resolve(args.settings, args.config.as_deref(), default_format)?;
    let report = match name {
        "states" => commands::states(&cfg)?,
        "map" => commands::map(&cfg)?,
        "verify" => commands::verify(&cfg)?,
        "sweep" => commands::sweep(&cfg)?,
        _ => commands::bosonic(&cfg)?,
    };
    let text = match cfg.format {
        Format::Json => output::render_json(cfg.echo(), &report.results, &report.summary),
        Format::Csv => output::render_csv(&report.results, &report.header)?,
    };
    output::emit(&text, cfg.out.as_deref())?;
    let status = if report.passed { "passed" } else { "FAILED" };
    eprintln!("{name}: {} rows, {status}", report.results.len());
    Ok(if report.passed { EXIT_OK } else { EXIT_NUMERIC })
}
