//! `starlike`: expand series, apply the multiplier operators, run the
//! analytic checks and sampled suites, and emit plot data.

mod commands;
mod config;
mod error;
mod source;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::config::{CliConfig, FileConfig, Format, Overrides};
use crate::error::CliError;

#[derive(Debug, Parser)]
#[command(name = "starlike", version, about, propagate_version = true)]
struct Cli {
    /// Truncation order N for generated series.
    #[arg(long, global = true)]
    order: Option<usize>,

    /// Comma-separated grid radii in (0, 1).
    #[arg(long, global = true, value_delimiter = ',')]
    radii: Option<Vec<f64>>,

    /// Equally spaced angles per radius.
    #[arg(long, global = true)]
    angles: Option<usize>,

    #[arg(long, global = true, value_enum)]
    format: Option<Format>,

    /// Seed for sampled suites.
    #[arg(long, global = true)]
    seed: Option<u64>,

    /// Write output here instead of standard output.
    #[arg(long, global = true)]
    out: Option<PathBuf>,

    /// Accept operator parameters with n - 1 < sigma < n + 1.
    #[arg(long, global = true)]
    legacy: bool,

    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Clone, Default, Args)]
pub struct SpecArgs {
    #[arg(long)]
    pub sigma: Option<f64>,
    #[arg(long)]
    pub n: Option<usize>,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Print the coefficients of a series.
    Expand {
        source: String,
        #[command(flatten)]
        spec: SpecArgs,
    },
    /// Apply L, its inverse l, or the Bernardi transform.
    Apply {
        #[arg(value_enum)]
        op: ApplyOp,
        /// Defaults to standard input.
        #[arg(default_value = source::STDIN)]
        source: String,
        #[command(flatten)]
        spec: SpecArgs,
        #[arg(long)]
        gamma: Option<f64>,
    },
    /// Run one analytic check and print its report.
    Check {
        #[arg(value_enum)]
        kind: CheckArg,
        /// The function under test; `h` for lemma3, `q` for ode.
        source: Option<String>,
        #[command(flatten)]
        spec: SpecArgs,
        #[arg(long)]
        eta: Option<f64>,
        #[arg(long)]
        mu: Option<f64>,
        /// The `h` series for the ode check.
        #[arg(long)]
        h: Option<String>,
    },
    /// Run seeded sampled suites.
    Suite {
        #[arg(value_enum)]
        name: SuiteArg,
        #[arg(long)]
        cases: Option<usize>,
        #[command(flatten)]
        spec: SpecArgs,
    },
    /// Emit `r,theta,re,im` rows of a ratio on the grid.
    PlotData {
        source: String,
        #[arg(value_enum)]
        expr: PlotExpr,
        #[command(flatten)]
        spec: SpecArgs,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ApplyOp {
    #[value(name = "L")]
    Forward,
    #[value(name = "l")]
    Inverse,
    Bernardi,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum CheckArg {
    Starlike,
    Class,
    Univalence,
    Lemma3,
    Bounds,
    Ode,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum SuiteArg {
    Inclusion,
    BernardiClosure,
    Examples,
    All,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum PlotExpr {
    StarlikeRatio,
    ClassRatio,
    UnivalenceRatio,
}

fn run(cli: Cli) -> Result<i32, CliError> {
    let flags = Overrides {
        order: cli.order,
        radii: cli.radii,
        angles: cli.angles,
        format: cli.format,
        seed: cli.seed,
        out: cli.out,
        legacy: cli.legacy,
    };
    let config = CliConfig::resolve(FileConfig::from_env()?, flags)?;
    match cli.command {
        Command::Expand { source, spec } => commands::expand(&config, &source, &spec),
        Command::Apply {
            op,
            source,
            spec,
            gamma,
        } => commands::apply(&config, op, &source, &spec, gamma),
        Command::Check {
            kind,
            source,
            spec,
            eta,
            mu,
            h,
        } => {
            let params = commands::CheckParams {
                source,
                spec,
                eta,
                mu,
                h,
            };
            commands::check(&config, kind, &params)
        }
        Command::Suite { name, cases, spec } => commands::suite(&config, name, cases, &spec),
        Command::PlotData { source, expr, spec } => {
            commands::plot_data(&config, &source, expr, &spec)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let code = match run(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    };
    ExitCode::from(code as u8)
}
