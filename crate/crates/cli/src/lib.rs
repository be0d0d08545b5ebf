//! Command-line front end.
//!
//! Every subcommand reads JSON documents, prints a plain-text summary and,
//! with `--out`, writes its full result as JSON. Exit codes: 0 on success,
//! 1 on invalid input, 2 when an oracle breaks the query protocol.

pub mod commands;
pub mod formats;
mod table;

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;

use clap::{Parser, Subcommand};

use crate::commands::Report;
use crate::formats::{CliError, CliResult};

#[derive(Debug, Parser)]
#[command(name = "dseu", version, about = "Discounted subjective expected utility over state-time acts")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    /// Write the JSON result to this file.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    /// Print the JSON result instead of the summary.
    #[arg(long, global = true)]
    pub json: bool,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Value of an act, state-first and time-first.
    Eval { model: PathBuf, act: PathBuf },
    /// Time equivalent of an act, in closed form and by bisection.
    Equiv {
        model: PathBuf,
        act: PathBuf,
        /// Good outcome (default: best under the model).
        #[arg(long)]
        x: Option<String>,
        /// Bad outcome (default: worst under the model).
        #[arg(long)]
        y: Option<String>,
        #[arg(long, default_value_t = 1e-9)]
        tol: f64,
    },
    /// Recover λ and μ from an oracle by indifference queries.
    Elicit {
        oracle: PathBuf,
        #[arg(long)]
        x: Option<String>,
        #[arg(long)]
        y: Option<String>,
        #[arg(long, default_value_t = 1e-9)]
        tol: f64,
    },
    /// Test an oracle against the axioms.
    Audit {
        oracle: PathBuf,
        #[arg(long, default_value_t = 500, value_parser = clap::value_parser!(u32).range(1..=1_000_000))]
        samples: u32,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        #[arg(long, default_value_t = 64, value_parser = clap::value_parser!(u32).range(1..=100_000))]
        horizon_max: u32,
    },
    /// Sandwich an act, or one state's profile, between two-outcome acts.
    Bracket {
        model: PathBuf,
        act: PathBuf,
        /// Number of utility bins.
        #[arg(long, default_value_t = 8, value_parser = clap::value_parser!(u32).range(1..=4096))]
        n: u32,
        /// Bracket the profile at this state instead of the whole act.
        #[arg(long)]
        state: Option<String>,
    },
    /// Reduce an act to state-wise lotteries.
    Aa {
        model: PathBuf,
        act: PathBuf,
        /// Lottery act to realize on [0, t) for the independence check.
        #[arg(long, requires = "t")]
        lottery: Option<PathBuf>,
        #[arg(long, requires = "lottery")]
        t: Option<f64>,
    },
    /// Three-event calibration walkthrough.
    #[command(name = "demo-section2")]
    DemoSection2 {
        #[arg(long, default_value_t = 1.0)]
        lambda: f64,
        #[arg(long = "muE", default_value_t = 0.3)]
        mu_e: f64,
        #[arg(long = "muF", default_value_t = 0.2)]
        mu_f: f64,
    },
    /// Two-colour urn against an ambiguity-averse agent.
    #[command(name = "demo-ellsberg")]
    DemoEllsberg {
        #[arg(long, default_value_t = 1.0)]
        lambda: f64,
        #[arg(long, default_value_t = 0.1)]
        epsilon: f64,
        #[arg(long, default_value_t = 1e-9)]
        tol: f64,
    },
}

fn execute(cli: &Cli) -> CliResult<Report> {
    match &cli.command {
        Command::Eval { model, act } => commands::eval(model, act),
        Command::Equiv { model, act, x, y, tol } => commands::equiv(model, act, x.as_deref(), y.as_deref(), *tol),
        Command::Elicit { oracle, x, y, tol } => commands::elicit(oracle, x.as_deref(), y.as_deref(), *tol),
        Command::Audit { oracle, samples, seed, horizon_max } => {
            commands::audit(oracle, *samples as usize, *seed, *horizon_max)
        }
        Command::Bracket { model, act, n, state } => commands::bracket(model, act, *n as usize, state.as_deref()),
        Command::Aa { model, act, lottery, t } => commands::aa(model, act, lottery.as_deref().zip(*t)),
        Command::DemoSection2 { lambda, mu_e, mu_f } => commands::demo_section2(*lambda, *mu_e, *mu_f),
        Command::DemoEllsberg { lambda, epsilon, tol } => commands::demo_ellsberg(*lambda, *epsilon, *tol),
    }
}

fn emit(cli: &Cli, report: &Report, stdout: &mut dyn Write) -> CliResult<()> {
    let text = serde_json::to_string_pretty(&report.json).expect("values serialize") + "\n";
    if let Some(path) = &cli.out {
        std::fs::write(path, &text).map_err(|e| CliError::Validation(format!("{}: {e}", path.display())))?;
    }
    let shown = if cli.json { &text } else { &report.summary };
    stdout
        .write_all(shown.as_bytes())
        .map_err(|e| CliError::Validation(format!("stdout: {e}")))
}

/// Runs the command line and returns the exit code.
pub fn run<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    run_with(argv, &mut std::io::stdout(), &mut std::io::stderr())
}

/// [`run`] with explicit output streams.
pub fn run_with<I, T>(argv: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            let text = e.render().to_string();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    let _ = stdout.write_all(text.as_bytes());
                    0
                }
                _ => {
                    let _ = stderr.write_all(text.as_bytes());
                    1
                }
            };
        }
    };
    match execute(&cli).and_then(|r| emit(&cli, &r, stdout)) {
        Ok(()) => 0,
        Err(e) => {
            let _ = writeln!(stderr, "dseu: {e}");
            e.exit_code()
        }
    }
}
