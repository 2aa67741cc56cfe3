//! `chaoskit` command-line tool: spectra, statistics, resonance fits and
//! random-matrix ensembles from key-value configuration files.
//!
//! Exit codes: 0 success, 2 configuration error, 3 data error, 4 numerical
//! failure.

mod commands;
mod error;
mod io;
mod kv;
mod manifest;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use commands::{eigen, field, fit, missing, rmt, stats};

#[derive(Debug, Parser)]
#[command(name = "chaoskit", version, about = "Spectral statistics and scattering analysis of microwave billiards")]
struct Cli {
    /// Output directory.
    #[arg(long, global = true, env = "CHAOSKIT_OUT_DIR", default_value = "chaoskit-out")]
    out: PathBuf,
    /// Print informational messages as well as warnings.
    #[arg(short, long, global = true)]
    verbose: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Eigenvalues of the sector billiard, optionally with a point scatterer.
    Eigen(eigen::EigenArgs),
    /// Spacing distribution, number variance and rigidity of spectra.
    Stats(stats::StatsArgs),
    /// Breit-Wigner fits of measured traces and strength statistics.
    Fit(fit::FitArgs),
    /// Random-matrix scattering ensemble.
    Rmt(rmt::RmtArgs),
    /// Scan a spectrum for missing levels.
    Missing(missing::MissingArgs),
    /// Field intensity from perturbation shifts, or an exact sector mode.
    Field(field::FieldArgs),
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let level = if cli.verbose { "info" } else { "warn" };
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or(level)).init();
    let result = match &cli.command {
        Command::Eigen(a) => eigen::run(a, &cli.out),
        Command::Stats(a) => stats::run(a, &cli.out),
        Command::Fit(a) => fit::run(a, &cli.out),
        Command::Rmt(a) => rmt::run(a, &cli.out),
        Command::Missing(a) => missing::run(a, &cli.out),
        Command::Field(a) => field::run(a, &cli.out),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("chaoskit: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
