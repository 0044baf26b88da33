//! `wastesense` command-line front end.
//!
//! Exit codes: 0 on success, 1 on data errors (unparseable sessions, failed
//! fits, unreadable files), 2 on usage errors.

mod chart;
mod commands;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use wastesense::stats::DEFAULT_STABILITY_THRESHOLD_DBM;

#[derive(Parser)]
#[command(name = "wastesense", version, about = "Estimate food waste weight from RSSI attenuation")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Print free-space path loss and expected RSSI for a link budget.
    Linkbudget(LinkbudgetArgs),
    /// Summarize session logs.
    Stats(StatsArgs),
    /// Fit a calibration profile from weight-labelled session logs.
    Calibrate(CalibrateArgs),
    /// Estimate the waste weight behind a session log.
    Estimate(EstimateArgs),
    /// Generate a session log from a scenario file.
    Simulate(SimulateArgs),
    /// Emit a (weight, median) CSV and an ASCII chart of the calibration curve.
    Report(ReportArgs),
}

#[derive(Args)]
pub struct LinkbudgetArgs {
    /// Transmit power, dBm.
    #[arg(long, default_value_t = 20.0, allow_negative_numbers = true)]
    pub power: f64,
    /// Carrier frequency, Hz.
    #[arg(long, default_value_t = 915e6)]
    pub freq: f64,
    /// Antenna separation, m.
    #[arg(long, default_value_t = 1.524, allow_negative_numbers = true)]
    pub dist: f64,
    /// Gain of each antenna, dBi.
    #[arg(long, default_value_t = 2.15, allow_negative_numbers = true)]
    pub ant_gain: f64,
    /// Remaining system gain, dB (negative for loss).
    #[arg(long, default_value_t = -5.0, allow_negative_numbers = true)]
    pub sys_gain: f64,
}

#[derive(Args)]
pub struct StatsArgs {
    /// Session logs to summarize.
    #[arg(required = true)]
    pub files: Vec<PathBuf>,
    /// Empty-bin session; adds a material-effect column.
    #[arg(long)]
    pub empty: Option<PathBuf>,
    /// Standard deviation at or below which a session is stable, dBm.
    #[arg(long, default_value_t = DEFAULT_STABILITY_THRESHOLD_DBM)]
    pub threshold: f64,
}

#[derive(Args)]
pub struct CalibrateArgs {
    /// Session logs, each with a `# weight_lb = ...` header.
    #[arg(required = true)]
    pub files: Vec<PathBuf>,
    /// Profile file to write.
    #[arg(long)]
    pub out: PathBuf,
    /// Carrier frequency recorded in the profile, Hz.
    #[arg(long, default_value_t = 915e6)]
    pub freq: f64,
}

#[derive(Args)]
pub struct EstimateArgs {
    #[arg(long)]
    pub profile: PathBuf,
    /// Session log to estimate.
    pub session: PathBuf,
    /// Known weight, lb; prints the relative error of the estimate.
    #[arg(long)]
    pub actual: Option<f64>,
}

#[derive(Args)]
pub struct SimulateArgs {
    #[arg(long)]
    pub scenario: PathBuf,
    /// Number of readings.
    #[arg(long, default_value_t = wastesense::simulator::DEFAULT_READINGS)]
    pub n: usize,
    /// Session log to write.
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Args)]
pub struct ReportArgs {
    #[arg(long)]
    pub profile: PathBuf,
    /// Session logs to plot against the curve.
    pub files: Vec<PathBuf>,
}

/// Failure of a subcommand, split by exit code.
#[derive(Debug)]
pub enum CliError {
    Usage(String),
    Data(String),
}

impl From<wastesense::Error> for CliError {
    fn from(e: wastesense::Error) -> Self {
        CliError::Data(e.to_string())
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => e.exit(),
    };
    let result = match cli.command {
        Command::Linkbudget(a) => commands::linkbudget(&a),
        Command::Stats(a) => commands::stats(&a),
        Command::Calibrate(a) => commands::calibrate(&a),
        Command::Estimate(a) => commands::estimate(&a),
        Command::Simulate(a) => commands::simulate(&a),
        Command::Report(a) => commands::report(&a),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(CliError::Data(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
        Err(CliError::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}
