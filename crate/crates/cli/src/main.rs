use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

mod run;

use run::{CliError, Outcome};

#[derive(Debug, Parser)]
#[command(name = "breakup", version, about = "Electron-ion entanglement after photoionization")]
pub struct Cli {
    /// Flat `key = value` parameter file.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,

    /// Output directory, created if missing.
    #[arg(long, global = true, default_value = ".")]
    pub out: PathBuf,

    #[arg(long, global = true, value_enum, default_value_t = Format::Csv)]
    pub format: Format,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

impl Format {
    pub fn extension(self) -> &'static str {
        match self {
            Format::Csv => "csv",
            Format::Json => "json",
        }
    }
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Single-particle and coincidence widths over an eta grid.
    Widths(EtaArgs),
    /// Radial profile of the relative packet at one or more zeta.
    Profile(ProfileArgs),
    /// Entanglement parameter over an eta grid.
    Entanglement(EtaArgs),
    /// Width, eta and R evolution for the configured system.
    Evolve(EvolveArgs),
    /// Closed forms against the independent oracles.
    Oracle(OracleArgs),
    /// Data series behind a figure.
    Figure(FigureArgs),
}

#[derive(Debug, Args)]
pub struct EtaArgs {
    /// m_light / m_heavy; overrides the masses from --config.
    #[arg(long)]
    pub mass_ratio: Option<f64>,

    /// `log:lo:hi:n`, `lin:lo:hi:n` or a comma-separated list.
    #[arg(long, default_value = "log:1e-3:1e3:241")]
    pub eta_grid: String,

    /// Factor standing for "much less than" in the regime labels.
    #[arg(long, default_value_t = 10.0)]
    pub regime_factor: f64,
}

#[derive(Debug, Args)]
pub struct ProfileArgs {
    #[arg(long, value_delimiter = ',', default_values_t = [0.01, 20.0])]
    pub zeta: Vec<f64>,

    /// rho grid, `lin:lo:hi:n` or a list.
    #[arg(long, default_value = "lin:-10:3:1301")]
    pub rho_grid: String,
}

#[derive(Debug, Args)]
pub struct EvolveArgs {
    /// Initial eta; sets dr_cm0 = eta0 * dr_rel0.
    #[arg(long)]
    pub eta0: Option<f64>,

    /// Number of log-spaced times after t = 0.
    #[arg(long, default_value_t = 301)]
    pub points: usize,
}

#[derive(Debug, Args)]
pub struct OracleArgs {
    #[arg(long, default_value = "all")]
    pub suite: String,

    /// Replaces every case tolerance.
    #[arg(long)]
    pub tolerance: Option<f64>,
}

#[derive(Debug, Args)]
pub struct FigureArgs {
    /// fig1a, fig1b, fig2 ... fig8, or all.
    #[arg(long, default_value = "all")]
    pub id: String,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run::run(&cli) {
        Ok(Outcome::Success) => ExitCode::SUCCESS,
        Ok(Outcome::OracleFailed(err)) | Err(err) => {
            report(&err);
            ExitCode::from(err.exit_code())
        }
    }
}

fn report(err: &CliError) {
    let record = serde_json::json!({ "error": err.record() });
    eprintln!("{record}");
}
