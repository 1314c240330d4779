//! `arctic`: exact verifications and tangent-method pipelines from the command line.

mod commands;
mod report;
mod svg;

use std::path::PathBuf;
use std::process::ExitCode;

use arctic_core::tangent::{default_grid, Grid, Spacing};
use arctic_core::ModelId;
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

#[derive(Parser, Debug)]
#[command(name = "arctic", version = env!("ARCTIC_VERSION"), about = "Arctic curves of lattice path models")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Exact determinant, LU and one-point checks at one size.
    Verify(SizeArgs),
    /// Exact one-point profile H(ℓ) as CSV.
    Onepoint(SizeArgs),
    /// Brute-force path or matrix enumeration against the determinant side.
    Oracle(OracleArgs),
    /// Finite-n argmax of H·Y against the analytic saddle over a z grid.
    Saddle(SaddleArgs),
    /// Tangent family, its envelope and the residual against the closed-form curve.
    Envelope(EnvelopeArgs),
    /// Parametric samples of the closed-form curve and its tangency points.
    Curve(CurveArgs),
    /// SVG figure of tangents, envelope and curve.
    Plot(PlotArgs),
}

fn parse_model(s: &str) -> Result<ModelId, String> {
    s.parse()
}

#[derive(Args, Debug, Clone, Serialize)]
pub struct Common {
    /// aztec, dyck, red, staircase, staircase-alt or vsasm.
    #[arg(long, value_parser = parse_model)]
    #[serde(serialize_with = "ser_model")]
    pub model: ModelId,
    /// Directory for CSV/SVG artifacts and the JSON report.
    #[arg(long, default_value = "out")]
    #[serde(skip)]
    pub out_dir: PathBuf,
}

fn ser_model<S: serde::Serializer>(m: &ModelId, s: S) -> Result<S::Ok, S::Error> {
    s.serialize_str(m.slug())
}

#[derive(Args, Debug, Clone, Serialize)]
pub struct SizeArgs {
    #[command(flatten)]
    #[serde(flatten)]
    pub common: Common,
    /// Size n (the matrix size for vsasm).
    #[arg(long)]
    pub n: usize,
    /// Second size parameter k for the half-hexagon models.
    #[arg(long, default_value_t = 2)]
    pub k: usize,
}

#[derive(Args, Debug, Clone, Serialize)]
pub struct OracleArgs {
    #[command(flatten)]
    #[serde(flatten)]
    pub sized: SizeArgs,
    /// Write the enumerated matrices as NDJSON (vsasm only).
    #[arg(long)]
    pub dump: Option<PathBuf>,
}

#[derive(Clone, Copy, Debug, ValueEnum, Serialize, PartialEq, Eq)]
#[serde(rename_all = "lowercase")]
pub enum SpacingArg {
    Linear,
    Log,
}

#[derive(Args, Debug, Clone, Serialize)]
pub struct GridArgs {
    #[arg(long)]
    pub z_min: Option<f64>,
    #[arg(long)]
    pub z_max: Option<f64>,
    #[arg(long)]
    pub count: Option<usize>,
    #[arg(long, value_enum)]
    pub spacing: Option<SpacingArg>,
}

impl GridArgs {
    pub fn grid(&self, model: ModelId, default_count: usize) -> Grid {
        let d = default_grid(model, self.count.unwrap_or(default_count));
        Grid {
            min: self.z_min.unwrap_or(d.min),
            max: self.z_max.unwrap_or(d.max),
            count: d.count,
            spacing: match self.spacing {
                Some(SpacingArg::Linear) => Spacing::Linear,
                Some(SpacingArg::Log) => Spacing::Log,
                None => d.spacing,
            },
        }
    }
}

#[derive(Args, Debug, Clone, Serialize)]
pub struct SaddleArgs {
    #[command(flatten)]
    #[serde(flatten)]
    pub common: Common,
    #[arg(long, default_value_t = 4096)]
    pub n: usize,
    /// Shape parameter x = k/n for the half-hexagon models.
    #[arg(long, default_value_t = 1.0)]
    pub x: f64,
    #[command(flatten)]
    #[serde(flatten)]
    pub grid: GridArgs,
    #[arg(long, default_value_t = 0.01)]
    pub tol: f64,
    /// Largest n for which the one-point profile is evaluated exactly.
    #[arg(long, default_value_t = arctic_core::models::profile::DEFAULT_CROSSOVER)]
    pub crossover: usize,
}

#[derive(Args, Debug, Clone, Serialize)]
pub struct EnvelopeArgs {
    #[command(flatten)]
    #[serde(flatten)]
    pub common: Common,
    #[arg(long, default_value_t = 1.0)]
    pub x: f64,
    #[command(flatten)]
    #[serde(flatten)]
    pub grid: GridArgs,
    #[arg(long, default_value_t = 1e-3)]
    pub tol: f64,
}

#[derive(Args, Debug, Clone, Serialize)]
pub struct CurveArgs {
    #[command(flatten)]
    #[serde(flatten)]
    pub common: Common,
    #[arg(long, default_value_t = 1.0)]
    pub x: f64,
    #[arg(long, default_value_t = 1000)]
    pub samples: usize,
    #[arg(long, default_value_t = 1e-12)]
    pub tol: f64,
}

#[derive(Args, Debug, Clone, Serialize)]
pub struct PlotArgs {
    #[command(flatten)]
    #[serde(flatten)]
    pub common: Common,
    #[arg(long, default_value_t = 1.0)]
    pub x: f64,
    #[command(flatten)]
    #[serde(flatten)]
    pub grid: GridArgs,
    /// Number of tangent lines drawn, evenly picked from the family (0 for the curve alone).
    #[arg(long, default_value_t = 12)]
    pub lines: usize,
}

/// Why a run stopped before producing a verdict.
#[derive(Debug)]
pub enum CliError {
    Usage(String),
    Io(std::io::Error),
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Io(e)
    }
}

pub fn usage(e: impl ToString) -> CliError {
    CliError::Usage(e.to_string())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match &cli.command {
        Command::Verify(a) => commands::verify(a),
        Command::Onepoint(a) => commands::onepoint(a),
        Command::Oracle(a) => commands::oracle(a),
        Command::Saddle(a) => commands::saddle(a),
        Command::Envelope(a) => commands::envelope(a),
        Command::Curve(a) => commands::curve(a),
        Command::Plot(a) => commands::plot(a),
    };
    match result {
        Ok(report) => {
            print!("{}", report.to_json());
            if report.passed() {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(CliError::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(CliError::Io(e)) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
