//! `isoprofile`: evaluate profiles, run domination certificates and
//! reproduce the Yamabe bounds with their plot data.

mod commands;
mod output;

use clap::{Args, Parser, Subcommand, ValueEnum};
use std::path::PathBuf;
use std::process::ExitCode;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error(transparent)]
    Library(#[from] isoprofile::Error),
    #[error("i/o: {0}")]
    Io(#[from] std::io::Error),
    #[error("json: {0}")]
    Json(#[from] serde_json::Error),
    #[error("csv: {0}")]
    Csv(#[from] csv::Error),
    /// Results were produced but a certification step failed.
    #[error("{0}")]
    Failed(String),
}

impl CliError {
    fn exit_code(&self) -> u8 {
        use isoprofile::Error as E;
        match self {
            CliError::Failed(_) => 1,
            CliError::Library(E::CoverageGap(_) | E::RegimeInapplicable(_) | E::AuxiliaryCheck(_) | E::Headline(_)) => 1,
            _ => 2,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, serde::Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Csv,
    Json,
}

#[derive(Debug, Parser)]
#[command(name = "isoprofile", version, about = "Isoperimetric profiles, profile-domination certificates and Yamabe bounds")]
pub struct Cli {
    /// Relative quadrature tolerance, in (0, 1e-4].
    #[arg(long, global = true, default_value_t = 1e-8)]
    pub tol: f64,
    /// Nodes per grid regime.
    #[arg(long = "grid-nodes", global = true, default_value_t = 512)]
    pub grid_nodes: usize,
    /// Output format of data files (default: csv for profiles and tables, json for certificates).
    #[arg(long, global = true, value_enum)]
    pub format: Option<Format>,
    /// Output directory; created if missing.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Sample an isoperimetric profile as (volume, area) pairs.
    Profile {
        #[command(subcommand)]
        space: ProfileSpace,
    },
    /// Run a domination certificate.
    Certify(CertifyArgs),
    /// Headline table, alpha/beta table, figure data and summary.
    Reproduce(ReproduceArgs),
}

#[derive(Debug, Args)]
pub struct Sampling {
    /// Volume range `lo:hi`.
    #[arg(long, value_parser = parse_range)]
    pub range: Option<(f64, f64)>,
    #[arg(long, default_value_t = 200)]
    pub samples: usize,
}

#[derive(Debug, Subcommand)]
pub enum ProfileSpace {
    /// Round sphere `(S^dim, mu g0)`; the default range is the open interval
    /// up to the total volume, sampled at interior points.
    Sphere {
        #[arg(long)]
        dim: i64,
        #[arg(long, default_value_t = 1.0)]
        mu: f64,
        #[command(flatten)]
        sampling: Sampling,
    },
    /// Cylinder `(S^k x R, mu (g0 + dx^2))`.
    Cylinder {
        #[arg(long)]
        k: i64,
        #[arg(long, default_value_t = 1.0)]
        mu: f64,
        #[command(flatten)]
        sampling: Sampling,
    },
}

#[derive(Debug, Args)]
#[command(group(clap::ArgGroup::new("source").required(true).args(["plan", "config", "list"])))]
pub struct CertifyArgs {
    /// Built-in plan name.
    #[arg(long)]
    pub plan: Option<String>,
    /// JSON file holding a custom plan.
    #[arg(long)]
    pub config: Option<PathBuf>,
    /// Override the domination constant c of the plan.
    #[arg(long)]
    pub lambda: Option<f64>,
    /// Print the plan as JSON instead of running it (a template for --config).
    #[arg(long)]
    pub dump_plan: bool,
    /// List built-in plans.
    #[arg(long)]
    pub list: bool,
}

#[derive(Debug, Args)]
pub struct ReproduceArgs {
    /// Restrict to one part: a figure id (fig1..fig9), headlines or alpha-beta.
    #[arg(long)]
    pub only: Option<String>,
    /// Samples per figure curve.
    #[arg(long, default_value_t = 200)]
    pub samples: usize,
}

fn parse_range(s: &str) -> Result<(f64, f64), String> {
    let (a, b) = s.split_once(':').ok_or_else(|| format!("expected lo:hi, got {s:?}"))?;
    let lo: f64 = a.trim().parse().map_err(|e| format!("bad lower end {a:?}: {e}"))?;
    let hi: f64 = b.trim().parse().map_err(|e| format!("bad upper end {b:?}: {e}"))?;
    if !(lo.is_finite() && hi.is_finite() && lo < hi) {
        return Err(format!("range must satisfy lo < hi, got {s:?}"));
    }
    Ok((lo, hi))
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match commands::run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("isoprofile: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
