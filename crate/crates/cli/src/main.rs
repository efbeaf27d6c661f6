//! `cosmo-growth`: tables, mode exponents, growth curves and verification.

mod commands;
mod config;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use config::RunConfig;

#[derive(Debug, Parser)]
#[command(
    name = "cosmo-growth",
    version,
    about = "Analytic growth modes of linear perturbations"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Args)]
pub struct ModelArgs {
    /// Expansion-law index, e.g. 2/3
    #[arg(long, allow_hyphen_values = true)]
    pub eta: String,
    /// Polytropic index of component 1, e.g. 4/3
    #[arg(long, allow_hyphen_values = true)]
    pub gamma: String,
    /// Density fraction of component 1; the rest is pressureless background
    #[arg(long, default_value = "0.5", allow_hyphen_values = true)]
    pub omega1: String,
    /// Wave constant of component 1
    #[arg(long, default_value = "0", allow_hyphen_values = true)]
    pub k1: String,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Write table21.csv and table22.csv
    Tables {
        /// Output directory [default: $COSMO_GROWTH_OUT or .]
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Print derived parameters, pole structure and mode exponents
    Modes {
        #[command(flatten)]
        model: ModelArgs,
    },
    /// Evaluate δ(t) on a log-spaced grid to CSV
    Eval {
        #[command(flatten)]
        model: ModelArgs,
        #[arg(long, allow_hyphen_values = true)]
        t0: String,
        #[arg(long, allow_hyphen_values = true)]
        t1: String,
        /// Number of grid points
        #[arg(long, default_value_t = 65)]
        n: usize,
        /// Four basis coefficients for the basis in use at t0 (complex as 1+2i)
        #[arg(long, allow_hyphen_values = true)]
        coeffs: Option<String>,
        /// δ, δ′, δ″, δ‴ of component 1 at t0
        #[arg(long, allow_hyphen_values = true)]
        ic: Option<String>,
        /// CSV path [default: $COSMO_GROWTH_OUT/eval.csv or ./eval.csv]
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run the verification suites
    Verify {
        /// tables, residues, ode or all
        #[arg(long, default_value = "all")]
        scope: String,
        /// Replace every pinned tolerance
        #[arg(long)]
        tol: Option<String>,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let cfg = match RunConfig::from_cli(cli) {
        Ok(c) => c,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    };
    commands::dispatch(cfg)
}
