//! `vekua`: formal powers, invariant checks and Dirac spinors from JSON configs.
//!
//! Exit codes: 0 ok, 1 a check failed, 2 configuration error, 3 numerical
//! non-convergence.

mod commands;
mod config;
mod output;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("config error: {0}")]
    Config(String),
    #[error("i/o error: {0}")]
    Io(String),
    #[error("numerical failure: {0}")]
    Numerical(vekua_core::Error),
    #[error("invalid model: {0}")]
    Model(vekua_core::Error),
    #[error("verification failed")]
    Verification,
}

impl From<vekua_core::Error> for CliError {
    fn from(e: vekua_core::Error) -> Self {
        use vekua_core::Error::*;
        match e {
            QuadratureNotConverged { .. } | StepTooLarge { .. } | ZeroDivisorOrZero => {
                CliError::Numerical(e)
            }
            _ => CliError::Model(e),
        }
    }
}

impl CliError {
    fn exit_code(&self) -> u8 {
        match self {
            CliError::Verification => 1,
            CliError::Config(_) | CliError::Io(_) | CliError::Model(_) => 2,
            CliError::Numerical(_) => 3,
        }
    }
}

/// Command-line overrides shared by all jobs.
#[derive(Clone, Debug)]
pub struct Overrides {
    pub out: PathBuf,
    pub tol: Option<f64>,
    pub gamma_flip: bool,
}

#[derive(Parser)]
#[command(
    name = "vekua",
    version,
    about = "Formal powers and Dirac spinors for one-variable potentials"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// Output directory.
    #[arg(long, global = true, default_value = ".")]
    out: PathBuf,
    /// Relative tolerance of the formal-power quadrature.
    #[arg(long, global = true)]
    tol: Option<f64>,
    /// Worker threads (all cores by default).
    #[arg(long, global = true)]
    threads: Option<usize>,
    /// Negate γ₁, γ₂, γ₃.
    #[arg(long, global = true)]
    gamma_flip: bool,
}

#[derive(Subcommand)]
enum Command {
    /// Formal powers on a grid: powers.csv and powers.json.
    Powers { config: PathBuf },
    /// Invariant suite: verify.json.
    Verify { config: PathBuf },
    /// Spinor samples: spinor.csv and spinor_report.json.
    Spinor { config: PathBuf },
}

fn run(cli: Cli) -> Result<(), CliError> {
    if let Some(n) = cli.threads {
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
            .map_err(|e| CliError::Config(format!("--threads: {e}")))?;
    }
    if let Some(tol) = cli.tol {
        if !(tol > 0.0 && tol.is_finite()) {
            return Err(CliError::Config(format!(
                "--tol must be positive, got {tol}"
            )));
        }
    }
    let overrides = Overrides {
        out: cli.out,
        tol: cli.tol,
        gamma_flip: cli.gamma_flip,
    };
    match cli.command {
        Command::Powers { config } => {
            let files = commands::powers(&config::load(&config)?, &overrides)?;
            report_files(&files);
        }
        Command::Verify { config } => {
            let (results, files) = commands::verify(&config::load(&config)?, &overrides)?;
            for r in &results {
                let status = if r.pass { "PASS" } else { "FAIL" };
                println!(
                    "{status} {:<22} {:.3e} (tol {:.1e})",
                    r.check, r.max_residual, r.tolerance
                );
            }
            report_files(&files);
            if results.iter().any(|r| !r.pass) {
                return Err(CliError::Verification);
            }
        }
        Command::Spinor { config } => {
            let (report, files) = commands::spinor(&config::load(&config)?, &overrides)?;
            println!(
                "{} points, max |D Φ| = {:.3e} (tol {:.1e}), max |Φ| = {:.3e}",
                report.points, report.max_dirac_residual, report.tolerance, report.max_spinor_norm
            );
            report_files(&files);
            if !report.pass {
                return Err(CliError::Verification);
            }
        }
    }
    Ok(())
}

fn report_files(files: &[PathBuf]) {
    for f in files {
        println!("wrote {}", f.display());
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("vekua: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
