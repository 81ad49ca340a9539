//! Command-line front end for the `splitsolve` library: run a scheme from a
//! JSON config, write traces and reports, reproduce the tabulated example and
//! certify map properties.

pub mod commands;
pub mod config;
pub mod error;
pub mod output;

use std::path::PathBuf;

use clap::{Parser, Subcommand};

pub use commands::Overrides;
pub use config::RunConfig;
pub use error::{CliError, Status};

#[derive(Debug, Parser)]
#[command(
    name = "splitsolve",
    version,
    about = "Split common fixed point equality solver"
)]
pub struct Cli {
    /// Write the iterate trace CSV here (overrides `output.trace`).
    #[arg(long, global = true, value_name = "PATH")]
    pub trace: Option<PathBuf>,
    /// Write a JSON report here (overrides `output.report`).
    #[arg(long, global = true, value_name = "PATH")]
    pub report: Option<PathBuf>,
    /// Iteration cap (overrides `params.max_iters`; power-iteration cap for `spectral`).
    #[arg(long, global = true, value_name = "N")]
    pub max_iters: Option<usize>,
    /// Residual tolerance (overrides `params.tol`; power-iteration tolerance for `spectral`).
    #[arg(long, global = true, value_name = "X")]
    pub tol: Option<f64>,
    /// Seed for sampling, synthetic generation and power iteration.
    #[arg(long, global = true, value_name = "N")]
    pub seed: Option<u64>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Run the configured scheme.
    Solve { config: PathBuf },
    /// Re-run the tabulated recurrence and compare with the fixture tables.
    ReproduceTables {
        /// Directory holding `table1.csv` and `table2.csv` (defaults to the built-in copies).
        #[arg(long, value_name = "DIR")]
        fixtures: Option<PathBuf>,
    },
    /// Run property checks on the configured maps and sets.
    Check { config: PathBuf },
    /// Estimate the spectral radii of A*A and B*B and the step bound.
    Spectral { config: PathBuf },
}

impl Cli {
    pub fn overrides(&self) -> Overrides {
        Overrides {
            trace: self.trace.clone(),
            report: self.report.clone(),
            max_iters: self.max_iters,
            tol: self.tol,
            seed: self.seed,
        }
    }
}

pub fn run(cli: &Cli) -> Result<Status, CliError> {
    let ov = cli.overrides();
    match &cli.command {
        Command::Solve { config } => commands::cmd_solve(config, &ov),
        Command::ReproduceTables { fixtures } => {
            commands::cmd_reproduce_tables(fixtures.as_deref(), &ov)
        }
        Command::Check { config } => commands::cmd_check(config, &ov),
        Command::Spectral { config } => commands::cmd_spectral(config, &ov),
    }
}
