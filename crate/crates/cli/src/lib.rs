//! Command-line driver for `ptcubic`: configuration, dispatch, file formats,
//! metric caching and golden comparison.

pub mod cache;
pub mod commands;
pub mod config;
pub mod error;
pub mod formats;
pub mod golden;
pub mod output;
pub mod verify;

use std::ffi::OsString;
use std::path::PathBuf;

use clap::{Parser, Subcommand, ValueEnum};

pub use config::{ConfigFile, Overrides, RunConfig};
pub use error::CliError;

#[derive(Parser, Debug)]
#[command(name = "ptcubic", version, about = "Metric, equivalent Hermitian Hamiltonian, spectra, orbits and densities for H = p²/2m + μ²x²/2 + iϵx³")]
pub struct Cli {
    #[command(flatten)]
    pub overrides: Overrides,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Solve for Q₁, Q₃, … and write them as JSON
    Metric {
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// The equivalent Hermitian Hamiltonian in physical units
    Hamiltonian {
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// The pseudo-Hermitian position and momentum operators in physical units
    Observables {
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Low-lying eigenvalues of H in a truncated oscillator basis
    Spectrum {
        /// Emit JSON instead of a table
        #[arg(long)]
        json: bool,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Integrate classical orbits; one CSV per energy
    Orbit {
        #[arg(long)]
        csv: Option<PathBuf>,
        #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
        x0: f64,
    },
    /// Physical wave function and conserved probability density on a grid
    Density {
        #[arg(long, value_enum, default_value_t = State::Ground)]
        state: State,
        #[arg(long)]
        csv: Option<PathBuf>,
    },
    /// Run the golden and property checks; optionally compare artifacts against a golden directory
    Verify {
        #[arg(long)]
        golden_dir: Option<PathBuf>,
        /// Store missing goldens instead of reporting them
        #[arg(long, requires = "golden_dir")]
        bless: bool,
    },
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum State {
    /// e^{−x²/2}
    Ground,
    /// x·e^{−x²/2}
    First,
}

/// Parses `args` and runs the command; returns the process exit code.
pub fn run<I, T>(args: I) -> u8
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    match dispatch(&cli) {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}

pub fn dispatch(cli: &Cli) -> Result<(), CliError> {
    let cfg = RunConfig::resolve(&cli.overrides)?;
    commands::run(&cli.command, &cfg)
}
