//! Command-line front end for `superint-core`: JSON configuration, CSV/JSON
//! artifacts and the exit-code contract (0 ok, 2 verification failure,
//! 1 usage or domain error).

#![allow(clippy::neg_cmp_op_on_partial_ord)]

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};

pub mod commands;
pub mod config;
pub mod error;
pub mod output;

pub use commands::{Context, Outcome};
use config::PotentialChoice;
pub use error::CliError;
use output::Format;

pub const EXIT_OK: i32 = 0;
pub const EXIT_ERROR: i32 = 1;
pub const EXIT_VERIFY_FAILED: i32 = 2;

#[derive(Debug, Parser)]
#[command(
    name = "superint",
    version,
    about = "Superintegrable charged particles in static EM fields"
)]
pub struct Cli {
    #[command(flatten)]
    pub global: GlobalArgs,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Args)]
pub struct GlobalArgs {
    /// JSON run configuration (a spectrum job for `spectrum`).
    #[arg(long, global = true, value_name = "PATH")]
    pub config: Option<PathBuf>,
    /// Seed for the ChaCha8 sampler.
    #[arg(long, global = true, value_name = "N")]
    pub seed: Option<u64>,
    /// Output file (stdout when omitted).
    #[arg(long, global = true, value_name = "PATH")]
    pub out: Option<PathBuf>,
    #[arg(long, global = true, value_enum)]
    pub format: Option<Format>,
    /// Override the pass/fail tolerance.
    #[arg(long, global = true, value_name = "X")]
    pub tolerance: Option<f64>,
    /// Built-in system with default parameters: constant_b, helical, monopole.
    #[arg(long, global = true, value_name = "NAME")]
    pub system: Option<String>,
    /// Monopole scalar potential.
    #[arg(long, global = true, value_enum)]
    pub potential: Option<PotentialArg>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum PotentialArg {
    ModifiedCoulomb,
    CoulombOnly,
}

impl From<PotentialArg> for PotentialChoice {
    fn from(p: PotentialArg) -> Self {
        match p {
            PotentialArg::ModifiedCoulomb => PotentialChoice::ModifiedCoulomb,
            PotentialArg::CoulombOnly => PotentialChoice::CoulombOnly,
        }
    }
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Integrate a trajectory; CSV columns t,x,y,z,p1,p2,p3,H,<integrals>.
    Simulate,
    /// As `simulate`, optionally adding the closed-form discrepancy column.
    Trajectory {
        #[arg(long)]
        closed_form: bool,
    },
    /// Determining-equation residuals and brackets of the known integrals.
    Verify {
        /// Extra integrals to check (JSON).
        #[arg(long, value_name = "FILE")]
        spec: Option<PathBuf>,
        /// Use the quantum zero-order condition with this ħ.
        #[arg(long)]
        hbar: Option<f64>,
    },
    /// Bracket table and Casimirs (constant_b) or closure (monopole).
    Algebra,
    /// Eigenvalues for a spectrum job.
    Spectrum {
        /// Also write grid eigenfunctions as CSV.
        #[arg(long, value_name = "PATH")]
        eigenfunctions: Option<PathBuf>,
    },
    /// ∇·B = 0 and ∇×A = B at seeded random points.
    FieldsCheck,
}

impl Cli {
    pub fn context(&self) -> Context {
        Context {
            config: self.global.config.clone(),
            seed: self.global.seed,
            out: self.global.out.clone(),
            format: self.global.format,
            tolerance: self.global.tolerance,
            system: self.global.system.clone(),
            potential: self.global.potential.map(Into::into),
        }
    }

    pub fn execute(&self) -> Result<Outcome, CliError> {
        let ctx = self.context();
        match &self.command {
            Command::Simulate => commands::simulate(&ctx, false),
            Command::Trajectory { closed_form } => commands::simulate(&ctx, *closed_form),
            Command::Verify { spec, hbar } => commands::verify(&ctx, spec.as_deref(), *hbar),
            Command::Algebra => commands::algebra(&ctx),
            Command::Spectrum { eigenfunctions } => commands::spectrum(&ctx, eigenfunctions.as_deref()),
            Command::FieldsCheck => commands::fields_check(&ctx),
        }
    }
}

/// Parses, runs, writes the artifact and returns the process exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { EXIT_ERROR } else { EXIT_OK };
        }
    };
    let outcome = cli
        .execute()
        .and_then(|o| o.write(cli.global.out.as_deref()).map(|_| o));
    match outcome {
        Ok(o) if o.passed => EXIT_OK,
        Ok(o) => {
            eprintln!("verification failed: {}", o.summary);
            EXIT_VERIFY_FAILED
        }
        Err(e) => {
            eprintln!("error: {e}");
            EXIT_ERROR
        }
    }
}
