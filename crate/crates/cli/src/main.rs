//! `rdt`: batch front end for Euclidean root data.
//!
//! Every invocation prints one JSON report `{status, payload, diagnostics}`
//! on stdout. Exit codes: 0 ok, 1 negative finding (invalid datum, not
//! isomorphic, failed embedding check, unclassifiable datum), 2 input error.

mod commands;
mod report;

use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use report::Report;

#[derive(Parser, Debug)]
#[command(name = "rdt", version, about = "Euclidean root data: classification, spectra, torus embeddings")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Args, Debug, Clone)]
pub struct TypeArgs {
    /// Family letter: A, B, C, D or BC.
    #[arg(long = "type")]
    pub family: Option<String>,
    /// Lattice rank r (family A in rank r is A_{r-1}-hat).
    #[arg(long)]
    pub rank: Option<usize>,
    /// Squared length L² of the cubic basis, e.g. 1 or 1/2.
    #[arg(long = "length2", default_value = "1")]
    pub length2: String,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Check the root datum axioms.
    Validate { datum: PathBuf },
    /// Emit the standard datum of a type.
    Standard {
        #[command(flatten)]
        ty: TypeArgs,
        /// Also write the datum file here.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Type, cubic basis, fundamental group and embedding case.
    Classify { datum: PathBuf },
    /// Fundamental group Γ/Γ₀.
    Pi1 { datum: PathBuf },
    /// Finest orthogonal splitting.
    Split { datum: PathBuf },
    /// Whether the space contains a polysphere of full rank.
    Polysphere { datum: PathBuf },
    /// Search for an isometry between two data.
    Iso { first: PathBuf, second: PathBuf },
    /// Dominant weights with scaled eigenvalue at most the bound.
    Spectrum {
        datum: Option<PathBuf>,
        #[command(flatten)]
        ty: TypeArgs,
        /// Multiplicities m1,m2,m+,m-.
        #[arg(long)]
        mults: String,
        #[arg(long, default_value = "10")]
        bound: String,
    },
    /// Whether the eigenvalue at ε₁ is the smallest nonzero one.
    FirstEigencheck {
        datum: Option<PathBuf>,
        #[command(flatten)]
        ty: TypeArgs,
        #[arg(long)]
        mults: String,
    },
    /// Build the torus embedding and run its numerical checks.
    Embed {
        datum: Option<PathBuf>,
        #[command(flatten)]
        ty: TypeArgs,
        #[arg(long, default_value_t = 64)]
        samples: usize,
        #[arg(long, default_value_t = 1e-9)]
        tol: f64,
        /// Norm of the zero-weight component.
        #[arg(long, default_value_t = 0.0)]
        a: f64,
        /// Write sampled points here as CSV.
        #[arg(long)]
        csv: Option<PathBuf>,
    },
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn"))
        .target(env_logger::Target::Stderr)
        .init();
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) if !e.use_stderr() => {
            // --help and --version
            let _ = e.print();
            return ExitCode::SUCCESS;
        }
        Err(e) => {
            let report = Report::error(e.render().to_string().trim_end().to_string());
            return emit(&report);
        }
    };
    let report = match commands::run(&cli.command) {
        Ok(r) => r,
        Err(e) => Report::error(e.0),
    };
    emit(&report)
}

fn emit(report: &Report) -> ExitCode {
    let text = serde_json::to_string_pretty(&report.to_json()).expect("reports serialize");
    // a closed pipe downstream is not an error of ours
    let _ = writeln!(std::io::stdout().lock(), "{text}");
    ExitCode::from(report.status.exit_code() as u8)
}
