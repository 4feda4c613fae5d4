use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use jacobi_inverse::{Profile, Scalar};

/// Forward simulation and coefficient recovery for complex Jacobi systems.
#[derive(Debug, Parser)]
#[command(name = "jacobi", version)]
pub struct Cli {
    #[command(flatten)]
    pub global: Global,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Args)]
pub struct Global {
    /// Tolerance file (JSON); overrides the file named by JACOBI_TOLERANCES.
    #[arg(long, global = true, value_name = "FILE")]
    pub tol_file: Option<PathBuf>,
    /// Print wall time to stderr. Reports never contain timings.
    #[arg(long, global = true)]
    pub timing: bool,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Generate a seeded random coefficient set.
    Gen {
        #[arg(long)]
        depth: usize,
        #[arg(long)]
        seed: u64,
        #[arg(long, default_value = "wide")]
        profile: Profile,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Simulate a controlled wave; writes the stored triangle as CSV.
    Simulate {
        #[arg(long)]
        coeffs: PathBuf,
        #[arg(long)]
        control: PathBuf,
        #[arg(long)]
        steps: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Compute the response vector `r_0..r_{2T-2}`.
    Response {
        #[arg(long)]
        coeffs: PathBuf,
        #[arg(long)]
        steps: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Recover coefficients from a response vector.
    Reconstruct {
        #[arg(long)]
        response: PathBuf,
        #[arg(long, value_enum, default_value_t = MethodArg::Both)]
        method: MethodArg,
        /// Krein seed `y_0`, as `re` or `re,im`. Without a seed the
        /// fallback sequence (0,1), (1,0), (1,1) is used.
        #[arg(long, value_parser = parse_scalar, requires = "beta")]
        alpha: Option<Scalar>,
        /// Krein seed `y_1`, as `re` or `re,im`.
        #[arg(long, value_parser = parse_scalar, requires = "alpha")]
        beta: Option<Scalar>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Decide whether a vector is a response vector. Exit code 2 if not.
    Characterize {
        #[arg(long)]
        response: PathBuf,
        /// Relative singularity threshold; overrides the tolerance file.
        #[arg(long)]
        tol: Option<f64>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Coefficients to response and back; reports errors and residuals.
    Roundtrip {
        #[arg(long)]
        coeffs: PathBuf,
        #[arg(long)]
        steps: usize,
        #[arg(long, value_enum, default_value_t = MethodArg::Both)]
        method: MethodArg,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum MethodArg {
    Krein,
    Factorization,
    Both,
}

impl MethodArg {
    pub fn krein(self) -> bool {
        matches!(self, MethodArg::Krein | MethodArg::Both)
    }

    pub fn factorization(self) -> bool {
        matches!(self, MethodArg::Factorization | MethodArg::Both)
    }

    pub fn name(self) -> &'static str {
        match self {
            MethodArg::Krein => "krein",
            MethodArg::Factorization => "factorization",
            MethodArg::Both => "both",
        }
    }
}

fn parse_scalar(s: &str) -> Result<Scalar, String> {
    let parse = |part: &str| {
        part.trim()
            .parse::<f64>()
            .map_err(|e| format!("`{part}`: {e}"))
    };
    match s.split_once(',') {
        Some((re, im)) => Ok(Scalar::new(parse(re)?, parse(im)?)),
        None => Ok(Scalar::new(parse(s)?, 0.0)),
    }
}
