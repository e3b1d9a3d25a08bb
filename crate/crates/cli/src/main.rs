mod cache;
mod commands;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

/// Point counts, Hasse–Witt verdicts and cover checks for
/// `x^a + y^a + z^b x^c y^c = 0`.
#[derive(Parser, Debug)]
#[command(name = "supercurve", version)]
pub struct Cli {
    /// Machine-readable output on stdout.
    #[arg(long, global = true)]
    pub json: bool,

    /// JSONL result cache (defaults to $SUPERCURVE_CACHE when set).
    #[arg(long, global = true, value_name = "PATH")]
    pub cache: Option<PathBuf>,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// 5×5 Hasse–Witt matrix of the quintic and its verdict.
    Superspecial {
        #[arg(long)]
        p: u64,
        #[command(flatten)]
        coeffs: Coefficients,
        /// Field holding s and t.
        #[arg(long, value_enum, default_value_t = FieldChoice::P2)]
        field: FieldChoice,
    },
    /// Rational points on the smooth model.
    Count {
        #[arg(long)]
        p: u64,
        #[command(flatten)]
        family: Family,
        #[command(flatten)]
        coeffs: Coefficients,
        #[arg(long, value_enum, default_value_t = FieldChoice::P2)]
        q: FieldChoice,
    },
    /// CSV of counts over a range of primes.
    Scan {
        #[arg(long)]
        pmin: u64,
        #[arg(long)]
        pmax: u64,
        #[command(flatten)]
        family: Family,
        /// Keep only primes satisfying a maximality congruence.
        #[arg(long)]
        only_predicted: bool,
    },
    /// Congruence conditions met by p.
    Classify {
        #[arg(long)]
        p: u64,
        #[command(flatten)]
        family: Family,
    },
    /// Parameter table of maximal members of the family.
    Table2,
    /// Symbolic check that the Hermitian curve covers the family.
    VerifyCover {
        #[command(flatten)]
        family: Family,
        #[arg(long, value_parser = clap::value_parser!(u8).range(1..=2))]
        case: u8,
        /// Shift the Z exponent of the substitution (a deliberately broken cover).
        #[arg(long, allow_hyphen_values = true, value_name = "DELTA")]
        perturb_z: Option<i64>,
    },
    /// Brute-force cross-checks.
    #[command(subcommand)]
    Oracle(OracleCommand),
}

#[derive(Subcommand, Debug)]
pub enum OracleCommand {
    /// Expand F^(p-1) and compare the 25 coefficients with the criterion.
    Expand {
        #[arg(long)]
        p: u64,
        #[command(flatten)]
        coeffs: Coefficients,
    },
    /// Projective points of the singular plane model.
    Plane {
        #[arg(long)]
        p: u64,
        #[command(flatten)]
        family: Family,
        #[command(flatten)]
        coeffs: Coefficients,
        #[arg(long, value_enum, default_value_t = FieldChoice::P2)]
        q: FieldChoice,
    },
    /// Singular points of the plane model.
    Singular {
        #[arg(long)]
        p: u64,
        #[command(flatten)]
        family: Family,
        #[command(flatten)]
        coeffs: Coefficients,
        #[arg(long, value_enum, default_value_t = FieldChoice::P2)]
        q: FieldChoice,
    },
}

#[derive(Args, Debug, Clone, Copy)]
pub struct Family {
    #[arg(long, default_value_t = 5)]
    pub a: u64,
    #[arg(long, default_value_t = 3)]
    pub b: u64,
    #[arg(long, default_value_t = 1)]
    pub c: u64,
}

#[derive(Args, Debug, Clone)]
pub struct Coefficients {
    /// Integer or u+v*i.
    #[arg(long, default_value = "1", allow_hyphen_values = true)]
    pub s: String,
    #[arg(long, default_value = "1", allow_hyphen_values = true)]
    pub t: String,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
pub enum FieldChoice {
    P,
    P2,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match commands::run(&cli) {
        Ok(code) => ExitCode::from(code),
        Err(err) => {
            eprintln!("error: {err:#}");
            ExitCode::from(commands::exit_code(&err))
        }
    }
}
