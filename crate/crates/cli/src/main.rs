//! `bilap` — command-line front end for the bilaplacian impurity toolkit.
//!
//! Subcommands:
//! - `sweep`:  eigenvalue/derivative tables over a μ grid, optionally with
//!   truncated-expansion and finite-lattice estimates per row.
//! - `asymp`:  three-way coefficient report (printed reference | exact
//!   engine | numeric fit) plus a per-μ expansion-vs-solver comparison.
//! - `oracle`: finite-lattice convergence table (truncated eigenvalue and
//!   Green's-function errors against the closed form).
//! - `series`: exact series printouts from a fixed catalog.
//!
//! Exit codes: 0 success, 1 usage error, 2 degraded accuracy/resolution in
//! at least one row, 3 internal error.

mod commands;
mod output;

use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

#[derive(Parser)]
#[command(
    name = "bilap",
    about = "Spectral toolkit for the 1D discrete bilaplacian with a rank-one impurity",
    version
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Solve e(μ) over a grid of couplings and emit one row per μ
    Sweep(SweepArgs),
    /// Coefficient report and expansion-vs-solver comparison for one regime
    Asymp(AsympArgs),
    /// Finite-lattice convergence against the continuum solution
    Oracle(OracleArgs),
    /// Exact series printout from the expression catalog
    Series(SeriesArgs),
}

#[derive(Args)]
struct GridArgs {
    /// Explicit couplings, comma separated (μ = 0 is rejected)
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    mu: Vec<f64>,

    /// Geometric range "start:stop:count:side" with side = positive|negative
    /// (start/stop are magnitudes)
    #[arg(long = "mu-range")]
    mu_range: Option<String>,
}

#[derive(Args)]
struct SweepArgs {
    #[command(flatten)]
    grid: GridArgs,

    /// Secular-determinant tolerance for the solver
    #[arg(long, default_value_t = 1e-12)]
    tol: f64,

    /// Also evaluate the truncated expansion of this order per row
    #[arg(long)]
    order: Option<usize>,

    /// Also solve the truncated lattice of this half-width per row
    #[arg(long = "N")]
    n_half: Option<usize>,

    #[command(flatten)]
    out: OutArgs,
}

#[derive(Args)]
struct AsympArgs {
    /// Which side of μ = 0: negative | positive
    #[arg(long)]
    regime: String,

    /// Expansion order (number of derived coefficients)
    #[arg(long, default_value_t = 4)]
    order: usize,

    #[command(flatten)]
    grid: GridArgs,

    /// Solver tolerance for the comparison column
    #[arg(long, default_value_t = 1e-12)]
    tol: f64,

    #[command(flatten)]
    out: OutArgs,
}

#[derive(Args)]
struct OracleArgs {
    /// Lattice half-widths, comma separated
    #[arg(long = "N", value_delimiter = ',', required = true)]
    n_list: Vec<usize>,

    /// Coupling
    #[arg(long, allow_hyphen_values = true)]
    mu: f64,

    /// Energies for the Green's-function comparison, comma separated
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true, default_values_t = [-4.0])]
    z: Vec<f64>,

    /// Root tolerance for the truncated secular equation
    #[arg(long, default_value_t = 1e-12)]
    tol: f64,

    #[command(flatten)]
    out: OutArgs,
}

#[derive(Args)]
struct SeriesArgs {
    /// Catalog expression, e.g. "binomial 1/2 3", "secular-negative 2",
    /// "secular-positive 4"
    #[arg(required = true, trailing_var_arg = true)]
    expression: Vec<String>,

    /// Decimal digits for the float images
    #[arg(long, default_value_t = 30)]
    digits: usize,

    #[command(flatten)]
    out: OutArgs,
}

#[derive(Args)]
struct OutArgs {
    /// csv (default) or json (one object per row)
    #[arg(long, default_value = "csv")]
    format: String,

    /// Output path; standard output when omitted
    #[arg(long)]
    output: Option<std::path::PathBuf>,
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(err) => {
            // keep help/version on stdout with success, everything else is
            // a usage error with exit code 1
            use clap::error::ErrorKind;
            match err.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    print!("{err}");
                    return ExitCode::SUCCESS;
                }
                _ => {
                    eprint!("{err}");
                    return ExitCode::from(1);
                }
            }
        }
    };
    let outcome = match cli.command {
        Command::Sweep(args) => commands::sweep(args),
        Command::Asymp(args) => commands::asymp(args),
        Command::Oracle(args) => commands::oracle(args),
        Command::Series(args) => commands::series(args),
    };
    match outcome {
        Ok(code) => ExitCode::from(code),
        Err(commands::CliError::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
        Err(commands::CliError::Internal(msg)) => {
            eprintln!("internal error: {msg}");
            ExitCode::from(3)
        }
    }
}
