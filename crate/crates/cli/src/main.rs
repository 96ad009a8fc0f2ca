//! `splinosc`: damping-spectrum export, interpolation exactness reports,
//! periodic steady-state solves, and amplitude-vs-grid sweeps, as CSV/JSON
//! for external plotting.
//!
//! Exit codes: 0 success, 1 runtime failure, 2 usage error, 3 solver ran out
//! of iterations. Every failure prints a single JSON object to standard
//! error. Identical invocations produce byte-identical outputs.

use clap::error::ErrorKind;
use clap::{Args, Parser, Subcommand, ValueEnum};
use splinosc::Family;

mod commands;

use commands::{run_damping, run_interp, run_pss, run_sweep, write_stdout, CliError};

#[derive(Parser)]
#[command(name = "splinosc", version, about = "Periodic spline collocation toolkit")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Export the eigenvalues of the samples-to-derivative map per grid frequency.
    Damping(DampingArgs),
    /// Report worst-case interpolation error for constant and fundamental signals.
    Interp(InterpArgs),
    /// Solve for a periodic steady state of a built-in oscillator model.
    Pss(PssArgs),
    /// Run steady-state solves across grid sizes and families, one summary row each.
    Sweep(SweepArgs),
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum FamilyArg {
    /// Cardinal polynomial B-splines.
    Poly,
    /// Trigonometric B-splines on the 1-periodic grid.
    Trig,
}

impl FamilyArg {
    fn into_family(self) -> Family {
        match self {
            FamilyArg::Poly => Family::Polynomial,
            FamilyArg::Trig => Family::Trigonometric,
        }
    }
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum FormatArg {
    Csv,
    Json,
}

#[derive(Args)]
struct BasisArgs {
    /// Basis family.
    #[arg(long, value_enum)]
    family: FamilyArg,
    /// Spline order (>= 2).
    #[arg(long)]
    m: usize,
    /// Grid size (> m).
    #[arg(long)]
    n: usize,
    /// Collocation shift in (-1/2, 1/2); negative values damp high frequencies.
    #[arg(long, allow_negative_numbers = true)]
    sigma: f64,
}

#[derive(Args)]
struct DampingArgs {
    #[command(flatten)]
    basis: BasisArgs,
    /// Output file; standard output when omitted.
    #[arg(long)]
    out: Option<String>,
    #[arg(long, value_enum, default_value = "csv")]
    format: FormatArg,
}

#[derive(Args)]
struct InterpArgs {
    #[command(flatten)]
    basis: BasisArgs,
    /// Output file; standard output when omitted.
    #[arg(long)]
    out: Option<String>,
    #[arg(long, value_enum, default_value = "csv")]
    format: FormatArg,
}

#[derive(Args)]
struct PssArgs {
    /// Model name (see the usage error of a bogus name for the list).
    #[arg(long)]
    model: String,
    /// Model parameter as name=value; repeatable.
    #[arg(long = "param", value_name = "NAME=VALUE")]
    param: Vec<String>,
    #[command(flatten)]
    basis: BasisArgs,
    /// Output stem; writes <stem>.json and <stem>.csv when given.
    #[arg(long)]
    out: Option<String>,
}

#[derive(Args)]
struct SweepArgs {
    /// Model name.
    #[arg(long)]
    model: String,
    /// Model parameter as name=value; repeatable.
    #[arg(long = "param", value_name = "NAME=VALUE")]
    param: Vec<String>,
    /// Basis family; repeatable to sweep several.
    #[arg(long = "family", value_enum, required = true)]
    family: Vec<FamilyArg>,
    /// Spline order (>= 2).
    #[arg(long)]
    m: usize,
    /// Collocation shift in (-1/2, 1/2).
    #[arg(long, allow_negative_numbers = true)]
    sigma: f64,
    /// Comma-separated grid sizes.
    #[arg(long = "n-list", value_delimiter = ',', required = true)]
    n_list: Vec<usize>,
    /// Output file; standard output when omitted.
    #[arg(long)]
    out: Option<String>,
    #[arg(long, value_enum, default_value = "csv")]
    format: FormatArg,
}

fn main() {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => match e.kind() {
            ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                let _ = write_stdout(&e.to_string());
                std::process::exit(0);
            }
            _ => {
                let first = e.to_string();
                let line = first.lines().next().unwrap_or("invalid arguments").trim();
                fail(&CliError::Usage(line.to_string()));
            }
        },
    };
    let outcome = match cli.command {
        Command::Damping(args) => run_damping(&args),
        Command::Interp(args) => run_interp(&args),
        Command::Pss(args) => run_pss(&args),
        Command::Sweep(args) => run_sweep(&args),
    };
    if let Err(e) = outcome {
        fail(&e);
    }
}

fn fail(e: &CliError) -> ! {
    eprintln!("{}", serde_json::json!({ "error": e.message() }));
    std::process::exit(e.code());
}
