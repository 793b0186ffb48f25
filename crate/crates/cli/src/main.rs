//! `psic`: generate, certify and reconstruct with finite-outcome POVMs.
//!
//! Exit codes: 0 success or property holds, 1 usage or I/O error, 2 property
//! refuted (a witness is in the report), 3 undetermined.

mod commands;
mod output;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Parser, Debug)]
#[command(name = "psic", version, about = "Informational completeness of quantum measurements")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug, Clone)]
struct Output {
    /// Write the JSON document here; the summary then goes to stdout.
    /// Without it the JSON goes to stdout and the summary to stderr.
    #[arg(long, short = 'o')]
    out: Option<PathBuf>,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Generate a POVM file.
    Gen {
        #[arg(value_enum)]
        kind: GenKind,
        #[arg(long, default_value_t = 3)]
        dim: usize,
        #[arg(long, default_value_t = 9)]
        outcomes: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Diagonal of the complement generator for `qutrit-psic`.
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true, default_value = "1,1,-2")]
        s: Vec<f64>,
        /// JSON list of Hermitian matrices spanning `R(A)` (for `from-span`).
        #[arg(long)]
        basis: Option<PathBuf>,
        #[command(flatten)]
        output: Output,
    },
    /// Decide IC, PSIC or VPSIC for a POVM file.
    Certify {
        povm: PathBuf,
        #[arg(long, value_enum, default_value_t = PropertyArg::Psic)]
        property: PropertyArg,
        /// Random starts for the low-rank search.
        #[arg(long, default_value_t = 64)]
        trials: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 1e-8)]
        tol: f64,
        #[command(flatten)]
        output: Output,
    },
    /// Tensor product of two POVM files.
    Tensor {
        a: PathBuf,
        b: PathBuf,
        #[command(flatten)]
        output: Output,
    },
    /// Run a consistency check on generated instances.
    Check(CheckArgs),
    /// Reconstruct a state from statistics.
    Reconstruct {
        povm: PathBuf,
        stats: PathBuf,
        #[arg(long, value_enum, default_value_t = Mode::Linear)]
        mode: Mode,
        #[arg(long, default_value_t = 16)]
        starts: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// State file to compare the estimate against.
        #[arg(long)]
        reference: Option<PathBuf>,
        #[command(flatten)]
        output: Output,
    },
    /// Outcome statistics of a state.
    Stats {
        povm: PathBuf,
        /// State file (density matrix, optionally amplitudes).
        #[arg(long, conflicts_with = "random")]
        state: Option<PathBuf>,
        /// Sample the state instead of reading it.
        #[arg(long, value_enum)]
        random: Option<RandomState>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Also write the state used.
        #[arg(long)]
        state_out: Option<PathBuf>,
        #[command(flatten)]
        output: Output,
    },
    /// List POVM invariant violations (exit 2 when there are any).
    Validate {
        povm: PathBuf,
        #[arg(long, default_value_t = 1e-9)]
        tol: f64,
        #[command(flatten)]
        output: Output,
    },
    /// Certify PSIC for a product of two non-IC PSIC factors (empirical only).
    Explore {
        #[arg(long, default_value_t = 4)]
        da: usize,
        #[arg(long, default_value_t = 4)]
        db: usize,
        #[arg(long, default_value_t = 64)]
        trials: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[command(flatten)]
        output: Output,
    },
}

#[derive(Args, Debug)]
struct CheckArgs {
    #[arg(value_enum)]
    which: CheckKind,
    /// Dimension of the first factor.
    #[arg(long)]
    da: Option<usize>,
    /// Dimension of the second factor.
    #[arg(long)]
    db: Option<usize>,
    /// Qutrit complement generator diagonal (check 2).
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true, default_value = "1,1,-2")]
    s: Vec<f64>,
    /// Factor dimensions for `multi`, e.g. 2,2,3.
    #[arg(long, value_delimiter = ',', default_value = "2,3")]
    factors: Vec<usize>,
    /// Replace B by a factor violating the hypothesis.
    #[arg(long)]
    corrupt_b: bool,
    /// Replace A by a factor violating the hypothesis.
    #[arg(long)]
    corrupt_a: bool,
    /// Check 3 with a case-(ii) qutrit A (not IC).
    #[arg(long)]
    case_two_a: bool,
    #[arg(long, default_value_t = 10_000)]
    pairs: usize,
    #[arg(long, default_value_t = 64)]
    starts: usize,
    /// Draws for the interlacing suite.
    #[arg(long, default_value_t = 1000)]
    draws: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[command(flatten)]
    output: Output,
}

#[derive(ValueEnum, Clone, Copy, Debug)]
enum GenKind {
    Sic2,
    Random,
    FromSpan,
    QutritPsic,
    Dim4Vpsic,
}

#[derive(ValueEnum, Clone, Copy, Debug)]
enum PropertyArg {
    Ic,
    Psic,
    Vpsic,
}

#[derive(ValueEnum, Clone, Copy, Debug)]
enum Mode {
    Linear,
    Pure,
}

#[derive(ValueEnum, Clone, Copy, Debug)]
enum RandomState {
    Pure,
    Mixed,
}

#[derive(ValueEnum, Clone, Copy, Debug)]
enum CheckKind {
    #[value(name = "1")]
    One,
    #[value(name = "2")]
    Two,
    #[value(name = "3")]
    Three,
    #[value(name = "4")]
    Four,
    Multi,
    Dims,
    Interlacing,
    Unitaries,
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match commands::run(cli.command) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
    }
}
