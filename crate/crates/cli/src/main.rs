//! `gdap`: embed series, solve the index equation, decompose and verify.

mod commands;
mod error;
mod io;
mod verify;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::error::{exit, CliError};
use crate::verify::Suite;

#[derive(Debug, Parser)]
#[command(
    name = "gdap",
    version,
    about = "Trajectory-matrix embedding and generalized diagonal averaging"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

#[derive(Debug, Args)]
pub struct EmbeddingArgs {
    /// Embedding dimension (number of rows).
    #[arg(long, short = 'd')]
    pub d: i64,
    /// Embedding delay.
    #[arg(long, short = 't', default_value_t = 1)]
    pub tau: i64,
    /// Index convention: 0 for x[0..N-1], 1 for x[1..N].
    #[arg(long, short = 's', default_value_t = 0)]
    pub convention: i64,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Build the trajectory matrix of a series.
    Embed {
        /// Input file with one sample per line (optional header line).
        #[arg(long, short = 'i')]
        input: PathBuf,
        /// Output file; standard output when omitted.
        #[arg(long, short = 'o')]
        output: Option<PathBuf>,
        #[command(flatten)]
        embedding: EmbeddingArgs,
        #[arg(long, value_enum, default_value_t = Format::Csv)]
        format: Format,
    },
    /// List the solutions of tau*x + y = n + s*tau inside a rectangle.
    Solve {
        #[arg(long, allow_negative_numbers = true)]
        n: i64,
        #[arg(long)]
        tau: i64,
        #[arg(long, default_value_t = 0)]
        s: i64,
        /// Rectangle as alpha1,alpha2,beta1,beta2 (x range then y range).
        #[arg(
            long,
            value_delimiter = ',',
            allow_negative_numbers = true,
            required = true
        )]
        rect: Vec<i64>,
        #[arg(long, value_enum, default_value_t = Format::Csv)]
        format: Format,
    },
    /// Decompose a series into additive components.
    Decompose {
        #[arg(long, short = 'i')]
        input: PathBuf,
        #[arg(long, short = 'o')]
        output: Option<PathBuf>,
        #[command(flatten)]
        embedding: EmbeddingArgs,
        /// Decomposition backend.
        #[arg(long, default_value = "svd")]
        backend: String,
        /// Groups of 1-based component labels, e.g. "1,2;3-5".
        #[arg(long)]
        groups: Option<String>,
        /// Use classical anti-diagonal averaging instead of the pull-back.
        #[arg(long)]
        legacy: bool,
        /// Allow --legacy outside s=1, tau=1.
        #[arg(long, requires = "legacy")]
        force: bool,
        #[arg(long, value_enum, default_value_t = Format::Csv)]
        format: Format,
    },
    /// Turn a component matrix (CSV, one row per line) back into a series.
    Reconstruct {
        #[arg(long, short = 'i')]
        input: PathBuf,
        #[arg(long, short = 'o')]
        output: Option<PathBuf>,
        #[arg(long, short = 't', default_value_t = 1)]
        tau: i64,
        #[arg(long, short = 's', default_value_t = 0)]
        convention: i64,
        #[arg(long)]
        legacy: bool,
        #[arg(long, requires = "legacy")]
        force: bool,
    },
    /// Print the solution tables for N=27, d=7, m=9, tau=3.
    Tables {
        /// Which convention to tabulate; both when omitted.
        #[arg(long)]
        s: Option<i64>,
        #[arg(long, short = 'o')]
        output: Option<PathBuf>,
    },
    /// Run seeded self-checks.
    Verify {
        /// RNG seed; GDAP_SEED overrides the built-in default.
        #[arg(long, env = "GDAP_SEED", default_value_t = verify::DEFAULT_SEED)]
        seed: u64,
        #[arg(long, value_enum, default_value_t = Suite::All)]
        suite: Suite,
        /// Random configurations per suite.
        #[arg(long, default_value_t = 200)]
        trials: usize,
        /// Restrict unit-cardinality to one embedding dimension.
        #[arg(long)]
        d: Option<usize>,
        /// Restrict unit-cardinality to one column count.
        #[arg(long)]
        m: Option<usize>,
    },
}

fn dispatch(cmd: Command) -> Result<(), CliError> {
    match cmd {
        Command::Embed {
            input,
            output,
            embedding,
            format,
        } => commands::embed(&input, output.as_deref(), &embedding, format),
        Command::Solve {
            n,
            tau,
            s,
            rect,
            format,
        } => commands::solve(n, tau, s, &rect, format),
        Command::Decompose {
            input,
            output,
            embedding,
            backend,
            groups,
            legacy,
            force,
            format,
        } => commands::decompose(&commands::DecomposeRequest {
            input: &input,
            output: output.as_deref(),
            embedding: &embedding,
            backend: &backend,
            groups: groups.as_deref(),
            legacy,
            force,
            format,
        }),
        Command::Reconstruct {
            input,
            output,
            tau,
            convention,
            legacy,
            force,
        } => commands::reconstruct(&input, output.as_deref(), tau, convention, legacy, force),
        Command::Tables { s, output } => commands::tables(s, output.as_deref()),
        Command::Verify {
            seed,
            suite,
            trials,
            d,
            m,
        } => commands::verify(suite, &verify::Options { seed, trials, d, m }),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() {
                exit::VALIDATION
            } else {
                exit::OK
            };
            let _ = e.print();
            return ExitCode::from(code as u8);
        }
    };
    match dispatch(cli.command) {
        Ok(()) => ExitCode::from(exit::OK as u8),
        Err(e) => {
            eprintln!("{}", e.to_json());
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
