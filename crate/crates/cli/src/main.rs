//! `backaction` command-line tool.
//!
//! Exit codes: 0 on success, 1 on bad input or a failed scenario check,
//! 2 when a numerical routine could not certify its result.

mod commands;
mod gatefile;
mod output;

use std::path::PathBuf;
use std::process::ExitCode;

use backaction::bounds::ForwardVariant;
use backaction::Units;
use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Input(String),
    #[error("{0}")]
    Output(String),
    #[error("{0}")]
    Library(#[from] backaction::Error),
    #[error("{0} check(s) failed")]
    ChecksFailed(usize),
}

impl CliError {
    fn exit_code(&self) -> u8 {
        match self {
            CliError::Library(backaction::Error::Numerical(_)) => 2,
            _ => 1,
        }
    }
}

#[derive(Debug, Parser)]
#[command(name = "backaction", version, about = "Forward and backward information flow through controlled-unitary gates")]
pub struct Cli {
    /// Logarithm base for every reported quantity.
    #[arg(long, global = true, default_value = "bits")]
    units: Units,
    /// Worker threads for parallel sections (default: all cores).
    #[arg(long, global = true)]
    threads: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum TableFormat {
    Csv,
    Json,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ReportFormat {
    Text,
    Json,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum VariantChoice {
    Paper,
    Corrected,
    Both,
}

impl VariantChoice {
    fn includes(self, v: ForwardVariant) -> bool {
        matches!(
            (self, v),
            (VariantChoice::Both, _)
                | (VariantChoice::Paper, ForwardVariant::Paper)
                | (VariantChoice::Corrected, ForwardVariant::Corrected)
        )
    }
}

#[derive(Debug, Args)]
pub struct SearchArgs {
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Random starts on top of the two structured ones.
    #[arg(long, default_value_t = 4)]
    restarts: usize,
    /// Perturbation steps per start.
    #[arg(long, default_value_t = 200)]
    iters: usize,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Capacity ratio table for the regular gate of S_n, n = 2..=max-n.
    Ratio {
        #[arg(long)]
        max_n: usize,
        #[arg(long, value_enum, default_value = "csv")]
        format: TableFormat,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Irrep degrees and capacities of a finite group's regular gate.
    Group {
        /// cyc:n, dih:n, sym:n, q8 or file:PATH (Cayley table).
        #[arg(long)]
        group: String,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, value_enum, default_value = "text")]
        format: ReportFormat,
    },
    /// Phase spread and the bounds derived from it.
    Bounds {
        #[arg(long)]
        gate: PathBuf,
        #[arg(long, value_enum, default_value = "both")]
        variant: VariantChoice,
        #[arg(long, value_enum, default_value = "text")]
        format: ReportFormat,
    },
    /// Run a worked example and print its JSON report.
    Demo {
        /// s3, s3perm, cnot, shift:n or harrow-shor:n.
        scenario: String,
        #[arg(long)]
        out: Option<PathBuf>,
        #[command(flatten)]
        search: SearchArgs,
    },
    /// Heuristic search for a large backward Holevo quantity.
    Search {
        #[arg(long)]
        gate: PathBuf,
        #[command(flatten)]
        search: SearchArgs,
        #[arg(long, value_enum, default_value = "text")]
        format: ReportFormat,
    },
}

fn run(cli: Cli) -> Result<(), CliError> {
    let units = cli.units;
    match cli.command {
        Command::Ratio { max_n, format, out } => commands::ratio(max_n, units, format, out.as_deref()),
        Command::Group { group, seed, format } => commands::group(&group, seed, units, format),
        Command::Bounds { gate, variant, format } => commands::bounds(&gate, variant, units, format),
        Command::Demo { scenario, out, search } => commands::demo(&scenario, &search, units, out.as_deref()),
        Command::Search { gate, search, format } => commands::search(&gate, &search, units, format),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(1) } else { ExitCode::SUCCESS };
        }
    };
    let result = match cli.threads {
        Some(t) => match rayon::ThreadPoolBuilder::new().num_threads(t).build() {
            Ok(pool) => pool.install(|| run(cli)),
            Err(e) => Err(CliError::Input(format!("cannot build thread pool: {e}"))),
        },
        None => run(cli),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
