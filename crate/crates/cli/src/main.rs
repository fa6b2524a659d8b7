//! `freqlaw` command-line front end.
//!
//! Exit codes: 0 on success, 1 on usage errors, 2 on data errors.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

mod commands;
mod input;

use std::fs::File;
use std::io::{self, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::error::ErrorKind;
use clap::{Args, Parser, Subcommand, ValueEnum};
use freqlaw::Tokenizer;

#[derive(Debug, Parser)]
#[command(
    name = "freqlaw",
    version,
    about = "Frequency reestimation, smoothing and rank-law tools"
)]
struct Cli {
    #[command(flatten)]
    global: GlobalArgs,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Clone, Args)]
pub struct GlobalArgs {
    /// Output format (commands pick their own default)
    #[arg(long, value_enum, global = true)]
    pub format: Option<Format>,
    /// Write output here instead of standard output
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    /// How `<file>` inputs are read
    #[arg(long, value_enum, global = true, default_value_t = InputKind::Text)]
    pub input: InputKind,
    #[arg(long, value_enum, global = true, default_value_t = TokenizerArg::Whitespace)]
    pub tokenizer: TokenizerArg,
    #[arg(long, global = true)]
    pub lowercase: bool,
    /// Drop species seen fewer times than this
    #[arg(long, global = true, default_value_t = 0)]
    pub min_count: u64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum InputKind {
    /// Running text, tokenized per --tokenizer
    Text,
    /// CSV with `species,count` columns, as written by `simulate --emit counts`
    Counts,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum TokenizerArg {
    Whitespace,
    UnicodeWord,
}

impl From<TokenizerArg> for Tokenizer {
    fn from(t: TokenizerArg) -> Self {
        match t {
            TokenizerArg::Whitespace => Tokenizer::Whitespace,
            TokenizerArg::UnicodeWord => Tokenizer::UnicodeWord,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Method {
    GoodTuring,
    GeometricTail,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Check {
    TuringBound,
    GeneralBound,
    Product,
    Integral,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Emit {
    Histogram,
    Counts,
    Corpus,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Law {
    Fitted,
    Turing,
    Zipf,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Frequency-of-frequencies table, rank series and summary statistics
    Analyze {
        /// Input file, or `-` for standard input
        file: PathBuf,
    },
    /// Reestimated counts x* for every observed x
    Reestimate {
        file: PathBuf,
        #[arg(long, allow_negative_numbers = true)]
        theta: f64,
        /// Fill empty histogram cells by log-log interpolation first
        #[arg(long)]
        smooth_gaps: bool,
    },
    /// Smoothed species probabilities and unseen mass
    Smooth {
        file: PathBuf,
        #[arg(long, value_enum)]
        method: Method,
        /// Geometric parameter; defaults to 1/N_1
        #[arg(long, allow_negative_numbers = true)]
        p: Option<f64>,
        /// Species kept at their relative frequency before the geometric tail
        #[arg(long, default_value_t = 0)]
        head: usize,
        /// Counts used to break ties in the ranking
        #[arg(long)]
        backoff: Option<PathBuf>,
    },
    /// Fit θ to the tail of the rank-frequency series
    Fit {
        file: PathBuf,
        #[arg(long)]
        tail_start: Option<u64>,
    },
    /// Numerical checks of the reestimation bounds and convergence results
    Verify {
        #[arg(long, value_enum)]
        check: Check,
        #[arg(long, allow_negative_numbers = true)]
        theta: Option<f64>,
        #[arg(long)]
        x_min: Option<u64>,
        #[arg(long)]
        x_max: Option<u64>,
        /// Absolute slack added to the bound
        #[arg(long, allow_negative_numbers = true)]
        epsilon: Option<f64>,
        /// Number of decades probed by `--check integral`
        #[arg(long, default_value_t = 8)]
        decades: u32,
    },
    /// Sample a population following the asymptote for θ
    Simulate {
        #[arg(long, allow_negative_numbers = true)]
        theta: f64,
        #[arg(long)]
        species: usize,
        #[arg(long)]
        tokens: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// N_1 of the Turing asymptote used at θ = 1
        #[arg(long, default_value_t = 100.0)]
        n1: f64,
        /// Add the reestimation report (histogram output only)
        #[arg(long)]
        reestimate: bool,
        #[arg(long, value_enum, default_value_t = Emit::Histogram)]
        emit: Emit,
    },
    /// (r, f_empirical, f_model) as TSV for external plotting
    ExportPlot {
        file: PathBuf,
        #[arg(long, value_enum)]
        law: Law,
        #[arg(long)]
        r_max: u64,
        /// Tail start for `--law fitted`
        #[arg(long)]
        tail_start: Option<u64>,
    },
}

/// Errors that map to distinct exit codes.
#[derive(Debug)]
pub enum CliError {
    Usage(String),
    Data(anyhow::Error),
}

impl<E: Into<anyhow::Error>> From<E> for CliError {
    fn from(e: E) -> Self {
        CliError::Data(e.into())
    }
}

fn one_line(s: &str) -> String {
    s.lines()
        .map(str::trim)
        .find(|l| !l.is_empty())
        .unwrap_or("invalid arguments")
        .to_owned()
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) => {
            let _ = e.print();
            return ExitCode::SUCCESS;
        }
        Err(e) => {
            eprintln!(
                "freqlaw: {}",
                one_line(&e.to_string()).trim_start_matches("error: ")
            );
            return ExitCode::from(1);
        }
    };

    let result = commands::run(&cli.command, &cli.global).and_then(|bytes| {
        match &cli.global.out {
            Some(path) => File::create(path)
                .and_then(|mut f| f.write_all(&bytes))
                .map_err(|e| anyhow::anyhow!("cannot write {}: {e}", path.display()))?,
            None => {
                let mut stdout = io::stdout().lock();
                stdout.write_all(&bytes)?;
                stdout.flush()?;
            }
        }
        Ok(())
    });

    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(CliError::Usage(msg)) => {
            eprintln!("freqlaw: {msg}");
            ExitCode::from(1)
        }
        Err(CliError::Data(e)) => {
            eprintln!("freqlaw: {}", one_line(&format!("{e:#}")));
            ExitCode::from(2)
        }
    }
}
