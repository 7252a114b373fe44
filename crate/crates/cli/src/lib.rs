//! Command-line front end: reproduces the count tables, builds main-class
//! catalogs and checks the closed forms against fresh counts.
//!
//! Exit codes: 0 success, 1 verification mismatch, 2 resource limit or
//! unsupported scale, 3 bad arguments.

use std::ffi::OsString;
use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::num::NonZeroUsize;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

mod commands;
mod output;

pub use output::{Column, Format};

pub const EXIT_OK: i32 = 0;
pub const EXIT_MISMATCH: i32 = 1;
pub const EXIT_RESOURCE: i32 = 2;
pub const EXIT_BAD_ARGS: i32 = 3;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Core(#[from] soplr::Error),
    #[error("i/o: {0}")]
    Io(#[from] io::Error),
    #[error("json: {0}")]
    Json(#[from] serde_json::Error),
    #[error("mismatch: {0}")]
    Mismatch(String),
    #[error("resource limit: {0}")]
    Resource(String),
    #[error("bad arguments: {0}")]
    BadArgs(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        use soplr::Error as E;
        match self {
            CliError::Mismatch(_) | CliError::Core(E::Mismatch(_)) => EXIT_MISMATCH,
            CliError::Resource(_) | CliError::Core(E::Capacity { .. } | E::Unsupported(_)) => EXIT_RESOURCE,
            CliError::Io(_) | CliError::Json(_) => EXIT_RESOURCE,
            CliError::BadArgs(_) | CliError::Core(_) => EXIT_BAD_ARGS,
        }
    }
}

pub type CliResult<T> = std::result::Result<T, CliError>;

/// Everything one invocation needs.
#[derive(Debug, Parser)]
#[command(name = "soplr", version, about = "Count and classify (self-orthogonal) partial Latin rectangles")]
pub struct RunConfig {
    #[command(flatten)]
    pub global: GlobalArgs,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Args)]
pub struct GlobalArgs {
    /// Output format.
    #[arg(long, value_enum, default_value_t = Format::Csv, global = true)]
    pub format: Format,
    /// Worker threads (defaults to the number of CPUs).
    #[arg(long, env = "SOPLR_WORKERS", global = true)]
    pub workers: Option<NonZeroUsize>,
    /// Maximum number of memoized subproblems in the independence recursion.
    #[arg(long, default_value_t = 1 << 22, global = true)]
    pub memo_budget: usize,
    /// Write results here instead of standard output.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Strategy {
    /// One backtracking search over the whole square.
    Direct,
    /// Count by number of distinct symbols and recombine.
    Stratified,
    /// Split the square into diagonal corners and off-diagonal blocks.
    SumBlocks,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Size distributions of all r x s rectangles on n symbols, r <= s <= n <= bound.
    Table1 {
        #[arg(long, default_value_t = 4)]
        bound: usize,
        /// Also count by backtracking search and compare.
        #[arg(long)]
        cross_check: bool,
        /// Largest size to count.
        #[arg(long)]
        max_size: Option<usize>,
        /// Give up after this many recursion subproblems per column.
        #[arg(long)]
        node_limit: Option<u64>,
    },
    /// Size distribution of the self-orthogonal r x r rectangles on n symbols.
    TableSor {
        r: usize,
        n: usize,
        #[arg(long, value_enum, default_value_t = Strategy::Direct)]
        strategy: Strategy,
        /// Order of the lower-right corner for sum-blocks (default r / 2).
        #[arg(long)]
        split: Option<usize>,
        /// Visit corner pairs only up to renaming symbols (sum-blocks).
        #[arg(long)]
        reduce_symbols: bool,
        /// Emit one column for every symbol count 1..=n.
        #[arg(long)]
        through: bool,
        /// Recompute with a second strategy and compare.
        #[arg(long)]
        cross_check: bool,
        /// Largest size to count.
        #[arg(long)]
        max_size: Option<usize>,
        /// Run even beyond the feasible bounds.
        #[arg(long)]
        force: bool,
    },
    /// Main classes and sigma values for every number of symbols, r <= 3.
    Classify {
        r: usize,
        /// Also count each level by direct search and compare.
        #[arg(long)]
        cross_check: bool,
    },
    /// Checks every closed form against fresh counts.
    VerifyFormulas {
        /// Largest number of symbols for the total polynomials.
        #[arg(long, default_value_t = 9)]
        max_n: usize,
        /// Bound on r, s, n for the small-size closed forms.
        #[arg(long, default_value_t = 5)]
        plr_bound: usize,
    },
}

/// Parses `args` (program name first) and runs, returning the exit code.
pub fn run<I, T>(args: I, stdout: &mut (dyn Write + Send), stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let config = match RunConfig::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            use clap::error::ErrorKind;
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => EXIT_OK,
                _ => EXIT_BAD_ARGS,
            };
            let rendered = e.render().to_string();
            let sink: &mut dyn Write = if code == EXIT_OK { stdout } else { stderr };
            let _ = sink.write_all(rendered.as_bytes());
            return code;
        }
    };
    match execute(&config, stdout) {
        Ok(()) => EXIT_OK,
        Err(e) => {
            let _ = writeln!(stderr, "soplr: {e}");
            e.exit_code()
        }
    }
}

/// Runs a parsed configuration on its own worker pool.
pub fn execute(config: &RunConfig, stdout: &mut (dyn Write + Send)) -> CliResult<()> {
    let mut builder = rayon::ThreadPoolBuilder::new();
    if let Some(w) = config.global.workers {
        builder = builder.num_threads(w.get());
    }
    let pool = builder
        .build()
        .map_err(|e| CliError::Resource(format!("worker pool: {e}")))?;
    let mut file_sink;
    let sink: &mut (dyn Write + Send) = match &config.global.out {
        Some(path) => {
            file_sink = BufWriter::new(File::create(path)?);
            &mut file_sink
        }
        None => stdout,
    };
    let result = pool.install(|| commands::dispatch(config, sink));
    sink.flush()?;
    result
}
