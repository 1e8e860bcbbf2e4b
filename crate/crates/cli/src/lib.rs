//! The `opinv` command-line tool.
//!
//! Every subcommand reads JSON inputs, runs one computation from
//! `opinv-core` and writes a JSON report (or a flat table) that embeds the
//! run configuration and a SHA-256 hash of each input. Reports are a pure
//! function of the inputs and the configuration.

pub mod commands;
pub mod config;
pub mod error;
pub mod inputs;
pub mod render;

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

pub use config::{Format, RunConfig};
pub use error::{exit, CliError};

#[derive(Debug, Parser)]
#[command(
    name = "opinv",
    version,
    about = "Symplectic invariants of symbols and comparison of linear differential operators",
    after_help = "Exit codes: 0 success, 2 proven distinct, 3 inconclusive, 64 usage, 65 data error, 70 internal.\n\
                  Set RAYON_NUM_THREADS to limit worker threads."
)]
pub struct Cli {
    #[command(flatten)]
    pub global: GlobalArgs,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Args)]
pub struct GlobalArgs {
    /// Main tolerance of the subcommand (see each subcommand for its default).
    #[arg(long, global = true)]
    pub tol: Option<f64>,
    /// Seed for randomized searches.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    /// Base-point grid as `from:to:count` per axis, comma separated.
    #[arg(long, global = true, value_name = "SPEC", allow_hyphen_values = true)]
    pub grid: Option<String>,
    /// JSON file with a signature configuration.
    #[arg(long = "signature-config", global = true, value_name = "FILE")]
    pub signature_config: Option<PathBuf>,
    /// Write the report here instead of standard output.
    #[arg(long, global = true, value_name = "FILE")]
    pub output: Option<PathBuf>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    pub format: Format,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum TransvectKind {
    Symplectic,
    Metric,
    Poisson,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Transvectant of two symbols.
    Transvect {
        p: PathBuf,
        q: PathBuf,
        /// Transvectant order (ignored for the Poisson bracket).
        #[arg(long, short = 'r', default_value_t = 1)]
        order: usize,
        #[arg(long, value_enum, default_value_t = TransvectKind::Symplectic)]
        kind: TransvectKind,
    },
    /// Exact invariant signature of a symbol.
    Invariants { symbol: PathBuf },
    /// Compare the signatures of two symbols (exact when --tol is 0, the default).
    Signature { a: PathBuf, b: PathBuf },
    /// Orbit and stabilizer dimensions of a symbol under sp(2n).
    OrbitDim { symbol: PathBuf },
    /// Search for a symplectic map taking P to Q (--tol defaults to 1e-6).
    Match {
        p: PathBuf,
        q: PathBuf,
        #[arg(long, default_value_t = 20)]
        restarts: usize,
        #[arg(long = "max-iters", default_value_t = 200)]
        max_iters: usize,
    },
    /// Wagner connection of a symbol field: symbolic, or pointwise with --grid.
    Wagner {
        field: PathBuf,
        /// Largest base degree of the polynomial ansatz in symbolic mode.
        #[arg(long = "max-degree", default_value_t = 3)]
        max_degree: usize,
    },
    /// Total symbol of an operator with respect to a connection (flat by default).
    Split {
        operator: PathBuf,
        #[arg(long, value_name = "FILE")]
        connection: Option<PathBuf>,
    },
    /// Model surface of an operator on --grid.
    Model {
        operator: PathBuf,
        /// Chart function: an invariant label such as `J(k=2,q=2)`, or a
        /// coordinate `x1`..`xn`. Give one per base dimension.
        #[arg(long = "chart", required = true, value_name = "LABEL")]
        charts: Vec<String>,
    },
    /// Compare two model surfaces (--tol defaults to 1e-6).
    ModelCompare { a: PathBuf, b: PathBuf },
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::Transvect { .. } => "transvect",
            Command::Invariants { .. } => "invariants",
            Command::Signature { .. } => "signature",
            Command::OrbitDim { .. } => "orbit-dim",
            Command::Match { .. } => "match",
            Command::Wagner { .. } => "wagner",
            Command::Split { .. } => "split",
            Command::Model { .. } => "model",
            Command::ModelCompare { .. } => "model-compare",
        }
    }
}

/// Rendered report and exit code of a finished run.
#[derive(Debug)]
pub struct Finished {
    pub text: String,
    pub exit: u8,
}

/// Runs a parsed command line. Output goes to `--output` when given,
/// otherwise it is returned for the caller to print.
pub fn run(cli: &Cli) -> Result<Finished, CliError> {
    let report = commands::execute(cli)?;
    let text = match cli.global.format {
        Format::Json => opinv_core::json::to_pretty(&report.json),
        Format::Table => render::table(&report.json),
    };
    if let Some(path) = &cli.global.output {
        std::fs::write(path, &text)
            .map_err(|e| CliError::Write { path: path.display().to_string(), message: e.to_string() })?;
        return Ok(Finished { text: String::new(), exit: report.exit });
    }
    Ok(Finished { text, exit: report.exit })
}
