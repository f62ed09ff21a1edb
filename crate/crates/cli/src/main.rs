//! dipintent: simulate, parse, ground, detect, score and summarize.

mod commands;

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use dipintent::analytics::AnalyticsError;
use dipintent::detect::DetectError;
use dipintent::game::{Power, Turn};
use dipintent::graph::GraphError;
use dipintent::io::IoError;
use dipintent::sim::{CommLevel, SimError};
use dipintent::smatch::SmatchError;
use serde_json::json;

/// Overrides the root that relative output paths are resolved against.
pub const OUT_ENV: &str = "DIPINTENT_OUT";

#[derive(Debug, Parser)]
#[command(
    name = "dipintent",
    version,
    about = "Diplomacy negotiation intents: simulate, parse, ground, detect, score"
)]
struct Cli {
    /// Pipeline config (TOML); flags override its values.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Debug, Subcommand)]
enum Cmd {
    /// Play a self-play batch and write games.jsonl and summaries.csv.
    Simulate(SimulateArgs),
    /// Extract intent graphs from message text, without grounding.
    Parse(MessageArgs),
    /// Extract and ground messages against a board.
    Ground(MessageArgs),
    /// Broken-commitment and persuasion events for a corpus or a batch.
    Detect(DetectArgs),
    /// Smatch between predicted and gold graph files.
    Smatch(SmatchArgs),
    /// Regression over a batch, or rate tables over an annotated corpus.
    Stats(StatsArgs),
    /// All report tables for a batch.
    Report(ReportArgs),
}

#[derive(Debug, Args)]
struct SimulateArgs {
    #[arg(long)]
    seed: Option<u64>,
    /// Games per level.
    #[arg(long)]
    games: Option<usize>,
    #[arg(long, value_delimiter = ',')]
    levels: Option<Vec<CommLevel>>,
    /// Movement turns per game.
    #[arg(long)]
    turns: Option<u32>,
    /// Negotiation rounds per turn.
    #[arg(long)]
    rounds: Option<u32>,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct MessageArgs {
    /// Corpus file (JSON Lines); every message in it is processed.
    #[arg(long = "in", conflicts_with = "text")]
    input: Option<PathBuf>,
    /// A single message.
    #[arg(long, requires_all = ["sender", "recipient"])]
    text: Option<String>,
    #[arg(long)]
    sender: Option<Power>,
    #[arg(long)]
    recipient: Option<Power>,
    /// Board for --text, as a state snapshot (JSON); defaults to the
    /// starting position.
    #[arg(long)]
    board: Option<PathBuf>,
    /// Turn for --text when no board is given.
    #[arg(long, default_value = "S1901M")]
    turn: Turn,
    /// Output file; defaults to stdout.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct DetectArgs {
    /// Corpus file, or a batch directory holding games.jsonl.
    #[arg(long = "in")]
    input: PathBuf,
    /// Output file; defaults to stdout.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct SmatchArgs {
    #[arg(long)]
    pred: PathBuf,
    #[arg(long)]
    gold: PathBuf,
    #[arg(long, default_value_t = 4)]
    restarts: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Exhaustive alignment instead of hill climbing (small graphs only).
    #[arg(long)]
    exact: bool,
}

#[derive(Debug, Args)]
struct StatsArgs {
    /// Batch directory, summaries CSV, or annotated corpus file.
    #[arg(long = "in")]
    input: PathBuf,
    /// Fit end-of-game supply centers on power and level dummies.
    #[arg(long)]
    regression: bool,
    /// Heteroskedasticity-robust standard errors.
    #[arg(long)]
    robust: bool,
    /// LOESS span for the identification curve.
    #[arg(long, default_value_t = 0.75)]
    span: f64,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct ReportArgs {
    /// Batch directory holding games.jsonl.
    #[arg(long = "in")]
    input: PathBuf,
    /// Events file from `detect`; recomputed from the logs if absent.
    #[arg(long)]
    events: Option<PathBuf>,
    #[arg(long)]
    robust: bool,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error(transparent)]
    Io(#[from] IoError),
    #[error(transparent)]
    Analytics(#[from] AnalyticsError),
    #[error(transparent)]
    Sim(#[from] SimError),
    #[error(transparent)]
    Detect(#[from] DetectError),
    #[error(transparent)]
    Smatch(#[from] SmatchError),
    #[error("{path}: {source}")]
    Graph { path: PathBuf, source: GraphError },
}

impl CliError {
    fn kind(&self) -> &'static str {
        match self {
            CliError::Usage(_) => "usage",
            CliError::Io(IoError::Schema { .. }) => "schema",
            CliError::Io(IoError::Version { .. }) => "schema_version",
            CliError::Io(IoError::Config(_)) => "config",
            CliError::Io(_) => "io",
            CliError::Analytics(AnalyticsError::RankDeficient { .. }) => "rank_deficient",
            CliError::Analytics(AnalyticsError::SchemaMismatch(_)) => "schema_mismatch",
            CliError::Analytics(_) => "analytics",
            CliError::Sim(_) => "simulation",
            CliError::Detect(_) => "detect",
            CliError::Smatch(_) => "smatch",
            CliError::Graph { .. } => "graph",
        }
    }

    fn to_json(&self) -> String {
        let mut v = json!({ "error": self.kind(), "message": self.to_string() });
        if let CliError::Io(IoError::Schema { line, .. } | IoError::Version { line, .. }) = self {
            v["line"] = json!(line);
        }
        v.to_string()
    }
}

/// `path` under the output root, if one is set and `path` is relative.
pub fn out_path(path: &Path) -> PathBuf {
    match std::env::var_os(OUT_ENV) {
        Some(root) if path.is_relative() => PathBuf::from(root).join(path),
        _ => path.to_path_buf(),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) if !e.use_stderr() => {
            // --help and --version
            let _ = e.print();
            return ExitCode::SUCCESS;
        }
        Err(e) => {
            let msg = e.to_string();
            let first = msg
                .lines()
                .next()
                .unwrap_or("bad arguments")
                .trim_start_matches("error: ");
            eprintln!("{}", CliError::Usage(first.to_string()).to_json());
            return ExitCode::from(2);
        }
    };
    match commands::run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("{}", e.to_json());
            ExitCode::FAILURE
        }
    }
}
