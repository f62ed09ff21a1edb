//! Versioned file formats, corpus ingestion and pipeline configuration.

mod config;
mod corpus;
mod schema;

use std::path::PathBuf;

pub use config::PipelineConfig;
pub use corpus::{
    ingest_corpus, ingest_corpus_str, AnnotationRecord, Corpus, CorpusCounts, Diagnostic,
    GameEvent, Incoming, LedgerRecord, Outgoing, PlayerRecord, Record, StateRecord, TurnActs,
};
pub use schema::{
    check_version, csv_string, parse_csv, parse_jsonl, read_jsonl, read_text, write_jsonl,
    write_text, Header, SCHEMA_MAJOR, SCHEMA_VERSION,
};

use crate::detect::DetectError;
use crate::game::Turn;

#[derive(Debug, thiserror::Error)]
pub enum IoError {
    #[error("{path}: {source}")]
    File {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("line {line}: {message}")]
    Schema { line: usize, message: String },
    #[error("line {line}: schema version {found} is not {SCHEMA_MAJOR}.x")]
    Version { line: usize, found: String },
    #[error("config: {0}")]
    Config(String),
    #[error("game {game_id} has no board for {turn}")]
    MissingState { game_id: String, turn: Turn },
    #[error(transparent)]
    Detect(#[from] DetectError),
    #[error(transparent)]
    Csv(#[from] csv::Error),
}

impl IoError {
    pub(crate) fn file(path: impl Into<PathBuf>, source: std::io::Error) -> IoError {
        IoError::File {
            path: path.into(),
            source,
        }
    }
}
