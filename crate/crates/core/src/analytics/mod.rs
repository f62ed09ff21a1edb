//! Regression, rates and curves over game logs and detector output.

mod design;
mod identity;
mod loess;
mod ols;
mod rates;
mod report;

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

pub use design::{
    parse_summaries_csv, regress, regression_design, summaries_csv, Design, GameRow,
    BASELINE_LEVEL, BASELINE_POWER,
};
pub use identity::{f_by_turn, Guess, TurnScore};
pub use loess::loess;
pub use ols::{ols_fit, t_cdf, t_quantile, Coefficient, OlsFit, SeKind};
pub use rates::{
    persuasion_summary, rate_table, Dyad, PersuasionCell, PersuasionItem, Rate, RateCell, RateItem,
    RateTable,
};
pub use report::{report, write_coefficients, write_f_by_turn, ReportInput, ReportSummary};

#[derive(Debug, thiserror::Error)]
pub enum AnalyticsError {
    #[error("design matrix has rank {rank} of {cols} columns")]
    RankDeficient { rank: usize, cols: usize },
    #[error("{rows} rows, need at least {need}")]
    TooFewRows { rows: usize, need: usize },
    #[error("design is {rows}x{cols} with {names} names and {responses} responses")]
    Shape {
        rows: usize,
        cols: usize,
        names: usize,
        responses: usize,
    },
    #[error("schema mismatch: {0}")]
    SchemaMismatch(String),
    #[error(transparent)]
    Io(#[from] crate::io::IoError),
}

/// Whether a player is a person or a bot.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Class {
    Human,
    Agent,
}

impl Class {
    pub fn as_str(self) -> &'static str {
        match self {
            Class::Human => "human",
            Class::Agent => "agent",
        }
    }
}

impl fmt::Display for Class {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Class {
    type Err = String;

    fn from_str(s: &str) -> Result<Class, String> {
        match s {
            "human" => Ok(Class::Human),
            "agent" => Ok(Class::Agent),
            _ => Err(format!("unknown player class {s:?}")),
        }
    }
}
