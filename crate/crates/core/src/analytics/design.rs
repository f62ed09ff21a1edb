//! End-of-game supply centers against power and communication level.

use std::collections::BTreeMap;

use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};

use super::ols::{ols_fit, OlsFit, SeKind};
use super::AnalyticsError;
use crate::game::Power;
use crate::io::{csv_string, parse_csv};
use crate::sim::{parse_summary, summary_line, CommLevel, GameLog};

pub const BASELINE_POWER: Power = Power::Rus;
pub const BASELINE_LEVEL: CommLevel = CommLevel::RandomCorpus;

/// One finished game as the regression sees it.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GameRow {
    pub game_id: String,
    pub level: CommLevel,
    pub sc: BTreeMap<Power, usize>,
    pub talkers: Vec<Power>,
}

impl GameRow {
    pub fn from_log(log: &GameLog) -> GameRow {
        GameRow {
            game_id: log.game_id.clone(),
            level: log.level(),
            sc: log.final_sc.clone(),
            talkers: log.talkers(),
        }
    }

    /// From a "AUS 0, ENG 0, ... . (FRA GER TUR)" end-of-game line.
    pub fn from_summary(
        game_id: impl Into<String>,
        level: CommLevel,
        line: &str,
    ) -> Result<GameRow, AnalyticsError> {
        let (sc, talkers) =
            parse_summary(line).map_err(|e| AnalyticsError::SchemaMismatch(e.to_string()))?;
        Ok(GameRow {
            game_id: game_id.into(),
            level,
            sc,
            talkers,
        })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Design {
    pub x: DMatrix<f64>,
    pub y: DVector<f64>,
    pub terms: Vec<String>,
    pub rows: Vec<(String, Power)>,
}

/// Talking levels present in `games`, baseline first.
fn levels(games: &[GameRow]) -> Vec<CommLevel> {
    let mut present: Vec<CommLevel> = CommLevel::TALKING
        .into_iter()
        .filter(|l| games.iter().any(|g| g.level == *l))
        .collect();
    present.sort_by_key(|l| *l != BASELINE_LEVEL);
    present
}

/// One row per (game, power): intercept, six power dummies (Russia is
/// the baseline), then one dummy per talking level other than the random
/// corpus. Level dummies switch on only for the powers that talked, so
/// gunboat powers share the baseline with random-corpus talkers.
pub fn regression_design(games: &[GameRow]) -> Design {
    let powers: Vec<Power> = Power::ALL
        .into_iter()
        .filter(|&p| p != BASELINE_POWER)
        .collect();
    let lv: Vec<CommLevel> = levels(games)
        .into_iter()
        .filter(|&l| l != BASELINE_LEVEL)
        .collect();
    let mut terms = vec!["intercept".to_string()];
    terms.extend(powers.iter().map(|p| p.code().to_string()));
    terms.extend(lv.iter().map(|l| l.as_str().to_string()));
    let n = games.len() * 7;
    let p = terms.len();
    let mut x = DMatrix::zeros(n, p);
    let mut y = DVector::zeros(n);
    let mut rows = Vec::with_capacity(n);
    for (g, game) in games.iter().enumerate() {
        for (k, power) in Power::ALL.into_iter().enumerate() {
            let i = 7 * g + k;
            x[(i, 0)] = 1.0;
            if let Some(j) = powers.iter().position(|&q| q == power) {
                x[(i, 1 + j)] = 1.0;
            }
            if game.talkers.contains(&power) {
                if let Some(j) = lv.iter().position(|&l| l == game.level) {
                    x[(i, 1 + powers.len() + j)] = 1.0;
                }
            }
            y[i] = game.sc.get(&power).copied().unwrap_or(0) as f64;
            rows.push((game.game_id.clone(), power));
        }
    }
    Design { x, y, terms, rows }
}

pub fn regress(games: &[GameRow], se_kind: SeKind) -> Result<OlsFit, AnalyticsError> {
    let d = regression_design(games);
    ols_fit(&d.x, &d.y, &d.terms, se_kind)
}

const SUMMARY_HEADER: [&str; 3] = ["game_id", "level", "summary"];

/// game_id, level, summary-line CSV, one game per row.
pub fn summaries_csv(games: &[GameRow]) -> String {
    let rows: Vec<Vec<String>> = games
        .iter()
        .map(|g| {
            vec![
                g.game_id.clone(),
                g.level.to_string(),
                summary_line(&g.sc, &g.talkers),
            ]
        })
        .collect();
    csv_string(&SUMMARY_HEADER, &rows)
}

pub fn parse_summaries_csv(text: &str) -> Result<Vec<GameRow>, AnalyticsError> {
    let (header, rows) = parse_csv(text)?;
    if header != SUMMARY_HEADER {
        return Err(AnalyticsError::SchemaMismatch(format!(
            "summary columns {header:?}, want {SUMMARY_HEADER:?}"
        )));
    }
    rows.iter()
        .map(|r| {
            let level = r[1]
                .parse()
                .map_err(|e: crate::sim::SimError| AnalyticsError::SchemaMismatch(e.to_string()))?;
            GameRow::from_summary(&r[0], level, &r[2])
        })
        .collect()
}
