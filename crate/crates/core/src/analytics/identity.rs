//! How well players tell agents from humans, turn by turn.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use super::loess::loess;
use super::Class;
use crate::game::{Power, Turn};

/// One player's guess about one opposing power at one turn.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Guess {
    pub game_id: String,
    pub annotator: Power,
    pub target: Power,
    pub turn: Turn,
    pub guess: Class,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TurnScore {
    pub turn: Turn,
    pub tp: u64,
    pub fp: u64,
    #[serde(rename = "fn")]
    pub fn_: u64,
    pub tn: u64,
    pub f: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub smoothed: Option<f64>,
}

/// F-score of "agent" guesses against the true class of each (game,
/// power), pooled over games per turn. Guesses about powers with no known
/// class are ignored. `span` turns on LOESS smoothing over turn order.
pub fn f_by_turn(
    guesses: &[Guess],
    truth: &BTreeMap<(String, Power), Class>,
    span: Option<f64>,
) -> Vec<TurnScore> {
    let mut by_turn: BTreeMap<Turn, [u64; 4]> = BTreeMap::new();
    for g in guesses {
        let Some(&t) = truth.get(&(g.game_id.clone(), g.target)) else {
            continue;
        };
        let c = by_turn.entry(g.turn).or_default();
        match (g.guess == Class::Agent, t == Class::Agent) {
            (true, true) => c[0] += 1,
            (true, false) => c[1] += 1,
            (false, true) => c[2] += 1,
            (false, false) => c[3] += 1,
        }
    }
    let mut out: Vec<TurnScore> = by_turn
        .into_iter()
        .map(|(turn, [tp, fp, fn_, tn])| {
            let d = 2 * tp + fp + fn_;
            TurnScore {
                turn,
                tp,
                fp,
                fn_,
                tn,
                f: if d == 0 {
                    0.0
                } else {
                    (2 * tp) as f64 / d as f64
                },
                smoothed: None,
            }
        })
        .collect();
    if let Some(span) = span {
        let xs: Vec<f64> = (0..out.len()).map(|i| i as f64).collect();
        let ys: Vec<f64> = out.iter().map(|s| s.f).collect();
        for (s, v) in out.iter_mut().zip(loess(&xs, &ys, span)) {
            s.smoothed = Some(v);
        }
    }
    out
}
