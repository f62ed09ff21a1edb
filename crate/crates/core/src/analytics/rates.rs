//! Message-normalized rates by dyad class, and persuasion summaries.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use super::Class;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Rate {
    pub numerator: u64,
    pub denominator: u64,
}

impl Rate {
    pub fn new(numerator: u64, denominator: u64) -> Rate {
        Rate {
            numerator,
            denominator,
        }
    }

    /// 0 when there is nothing to divide by.
    pub fn value(&self) -> f64 {
        if self.denominator == 0 {
            0.0
        } else {
            self.numerator as f64 / self.denominator as f64
        }
    }

    pub fn percent(&self) -> f64 {
        100.0 * self.value()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Dyad {
    pub sender: Class,
    pub receiver: Class,
}

impl Dyad {
    pub const ALL: [Dyad; 4] = [
        Dyad::new(Class::Human, Class::Human),
        Dyad::new(Class::Human, Class::Agent),
        Dyad::new(Class::Agent, Class::Human),
        Dyad::new(Class::Agent, Class::Agent),
    ];

    pub const fn new(sender: Class, receiver: Class) -> Dyad {
        Dyad { sender, receiver }
    }
}

/// One message: which game it is from, who talked to whom, and whether
/// it carries the flag being counted.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RateItem {
    pub game_id: String,
    pub dyad: Dyad,
    pub flagged: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RateCell {
    pub numerator: u64,
    pub denominator: u64,
    pub rate: f64,
    /// Sample standard deviation of the per-game rates; 0 with fewer than
    /// two games.
    pub std: f64,
    pub games: usize,
}

pub type RateTable = BTreeMap<Dyad, RateCell>;

fn sample_std(v: &[f64]) -> f64 {
    if v.len() < 2 {
        return 0.0;
    }
    let m = v.iter().sum::<f64>() / v.len() as f64;
    (v.iter().map(|x| (x - m).powi(2)).sum::<f64>() / (v.len() - 1) as f64).sqrt()
}

/// Flag rate per dyad class. Only dyads with at least one message appear.
pub fn rate_table<'a>(items: impl IntoIterator<Item = &'a RateItem>) -> RateTable {
    let mut per_game: BTreeMap<Dyad, BTreeMap<&str, (u64, u64)>> = BTreeMap::new();
    for it in items {
        let c = per_game
            .entry(it.dyad)
            .or_default()
            .entry(&it.game_id)
            .or_default();
        c.0 += u64::from(it.flagged);
        c.1 += 1;
    }
    per_game
        .into_iter()
        .map(|(dyad, games)| {
            let num = games.values().map(|c| c.0).sum();
            let den = games.values().map(|c| c.1).sum();
            let rates: Vec<f64> = games
                .values()
                .map(|&(a, b)| Rate::new(a, b).value())
                .collect();
            let cell = RateCell {
                numerator: num,
                denominator: den,
                rate: Rate::new(num, den).value(),
                std: sample_std(&rates),
                games: games.len(),
            };
            (dyad, cell)
        })
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PersuasionItem {
    pub dyad: Dyad,
    pub attempt: bool,
    pub success: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PersuasionCell {
    pub messages: u64,
    pub attempts: u64,
    pub successes: u64,
    /// attempts / messages
    pub attempt_rate: f64,
    /// successes / attempts
    pub success_rate: f64,
}

/// Message-level attempt rate and attempt-level success rate per dyad.
/// A success without an attempt on the same message still counts as an
/// attempt.
pub fn persuasion_summary<'a>(
    items: impl IntoIterator<Item = &'a PersuasionItem>,
) -> BTreeMap<Dyad, PersuasionCell> {
    let mut counts: BTreeMap<Dyad, (u64, u64, u64)> = BTreeMap::new();
    for it in items {
        let c = counts.entry(it.dyad).or_default();
        c.0 += 1;
        c.1 += u64::from(it.attempt || it.success);
        c.2 += u64::from(it.success);
    }
    counts
        .into_iter()
        .map(|(d, (m, a, s))| {
            let cell = PersuasionCell {
                messages: m,
                attempts: a,
                successes: s,
                attempt_rate: Rate::new(a, m).value(),
                success_rate: Rate::new(s, a).value(),
            };
            (d, cell)
        })
        .collect()
}
