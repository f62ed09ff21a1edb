//! Plot- and table-ready CSVs plus a plain-text summary.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use super::design::{regression_design, GameRow};
use super::identity::TurnScore;
use super::ols::OlsFit;
use super::rates::{persuasion_summary, rate_table, Dyad, PersuasionItem, RateItem};
use super::{AnalyticsError, Class};
use crate::detect::EventKind;
use crate::io::{csv_string, write_text, GameEvent, SCHEMA_VERSION};
use crate::sim::{CommLevel, GameLog};

pub struct ReportInput<'a> {
    pub logs: &'a [GameLog],
    pub events: &'a [GameEvent],
    pub fit: Option<&'a OlsFit>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ReportSummary {
    pub files: Vec<PathBuf>,
    pub text: String,
}

const COEFFICIENT_HEADER: [&str; 6] = ["term", "estimate", "se", "ci_low", "ci_high", "df"];

fn coefficient_rows(fit: Option<&OlsFit>) -> Vec<Vec<String>> {
    fit.map(|f| {
        f.coefficients
            .iter()
            .map(|c| {
                vec![
                    c.term.clone(),
                    c.estimate.to_string(),
                    c.se.to_string(),
                    c.ci_low.to_string(),
                    c.ci_high.to_string(),
                    f.df.to_string(),
                ]
            })
            .collect()
    })
    .unwrap_or_default()
}

pub fn write_coefficients(fit: &OlsFit, path: &Path) -> Result<(), AnalyticsError> {
    Ok(write_text(
        path,
        &csv_string(&COEFFICIENT_HEADER, &coefficient_rows(Some(fit))),
    )?)
}

pub fn write_f_by_turn(scores: &[TurnScore], path: &Path) -> Result<(), AnalyticsError> {
    let rows: Vec<Vec<String>> = scores
        .iter()
        .map(|s| {
            vec![
                s.turn.to_string(),
                s.tp.to_string(),
                s.fp.to_string(),
                s.fn_.to_string(),
                s.tn.to_string(),
                s.f.to_string(),
                s.smoothed.map(|v| v.to_string()).unwrap_or_default(),
            ]
        })
        .collect();
    Ok(write_text(
        path,
        &csv_string(&["turn", "tp", "fp", "fn", "tn", "f", "smoothed"], &rows),
    )?)
}

fn kind_str(k: EventKind) -> &'static str {
    match k {
        EventKind::BrokenCommitment => "broken_commitment",
        EventKind::PersuasionAttempt => "persuasion_attempt",
        EventKind::PersuasionSuccess => "persuasion_success",
    }
}

fn check(input: &ReportInput) -> Result<(), AnalyticsError> {
    let mut ids: BTreeMap<&str, BTreeSet<&str>> = BTreeMap::new();
    for log in input.logs {
        let msgs = log
            .turns
            .iter()
            .flat_map(|t| &t.messages)
            .map(|m| m.message.id.as_str())
            .collect();
        if ids.insert(&log.game_id, msgs).is_some() {
            return Err(AnalyticsError::SchemaMismatch(format!(
                "game {} appears twice",
                log.game_id
            )));
        }
    }
    for e in input.events {
        let msgs = ids.get(e.game_id.as_str()).ok_or_else(|| {
            AnalyticsError::SchemaMismatch(format!("event for unknown game {}", e.game_id))
        })?;
        if !msgs.contains(e.event.message_id.as_str()) {
            return Err(AnalyticsError::SchemaMismatch(format!(
                "event for unknown message {} in game {}",
                e.event.message_id, e.game_id
            )));
        }
    }
    if let (Some(fit), false) = (input.fit, input.logs.is_empty()) {
        let rows: Vec<GameRow> = input.logs.iter().map(GameRow::from_log).collect();
        let want = regression_design(&rows).terms;
        let got: Vec<String> = fit.coefficients.iter().map(|c| c.term.clone()).collect();
        if got != want {
            return Err(AnalyticsError::SchemaMismatch(format!(
                "fit terms {got:?} do not match the batch's {want:?}"
            )));
        }
    }
    Ok(())
}

/// Writes sc.csv, levels.csv, events.csv, rates.csv, persuasion.csv,
/// coefficients.csv and summary.txt into `dir`. Every message in a
/// simulated batch is agent to agent.
pub fn report(input: &ReportInput, dir: &Path) -> Result<ReportSummary, AnalyticsError> {
    check(input)?;
    let mut files = Vec::new();
    let mut put = |name: &str, text: String| -> Result<(), AnalyticsError> {
        let p = dir.join(name);
        write_text(&p, &text)?;
        files.push(p);
        Ok(())
    };

    let mut sc_rows = Vec::new();
    for log in input.logs {
        let talkers = log.talkers();
        for (p, a) in &log.assignments {
            sc_rows.push(vec![
                log.game_id.clone(),
                a.level.to_string(),
                p.code().to_string(),
                talkers.contains(p).to_string(),
                log.final_sc.get(p).copied().unwrap_or(0).to_string(),
            ]);
        }
    }
    put(
        "sc.csv",
        csv_string(&["game_id", "level", "power", "talker", "sc"], &sc_rows),
    )?;

    let mut by_game: BTreeMap<&str, Vec<&GameEvent>> = BTreeMap::new();
    for e in input.events {
        by_game.entry(&e.game_id).or_default().push(e);
    }
    let flagged = |game: &str, id: &str, kind: EventKind| {
        by_game.get(game).is_some_and(|v| {
            v.iter()
                .any(|e| e.event.message_id == id && e.event.kind == kind && e.event.verdict)
        })
    };

    let mut levels: BTreeMap<CommLevel, [u64; 7]> = BTreeMap::new();
    let mut rate_items: BTreeMap<EventKind, Vec<RateItem>> = BTreeMap::new();
    let mut pers = Vec::new();
    let dyad = Dyad::new(Class::Agent, Class::Agent);
    for log in input.logs {
        let c = levels.entry(log.level()).or_default();
        c[0] += 1;
        for m in log.turns.iter().flat_map(|t| &t.messages) {
            c[1] += 1;
            c[2] += m.acts.iter().filter(|a| !a.grounded.is_empty()).count() as u64;
            let id = m.message.id.as_str();
            for kind in [
                EventKind::BrokenCommitment,
                EventKind::PersuasionAttempt,
                EventKind::PersuasionSuccess,
            ] {
                rate_items.entry(kind).or_default().push(RateItem {
                    game_id: log.game_id.clone(),
                    dyad,
                    flagged: flagged(&log.game_id, id, kind),
                });
            }
            pers.push(PersuasionItem {
                dyad,
                attempt: flagged(&log.game_id, id, EventKind::PersuasionAttempt),
                success: flagged(&log.game_id, id, EventKind::PersuasionSuccess),
            });
        }
        for e in by_game.get(log.game_id.as_str()).into_iter().flatten() {
            match (e.event.kind, e.event.verdict) {
                (EventKind::BrokenCommitment, v) => {
                    c[3] += 1;
                    c[4] += u64::from(v);
                }
                (EventKind::PersuasionAttempt, _) => c[5] += 1,
                (EventKind::PersuasionSuccess, _) => c[6] += 1,
            }
        }
    }
    let level_rows: Vec<Vec<String>> = levels
        .iter()
        .map(|(l, c)| {
            std::iter::once(l.to_string())
                .chain(c.iter().map(u64::to_string))
                .collect()
        })
        .collect();
    put(
        "levels.csv",
        csv_string(
            &[
                "level",
                "games",
                "messages",
                "grounded_acts",
                "commitments",
                "broken",
                "attempts",
                "successes",
            ],
            &level_rows,
        ),
    )?;

    let mut events = input.events.to_vec();
    events.sort_by(|a, b| {
        (&a.game_id, a.event.turn, &a.event.message_id, a.event.kind).cmp(&(
            &b.game_id,
            b.event.turn,
            &b.event.message_id,
            b.event.kind,
        ))
    });
    let event_rows: Vec<Vec<String>> = events
        .iter()
        .map(|e| {
            let ev = &e.event;
            vec![
                e.game_id.clone(),
                ev.turn.to_string(),
                kind_str(ev.kind).into(),
                ev.message_id.clone(),
                ev.sender.code().into(),
                ev.recipient.code().into(),
                ev.action.to_string(),
                ev.verdict.to_string(),
            ]
        })
        .collect();
    put(
        "events.csv",
        csv_string(
            &[
                "game_id",
                "turn",
                "kind",
                "message_id",
                "sender",
                "recipient",
                "action",
                "verdict",
            ],
            &event_rows,
        ),
    )?;

    let mut rate_rows = Vec::new();
    for (kind, items) in &rate_items {
        for (d, c) in rate_table(items) {
            rate_rows.push(vec![
                kind_str(*kind).into(),
                d.sender.to_string(),
                d.receiver.to_string(),
                c.numerator.to_string(),
                c.denominator.to_string(),
                c.rate.to_string(),
                c.std.to_string(),
            ]);
        }
    }
    put(
        "rates.csv",
        csv_string(
            &[
                "flag",
                "sender_class",
                "receiver_class",
                "numerator",
                "denominator",
                "rate",
                "std",
            ],
            &rate_rows,
        ),
    )?;

    let pers_rows: Vec<Vec<String>> = persuasion_summary(&pers)
        .into_iter()
        .map(|(d, c)| {
            vec![
                d.sender.to_string(),
                d.receiver.to_string(),
                c.messages.to_string(),
                c.attempts.to_string(),
                c.successes.to_string(),
                c.attempt_rate.to_string(),
                c.success_rate.to_string(),
            ]
        })
        .collect();
    put(
        "persuasion.csv",
        csv_string(
            &[
                "sender_class",
                "receiver_class",
                "messages",
                "attempts",
                "successes",
                "attempt_rate",
                "success_rate",
            ],
            &pers_rows,
        ),
    )?;

    put(
        "coefficients.csv",
        csv_string(&COEFFICIENT_HEADER, &coefficient_rows(input.fit)),
    )?;

    let mut text = format!("schema_version: {SCHEMA_VERSION}\n");
    writeln!(text, "games: {}", input.logs.len()).unwrap();
    writeln!(text, "events: {}", input.events.len()).unwrap();
    for (l, c) in &levels {
        writeln!(
            text,
            "{l}: {} games, {} messages, {} broken of {} commitments, {} of {} proposals adopted",
            c[0], c[1], c[4], c[3], c[6], c[5]
        )
        .unwrap();
    }
    if let Some(fit) = input.fit {
        writeln!(text, "end-of-game supply centers, df {}:", fit.df).unwrap();
        for c in &fit.coefficients {
            writeln!(
                text,
                "  {:<17} {:>7.3}  [{:.3}, {:.3}]",
                c.term, c.estimate, c.ci_low, c.ci_high
            )
            .unwrap();
        }
    }
    put("summary.txt", text.clone())?;
    Ok(ReportSummary { files, text })
}
