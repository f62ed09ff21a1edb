//! Annotated message corpora: boards, messages, intent ledgers, player
//! classes and annotations, one tagged record per line.

use std::collections::{BTreeMap, BTreeSet};
use std::path::Path;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use super::schema::{parse_jsonl, read_text};
use super::IoError;
use crate::analytics::{Class, Guess};
use crate::detect::{scan_turn, DetectionEvent, IntentLedger};
use crate::game::{GameState, Map, Order, Power, StateSnapshot, Turn};
use crate::message::{parse_turn, CommunicativeAct, Message};
use crate::sim::CorpusRecord;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Outgoing {
    Truth,
    Lie,
    Neutral,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Incoming {
    Truth,
    Lie,
}

/// What one player said about a message they sent or received, and/or
/// who they think is behind each opposing power at a turn.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AnnotationRecord {
    pub game_id: String,
    pub annotator: Power,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub message_id: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub outgoing_label: Option<Outgoing>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub incoming_label: Option<Incoming>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub turn: Option<Turn>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub identity_guess: BTreeMap<Power, Class>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct StateRecord {
    pub game_id: String,
    #[serde(flatten)]
    pub state: StateSnapshot,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LedgerRecord {
    pub game_id: String,
    pub turn: Turn,
    pub power: Power,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub initial: Option<Vec<Order>>,
    #[serde(default, rename = "final", skip_serializing_if = "Option::is_none")]
    pub finals: Option<Vec<Order>>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PlayerRecord {
    pub game_id: String,
    pub power: Power,
    pub class: Class,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum Record {
    State(StateRecord),
    Message(Message),
    Ledger(LedgerRecord),
    Player(PlayerRecord),
    Annotation(AnnotationRecord),
}

/// A record that loaded but breaks a corpus invariant.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Diagnostic {
    pub line: usize,
    pub message: String,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct CorpusCounts {
    pub games: usize,
    pub messages: usize,
    /// Intent order-sets, one per (game, power, turn) with initial orders.
    pub intents: usize,
    pub annotations: usize,
    pub lies: usize,
    pub perceived_lies: usize,
    pub guesses: usize,
}

/// A detector event tagged with the game it came from.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GameEvent {
    pub game_id: String,
    #[serde(flatten)]
    pub event: DetectionEvent,
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct Corpus {
    pub states: BTreeMap<(String, Turn), StateSnapshot>,
    pub messages: Vec<Message>,
    pub ledgers: BTreeMap<String, IntentLedger>,
    pub players: BTreeMap<(String, Power), Class>,
    pub annotations: Vec<AnnotationRecord>,
    pub diagnostics: Vec<Diagnostic>,
}

/// Reads a corpus file. Malformed lines fail with their line number;
/// well-formed records that break an invariant become diagnostics.
pub fn ingest_corpus(path: &Path) -> Result<Corpus, IoError> {
    ingest_corpus_str(&read_text(path)?)
}

pub fn ingest_corpus_str(text: &str) -> Result<Corpus, IoError> {
    let mut c = Corpus::default();
    let mut lines = Vec::new();
    for (line, rec) in parse_jsonl::<Record>(text)? {
        match rec {
            Record::State(s) => {
                c.states.insert((s.game_id, s.state.turn), s.state);
            }
            Record::Message(m) => {
                lines.push(line);
                c.messages.push(m);
            }
            Record::Ledger(l) => {
                let ledger = c.ledgers.entry(l.game_id).or_default();
                if let Some(o) = l.initial {
                    ledger.record_initial(l.power, l.turn, o);
                }
                if let Some(o) = l.finals {
                    ledger.record_final(l.power, l.turn, o);
                }
            }
            Record::Player(p) => {
                c.players.insert((p.game_id, p.power), p.class);
            }
            Record::Annotation(a) => {
                let d = c.check_annotation(&a, line);
                c.diagnostics.extend(d);
                c.annotations.push(a);
            }
        }
    }
    let mut ids = BTreeSet::new();
    for (m, &line) in c.messages.iter().zip(&lines) {
        if !ids.insert(m.id.as_str()) {
            c.diagnostics.push(Diagnostic {
                line,
                message: format!("duplicate message id {}", m.id),
            });
        }
    }
    c.diagnostics.sort_by_key(|d| d.line);
    Ok(c)
}

/// Acts read from one game's messages in one turn.
pub type TurnActs = ((String, Turn), Vec<CommunicativeAct>);

impl Corpus {
    /// Messages as replay records for the random-message level.
    pub fn replay_records(&self) -> Vec<CorpusRecord> {
        self.messages
            .iter()
            .map(|m| CorpusRecord {
                sender: m.sender,
                recipient: m.recipient,
                year: m.turn.year,
                text: m.text.clone(),
            })
            .collect()
    }

    fn message(&self, game_id: &str, id: &str) -> Option<&Message> {
        self.messages
            .iter()
            .find(|m| m.id == id && m.game_id == game_id)
    }

    fn check_annotation(&self, a: &AnnotationRecord, line: usize) -> Vec<Diagnostic> {
        let mut out = Vec::new();
        let mut bad = |message: String| out.push(Diagnostic { line, message });
        if a.outgoing_label.is_some() || a.incoming_label.is_some() {
            match a
                .message_id
                .as_deref()
                .and_then(|id| self.message(&a.game_id, id))
            {
                None => bad(format!("label on unknown message {:?}", a.message_id)),
                Some(m) => {
                    if a.outgoing_label.is_some() && m.sender != a.annotator {
                        bad(format!(
                            "outgoing label by {} on a message it received",
                            a.annotator
                        ));
                    }
                    if a.incoming_label.is_some() && m.recipient != a.annotator {
                        bad(format!(
                            "incoming label by {} on a message it sent",
                            a.annotator
                        ));
                    }
                }
            }
        }
        if !a.identity_guess.is_empty() {
            match a.turn {
                None => bad("identity guesses without a turn".into()),
                Some(t) => {
                    for &p in a.identity_guess.keys() {
                        if p == a.annotator {
                            bad(format!("{} guesses about itself", p));
                        }
                        let dup = self.annotations.iter().any(|b| {
                            b.game_id == a.game_id
                                && b.annotator == a.annotator
                                && b.turn == Some(t)
                                && b.identity_guess.contains_key(&p)
                        });
                        if dup {
                            bad(format!(
                                "second guess by {} about {} in {}",
                                a.annotator, p, t
                            ));
                        }
                    }
                }
            }
        }
        out
    }

    pub fn counts(&self) -> CorpusCounts {
        let mut games: BTreeSet<&str> = self.messages.iter().map(|m| m.game_id.as_str()).collect();
        games.extend(self.states.keys().map(|(g, _)| g.as_str()));
        let intents = self
            .ledgers
            .values()
            .map(|l| {
                l.turns()
                    .map(|t| {
                        Power::ALL
                            .iter()
                            .filter(|&&p| l.get(p, t).is_some_and(|e| e.initial.is_some()))
                            .count()
                    })
                    .sum::<usize>()
            })
            .sum();
        CorpusCounts {
            games: games.len(),
            messages: self.messages.len(),
            intents,
            annotations: self.annotations.len(),
            lies: self
                .annotations
                .iter()
                .filter(|a| a.outgoing_label == Some(Outgoing::Lie))
                .count(),
            perceived_lies: self
                .annotations
                .iter()
                .filter(|a| a.incoming_label == Some(Incoming::Lie))
                .count(),
            guesses: self
                .annotations
                .iter()
                .map(|a| a.identity_guess.len())
                .sum(),
        }
    }

    /// Sender-side lie labels per message id, the gold standard for broken
    /// commitments.
    pub fn lie_labels(&self) -> BTreeMap<String, bool> {
        self.annotations
            .iter()
            .filter_map(|a| Some((a.message_id.clone()?, a.outgoing_label? == Outgoing::Lie)))
            .collect()
    }

    pub fn guesses(&self) -> Vec<Guess> {
        self.annotations
            .iter()
            .filter_map(|a| Some((a, a.turn?)))
            .flat_map(|(a, turn)| {
                a.identity_guess.iter().map(move |(&target, &guess)| Guess {
                    game_id: a.game_id.clone(),
                    annotator: a.annotator,
                    target,
                    turn,
                    guess,
                })
            })
            .collect()
    }

    /// Messages grouped by (game, turn) in file order.
    fn turns(&self) -> BTreeMap<(String, Turn), Vec<Message>> {
        let mut out: BTreeMap<(String, Turn), Vec<Message>> = BTreeMap::new();
        for m in &self.messages {
            out.entry((m.game_id.clone(), m.turn))
                .or_default()
                .push(m.clone());
        }
        out
    }

    fn board(&self, map: &Arc<Map>, game_id: &str, turn: Turn) -> Result<GameState, IoError> {
        let missing = || IoError::MissingState {
            game_id: game_id.to_string(),
            turn,
        };
        let snap = self
            .states
            .get(&(game_id.to_string(), turn))
            .ok_or_else(missing)?;
        GameState::from_snapshot(map.clone(), snap).map_err(|e| IoError::Schema {
            line: 0,
            message: format!("board for {game_id} {turn}: {e}"),
        })
    }

    /// Extracted and grounded acts, per (game, turn).
    pub fn acts(&self, map: &Arc<Map>) -> Result<Vec<TurnActs>, IoError> {
        self.turns()
            .into_iter()
            .map(|((g, t), msgs)| {
                let st = self.board(map, &g, t)?;
                Ok(((g, t), parse_turn(&msgs, &st)))
            })
            .collect()
    }

    /// Parses, grounds and scores every message against the game's ledger.
    pub fn detect(&self, map: &Arc<Map>) -> Result<Vec<GameEvent>, IoError> {
        let empty = IntentLedger::new();
        let mut out = Vec::new();
        for ((g, t), acts) in self.acts(map)? {
            let ledger = self.ledgers.get(&g).unwrap_or(&empty);
            for event in scan_turn(&acts, ledger, t)? {
                out.push(GameEvent {
                    game_id: g.clone(),
                    event,
                });
            }
        }
        Ok(out)
    }
}
