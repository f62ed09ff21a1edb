//! Broken-commitment and persuasion detection against recorded orders.

use std::collections::{BTreeMap, BTreeSet};
use std::ops::Range;

use serde::{Deserialize, Serialize};

use crate::game::{Order, Power, Turn};
use crate::message::{ActKind, CommunicativeAct};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum DetectError {
    #[error("no {which} orders recorded for {power} in {turn}")]
    MissingLedgerEntry {
        power: Power,
        turn: Turn,
        which: &'static str,
    },
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct LedgerEntry {
    pub initial: Option<BTreeSet<Order>>,
    #[serde(rename = "final")]
    pub finals: Option<BTreeSet<Order>>,
}

/// Orders each power meant to play before talking, and what it played.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct IntentLedger {
    entries: BTreeMap<Turn, BTreeMap<Power, LedgerEntry>>,
}

impl IntentLedger {
    pub fn new() -> IntentLedger {
        IntentLedger::default()
    }

    pub fn record_initial(
        &mut self,
        power: Power,
        turn: Turn,
        orders: impl IntoIterator<Item = Order>,
    ) {
        self.entry(power, turn).initial = Some(orders.into_iter().collect());
    }

    pub fn record_final(
        &mut self,
        power: Power,
        turn: Turn,
        orders: impl IntoIterator<Item = Order>,
    ) {
        self.entry(power, turn).finals = Some(orders.into_iter().collect());
    }

    fn entry(&mut self, power: Power, turn: Turn) -> &mut LedgerEntry {
        self.entries
            .entry(turn)
            .or_default()
            .entry(power)
            .or_default()
    }

    pub fn get(&self, power: Power, turn: Turn) -> Option<&LedgerEntry> {
        self.entries.get(&turn)?.get(&power)
    }

    pub fn initial(&self, power: Power, turn: Turn) -> Result<&BTreeSet<Order>, DetectError> {
        self.get(power, turn)
            .and_then(|e| e.initial.as_ref())
            .ok_or(DetectError::MissingLedgerEntry {
                power,
                turn,
                which: "initial",
            })
    }

    pub fn finals(&self, power: Power, turn: Turn) -> Result<&BTreeSet<Order>, DetectError> {
        self.get(power, turn).and_then(|e| e.finals.as_ref()).ok_or(
            DetectError::MissingLedgerEntry {
                power,
                turn,
                which: "final",
            },
        )
    }

    pub fn turns(&self) -> impl Iterator<Item = Turn> + '_ {
        self.entries.keys().copied()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum EventKind {
    BrokenCommitment,
    PersuasionAttempt,
    PersuasionSuccess,
}

/// What the verdict was read from: the actor's order for the same unit
/// before talks and at turn end, and where in the message the act sits.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Evidence {
    pub initial: Option<Order>,
    pub span: Range<usize>,
    #[serde(rename = "final")]
    pub final_order: Option<Order>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DetectionEvent {
    pub kind: EventKind,
    pub message_id: String,
    pub turn: Turn,
    pub sender: Power,
    pub recipient: Power,
    pub action: Order,
    pub verdict: bool,
    pub evidence: Evidence,
}

fn member(a: &Order, set: &BTreeSet<Order>) -> bool {
    set.iter().any(|o| o.same_action(a))
}

/// 1 iff the promised action is missing from the promiser's final orders.
pub fn broken_commitment(a_msg: &Order, finals: &BTreeSet<Order>) -> bool {
    !member(a_msg, finals)
}

/// 1 iff the suggested action was played but had not been planned.
pub fn persuasion(intents: &BTreeSet<Order>, a_msg: &Order, finals: &BTreeSet<Order>) -> bool {
    member(a_msg, finals) && !member(a_msg, intents)
}

fn same_unit<'a>(a: &Order, set: &'a BTreeSet<Order>) -> Option<&'a Order> {
    set.iter().find(|o| o.prov() == a.prov())
}

/// Events for one turn's grounded acts. An act grounded to several
/// candidate orders is judged by its most favorable reading: a commitment
/// is kept if any reading was played, a proposal succeeds if any reading
/// was adopted without having been planned.
pub fn scan_turn(
    acts: &[CommunicativeAct],
    ledger: &IntentLedger,
    turn: Turn,
) -> Result<Vec<DetectionEvent>, DetectError> {
    let mut out = Vec::new();
    let mut seen: BTreeSet<(String, EventKind, Order)> = BTreeSet::new();
    for act in acts {
        if act.conditional || act.grounded.is_empty() {
            continue;
        }
        let kinds: &[EventKind] = match act.kind {
            ActKind::Commitment | ActKind::Agreement => &[EventKind::BrokenCommitment],
            ActKind::Proposal => &[EventKind::PersuasionAttempt, EventKind::PersuasionSuccess],
            ActKind::ThirdPartyReport | ActKind::None => continue,
        };
        let initial = ledger.initial(act.actor, turn)?;
        let finals = ledger.finals(act.actor, turn)?;
        let cands = &act.grounded;
        let (action, success) = match act.kind {
            ActKind::Proposal => match cands.iter().find(|a| persuasion(initial, a, finals)) {
                Some(a) => (*a, true),
                None => (
                    *cands
                        .iter()
                        .find(|a| member(a, finals))
                        .unwrap_or(cands.first().unwrap()),
                    false,
                ),
            },
            _ => (
                *cands
                    .iter()
                    .find(|a| member(a, finals))
                    .unwrap_or(cands.first().unwrap()),
                false,
            ),
        };
        for &kind in kinds {
            let verdict = match kind {
                EventKind::BrokenCommitment => broken_commitment(&action, finals),
                EventKind::PersuasionAttempt => true,
                EventKind::PersuasionSuccess if !success => continue,
                EventKind::PersuasionSuccess => true,
            };
            if !seen.insert((act.message_id.clone(), kind, action.normalized())) {
                continue;
            }
            out.push(DetectionEvent {
                kind,
                message_id: act.message_id.clone(),
                turn,
                sender: act.sender,
                recipient: act.recipient,
                action,
                verdict,
                evidence: Evidence {
                    initial: same_unit(&action, initial).copied(),
                    span: act.span.clone(),
                    final_order: same_unit(&action, finals).copied(),
                },
            });
        }
    }
    Ok(out)
}

/// Counts and rates for one binary label. 0/0 rates are 0.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Confusion {
    pub tp: u64,
    pub fp: u64,
    #[serde(rename = "fn")]
    pub fn_: u64,
    pub tn: u64,
    pub precision: f64,
    pub recall: f64,
}

fn ratio(a: u64, b: u64) -> f64 {
    if b == 0 {
        0.0
    } else {
        a as f64 / b as f64
    }
}

impl Confusion {
    pub fn from_counts(tp: u64, fp: u64, fn_: u64, tn: u64) -> Confusion {
        Confusion {
            tp,
            fp,
            fn_,
            tn,
            precision: ratio(tp, tp + fp),
            recall: ratio(tp, tp + fn_),
        }
    }

    pub fn f1(&self) -> f64 {
        let d = self.precision + self.recall;
        if d == 0.0 {
            0.0
        } else {
            2.0 * self.precision * self.recall / d
        }
    }

    pub fn total(&self) -> u64 {
        self.tp + self.fp + self.fn_ + self.tn
    }
}

/// Message-level flags: the OR of the verdicts of `kind` events.
pub fn message_flags(events: &[DetectionEvent], kind: EventKind) -> BTreeMap<&str, bool> {
    let mut out: BTreeMap<&str, bool> = BTreeMap::new();
    for e in events.iter().filter(|e| e.kind == kind) {
        *out.entry(&e.message_id).or_default() |= e.verdict;
    }
    out
}

/// Scores `kind` flags against gold labels over the messages in `gold`.
pub fn confusion_for(
    events: &[DetectionEvent],
    gold: &BTreeMap<String, bool>,
    kind: EventKind,
) -> Confusion {
    let flags = message_flags(events, kind);
    let (mut tp, mut fp, mut fn_, mut tn) = (0, 0, 0, 0);
    for (id, &g) in gold {
        let p = flags.get(id.as_str()).copied().unwrap_or(false);
        match (p, g) {
            (true, true) => tp += 1,
            (true, false) => fp += 1,
            (false, true) => fn_ += 1,
            (false, false) => tn += 1,
        }
    }
    Confusion::from_counts(tp, fp, fn_, tn)
}

/// Broken-commitment flags against gold labels.
pub fn confusion(events: &[DetectionEvent], gold: &BTreeMap<String, bool>) -> Confusion {
    confusion_for(events, gold, EventKind::BrokenCommitment)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn o(s: &str) -> Order {
        s.parse().unwrap()
    }

    fn set(v: &[&str]) -> BTreeSet<Order> {
        v.iter().map(|s| o(s)).collect()
    }

    #[test]
    fn verdict_examples() {
        assert!(broken_commitment(
            &o("F SKA - SWE"),
            &set(&["F SKA - NWY", "A KIE H"])
        ));
        assert!(!broken_commitment(
            &o("F SKA - SWE"),
            &set(&["F SKA - SWE"])
        ));
        assert!(broken_commitment(&o("F SKA - SWE"), &BTreeSet::new()));
        assert!(persuasion(
            &set(&["F SKA - NTH"]),
            &o("F SKA - SWE"),
            &set(&["F SKA - SWE"])
        ));
        assert!(!persuasion(
            &set(&["F SKA - SWE"]),
            &o("F SKA - SWE"),
            &set(&["F SKA - SWE"])
        ));
        assert!(!persuasion(
            &set(&["F SKA - NTH"]),
            &o("F SKA - SWE"),
            &set(&["F SKA - NTH"])
        ));
    }

    #[test]
    fn coasts_do_not_matter() {
        assert!(!broken_commitment(
            &o("F MAO - SPA/NC"),
            &set(&["F MAO - SPA"])
        ));
    }

    #[test]
    fn reported_confusion_tables() {
        let c = Confusion::from_counts(20, 19, 8, 4745);
        assert!((c.precision - 0.513).abs() < 0.0005 && (c.recall - 0.714).abs() < 0.0005);
        let c = Confusion::from_counts(3, 72, 13, 1523);
        assert!((c.precision - 0.040).abs() < 0.0005 && (c.recall - 0.1875).abs() < 1e-12);
        let c = Confusion::from_counts(0, 0, 0, 5);
        assert_eq!((c.precision, c.recall, c.f1()), (0.0, 0.0, 0.0));
    }

    #[test]
    fn missing_ledger() {
        let l = IntentLedger::new();
        assert!(matches!(
            l.initial(Power::Eng, Turn::FIRST),
            Err(DetectError::MissingLedgerEntry { .. })
        ));
    }
}
