//! Negotiation messages: preprocessing, act extraction, grounding to orders.

mod action;
mod extract;
mod ground;
mod lexer;
mod preprocess;

use std::collections::BTreeSet;
use std::ops::Range;

use serde::{Deserialize, Serialize};

pub use action::{Action, Place, UnitSpec};
pub use extract::extract_acts;
pub use ground::{ground, ground_into};
pub use preprocess::{preprocess, Edit, Preprocessed};

use crate::game::{GameState, Map, Order, Power, Turn};
use crate::graph::IntentGraph;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum MessageError {
    #[error("sender and recipient are both {0}")]
    SamePower(Power),
    #[error("{actor} has no unit that could perform {concept}")]
    NoActorUnit { actor: Power, concept: String },
}

/// Who is talking to whom, when, and over which board.
#[derive(Debug, Clone)]
pub struct MessageContext {
    pub sender: Power,
    pub recipient: Power,
    pub turn: Turn,
    pub state: GameState,
    pub message_id: String,
    /// Earlier acts between the same two powers this turn, oldest first.
    /// Agreements bind to proposals found here.
    pub history: Vec<CommunicativeAct>,
}

impl MessageContext {
    pub fn new(
        sender: Power,
        recipient: Power,
        state: GameState,
    ) -> Result<MessageContext, MessageError> {
        if sender == recipient {
            return Err(MessageError::SamePower(sender));
        }
        Ok(MessageContext {
            sender,
            recipient,
            turn: state.turn(),
            state,
            message_id: String::new(),
            history: Vec::new(),
        })
    }

    pub fn with_id(mut self, id: impl Into<String>) -> MessageContext {
        self.message_id = id.into();
        self
    }

    pub fn with_history(mut self, history: Vec<CommunicativeAct>) -> MessageContext {
        self.history = history;
        self
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ActKind {
    Commitment,
    Proposal,
    Agreement,
    ThirdPartyReport,
    None,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CommunicativeAct {
    pub message_id: String,
    pub kind: ActKind,
    pub sender: Power,
    pub recipient: Power,
    /// Power expected to carry the action out.
    pub actor: Power,
    #[serde(with = "crate::graph::text")]
    pub graph: IntentGraph,
    /// Stated under a condition; never scored.
    pub conditional: bool,
    /// Byte range of the source sentence in the original message.
    pub span: Range<usize>,
    pub grounded: BTreeSet<Order>,
}

impl CommunicativeAct {
    pub fn action(&self, map: &Map) -> Option<Action> {
        Action::from_graph(&self.graph, map)
    }

    /// Builds a fully specified act for a concrete order.
    pub fn for_order(
        state: &GameState,
        kind: ActKind,
        sender: Power,
        recipient: Power,
        order: &Order,
    ) -> CommunicativeAct {
        let actor = match kind {
            ActKind::Proposal => recipient,
            _ => sender,
        };
        CommunicativeAct {
            message_id: String::new(),
            kind,
            sender,
            recipient,
            actor,
            graph: Action::from_order(state, actor, order).to_graph(),
            conditional: false,
            span: 0..0,
            grounded: BTreeSet::from([*order]),
        }
    }
}

/// Whether the act tries to get the recipient to do something.
pub fn classify_attempt(act: &CommunicativeAct) -> bool {
    act.kind == ActKind::Proposal
}

/// One message of a negotiation.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Message {
    pub id: String,
    #[serde(default)]
    pub game_id: String,
    pub turn: Turn,
    pub sender: Power,
    pub recipient: Power,
    pub text: String,
    #[serde(
        default,
        skip_serializing_if = "Option::is_none",
        with = "crate::graph::text_opt"
    )]
    pub gold_graph: Option<IntentGraph>,
}

/// Extracts and grounds every message of one turn, in order. Each message
/// sees the earlier acts of its dyad, so agreements bind correctly.
pub fn parse_turn(messages: &[Message], state: &GameState) -> Vec<CommunicativeAct> {
    let mut all: Vec<CommunicativeAct> = Vec::new();
    for m in messages {
        let Ok(ctx) = MessageContext::new(m.sender, m.recipient, state.clone()) else {
            continue;
        };
        let history = all
            .iter()
            .filter(|a| {
                (a.sender == m.sender && a.recipient == m.recipient)
                    || (a.sender == m.recipient && a.recipient == m.sender)
            })
            .cloned()
            .collect();
        let ctx = ctx.with_id(&m.id).with_history(history);
        all.extend(parse_message(&m.text, &ctx));
    }
    all
}

/// [`extract_acts`] followed by [`ground`]; an act with no grounding keeps
/// an empty order set.
pub fn parse_message(text: &str, ctx: &MessageContext) -> Vec<CommunicativeAct> {
    let mut acts = extract_acts(text, ctx);
    for a in &mut acts {
        ground_into(a, ctx);
    }
    acts
}

#[cfg(test)]
mod tests;
