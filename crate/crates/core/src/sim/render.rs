//! Turning an agent's act into message text and back.

use super::CommLevel;
use crate::game::{Command, GameState, Loc, Order, OrderUnit, Power, UnitKind};
use crate::graph::{parse_graph_text, serialize_graph};
use crate::message::{
    ground_into, parse_message, ActKind, Action, CommunicativeAct, MessageContext,
};

fn place(state: &GameState, loc: Loc) -> String {
    let name = &state.map().get(loc.prov).name;
    match loc.coast {
        Some(c) => format!("{name} ({})", c.words()),
        None => name.clone(),
    }
}

fn owner(state: &GameState, loc: Loc) -> Option<Power> {
    state
        .unit_at(loc.prov)
        .map(|u| u.owner)
        .or_else(|| state.dislodged_at(loc.prov).map(|d| d.unit.owner))
}

fn unit_phrase(
    state: &GameState,
    u: OrderUnit,
    owner_of: Option<Power>,
    sender: Power,
    recipient: Power,
) -> String {
    let whose = match owner_of {
        Some(p) if p == sender => "my".to_string(),
        Some(p) if p == recipient => "your".to_string(),
        Some(p) => format!("{}'s", p.name()),
        None => "the".to_string(),
    };
    format!("{whose} {} in {}", u.kind.word(), place(state, u.loc))
}

/// Template English for one order, spoken by `sender` to `recipient`.
/// Commitments read "I will ...", proposals "You should ...".
pub fn order_sentence(
    state: &GameState,
    order: &Order,
    kind: ActKind,
    sender: Power,
    recipient: Power,
) -> String {
    let lead = if kind == ActKind::Proposal {
        "You should"
    } else {
        "I will"
    };
    let me = unit_phrase(
        state,
        order.unit,
        owner(state, order.unit.loc),
        sender,
        recipient,
    );
    let them = |u: OrderUnit| unit_phrase(state, u, owner(state, u.loc), sender, recipient);
    let body = match order.command {
        Command::Hold => format!("hold {me}"),
        Command::Move { dest } => format!("move {me} to {}", place(state, dest)),
        Command::Retreat { dest } => format!("retreat {me} to {}", place(state, dest)),
        Command::Disband => format!("disband {me}"),
        Command::SupportHold { target } => format!("support {} with {me}", them(target)),
        Command::SupportMove { target, dest } => {
            format!(
                "support {} to {} with {me}",
                them(target),
                place(state, Loc::new(dest))
            )
        }
        Command::Convoy { army, dest } => format!(
            "convoy {} to {} with {me}",
            them(OrderUnit::new(UnitKind::Army, Loc::new(army))),
            place(state, Loc::new(dest))
        ),
        Command::Build => format!(
            "build a {} in {}",
            order.unit.kind.word(),
            place(state, order.unit.loc)
        ),
    };
    format!("{lead} {body}.")
}

/// Message text for a grounded act. Random-corpus messages are drawn by the
/// caller, and gunboat agents say nothing, so both give `None`.
pub fn render_message(
    act: &CommunicativeAct,
    level: CommLevel,
    state: &GameState,
) -> Option<String> {
    match level {
        CommLevel::NaturalLanguage => {
            if act.kind == ActKind::Agreement {
                return Some("Sure.".into());
            }
            let order = act.grounded.first()?;
            Some(order_sentence(
                state,
                order,
                act.kind,
                act.sender,
                act.recipient,
            ))
        }
        CommLevel::AmrOnly => Some(serialize_graph(&act.graph)),
        CommLevel::RandomCorpus | CommLevel::Gunboat => None,
    }
}

/// How the recipient reads a message at a given level. Graph messages
/// carry no speech act, so it is read off whose unit acts.
pub fn read_message(text: &str, level: CommLevel, ctx: &MessageContext) -> Vec<CommunicativeAct> {
    match level {
        CommLevel::AmrOnly => {
            let Ok(graph) = parse_graph_text(text) else {
                return Vec::new();
            };
            let Some(action) = Action::from_graph(&graph, ctx.state.map()) else {
                return Vec::new();
            };
            let nation = match &action {
                Action::Build { nation, .. } | Action::Ally { nation, .. } => *nation,
                a => a.acting_unit().and_then(|u| u.nation),
            };
            let (kind, actor) = match nation {
                Some(p) if p == ctx.sender => (ActKind::Commitment, p),
                Some(p) if p == ctx.recipient => (ActKind::Proposal, p),
                Some(p) => (ActKind::ThirdPartyReport, p),
                None => (ActKind::Commitment, ctx.sender),
            };
            let mut act = CommunicativeAct {
                message_id: ctx.message_id.clone(),
                kind,
                sender: ctx.sender,
                recipient: ctx.recipient,
                actor,
                graph,
                conditional: false,
                span: 0..text.len(),
                grounded: Default::default(),
            };
            ground_into(&mut act, ctx);
            vec![act]
        }
        CommLevel::Gunboat => Vec::new(),
        CommLevel::NaturalLanguage | CommLevel::RandomCorpus => parse_message(text, ctx),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::game::{Map, Turn};
    use std::collections::BTreeSet;

    #[test]
    fn skagerrak_sentence() {
        let st = GameState::empty(Map::standard(), Turn::FIRST)
            .with("GER F SKA")
            .unwrap();
        let o: Order = "F SKA - SWE".parse().unwrap();
        assert_eq!(
            order_sentence(&st, &o, ActKind::Commitment, Power::Ger, Power::Eng),
            "I will move my fleet in Skagerrak to Sweden."
        );
        assert_eq!(
            order_sentence(&st, &o, ActKind::Proposal, Power::Eng, Power::Ger),
            "You should move your fleet in Skagerrak to Sweden."
        );
    }

    #[test]
    fn amr_level_round_trip() {
        let st = GameState::initial(Map::standard());
        let o: Order = "A PAR - BUR".parse().unwrap();
        let act = CommunicativeAct::for_order(&st, ActKind::Proposal, Power::Ger, Power::Fra, &o);
        let text = render_message(&act, CommLevel::AmrOnly, &st).unwrap();
        let ctx = MessageContext::new(Power::Ger, Power::Fra, st).unwrap();
        let read = read_message(&text, CommLevel::AmrOnly, &ctx);
        assert_eq!(read.len(), 1);
        assert_eq!(read[0].kind, ActKind::Proposal);
        assert_eq!(read[0].grounded, BTreeSet::from([o]));
    }
}
