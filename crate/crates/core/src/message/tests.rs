use super::*;
use crate::game::{Map, Order, Power};

fn skagerrak_state() -> GameState {
    GameState::empty(Map::standard(), Turn::FIRST)
        .with("ENG F NWY")
        .unwrap()
        .with("GER F SKA")
        .unwrap()
        .with("RUS F STP/SC")
        .unwrap()
}

fn ctx(sender: Power, recipient: Power, state: &GameState) -> MessageContext {
    MessageContext::new(sender, recipient, state.clone())
        .unwrap()
        .with_id("m")
}

fn order(s: &str) -> Order {
    s.parse().unwrap()
}

#[test]
fn skagerrak_england_message() {
    let st = skagerrak_state();
    let acts = parse_message(
        "You can steal STP from Russia if you're in SWE next turn. I will support you there.",
        &ctx(Power::Eng, Power::Ger, &st),
    );
    let kinds: Vec<_> = acts.iter().map(|a| (a.kind, a.conditional)).collect();
    assert_eq!(
        kinds,
        vec![
            (ActKind::Proposal, true),
            (ActKind::Proposal, false),
            (ActKind::Commitment, false)
        ]
    );
    assert!(acts[0].graph.to_string().contains(":condition"));
    assert_eq!(acts[1].actor, Power::Ger);
    assert_eq!(acts[1].grounded, BTreeSet::from([order("F SKA - SWE")]));
    assert_eq!(
        acts[2].grounded,
        BTreeSet::from([order("F NWY S F SKA - SWE")])
    );
}

#[test]
fn sure_binds_to_last_proposal() {
    let st = skagerrak_state();
    let msgs = vec![
        Message {
            id: "1".into(),
            game_id: String::new(),
            turn: Turn::FIRST,
            sender: Power::Eng,
            recipient: Power::Ger,
            text: "You can steal STP from Russia if you're in SWE next turn. I will support you there.".into(),
            gold_graph: None,
        },
        Message {
            id: "2".into(),
            game_id: String::new(),
            turn: Turn::FIRST,
            sender: Power::Ger,
            recipient: Power::Eng,
            text: "Sure".into(),
            gold_graph: None,
        },
    ];
    let acts = parse_turn(&msgs, &st);
    let last = acts.last().unwrap();
    assert_eq!(last.kind, ActKind::Agreement);
    assert_eq!(last.actor, Power::Ger);
    assert_eq!(last.message_id, "2");
    assert_eq!(last.grounded, BTreeSet::from([order("F SKA - SWE")]));
}

#[test]
fn chatter_yields_nothing() {
    let st = skagerrak_state();
    for t in [
        "Lemme think about your idea",
        "haha",
        "Was the bounce in EC planned?",
        "Sure",
    ] {
        assert!(
            parse_message(t, &ctx(Power::Ger, Power::Eng, &st)).is_empty(),
            "{t}"
        );
    }
}

#[test]
fn conditional_commitment_is_flagged() {
    let st = GameState::empty(Map::standard(), Turn::FIRST)
        .with("ITA A SER")
        .unwrap();
    let acts = parse_message(
        "I will do that if Serbia gets dislodged",
        &ctx(Power::Ita, Power::Tur, &st),
    );
    assert!(acts
        .iter()
        .all(|a| a.conditional || a.kind != ActKind::Commitment));
}

#[test]
fn negation_drops_the_act() {
    let st = GameState::initial(Map::standard());
    let acts = parse_message(
        "I'm not gonna move out of Belgium",
        &ctx(Power::Fra, Power::Ger, &st),
    );
    assert!(acts.is_empty());
}

#[test]
fn alliance_talk_has_no_orders() {
    let st = GameState::initial(Map::standard());
    let acts = parse_message(
        "Hey Italy! I think the I/T is the strongest alliance in the game, would you be interested in working together",
        &ctx(Power::Tur, Power::Ita, &st),
    );
    assert!(acts.iter().all(|a| a.grounded.is_empty()));
}

#[test]
fn third_party_report_not_grounded() {
    let st = GameState::initial(Map::standard());
    let acts = parse_message(
        "Russia is moving to Galicia",
        &ctx(Power::Aus, Power::Ita, &st),
    );
    assert_eq!(acts.len(), 1);
    assert_eq!(acts[0].kind, ActKind::ThirdPartyReport);
    assert!(acts[0].grounded.is_empty());
}

#[test]
fn imperative_is_a_proposal() {
    let st = GameState::initial(Map::standard());
    let acts = parse_message(
        "You should probably move Marseilles -> Spain.",
        &ctx(Power::Ger, Power::Fra, &st),
    );
    assert_eq!(acts.len(), 1);
    assert_eq!(acts[0].kind, ActKind::Proposal);
    assert_eq!(acts[0].grounded, BTreeSet::from([order("A MAR - SPA")]));
}

#[test]
fn fleet_to_split_coast_gets_each_coast() {
    let st = GameState::empty(Map::standard(), Turn::FIRST)
        .with("FRA F MAO")
        .unwrap();
    let acts = parse_message(
        "I will move my fleet to Spain",
        &ctx(Power::Fra, Power::Ger, &st),
    );
    assert_eq!(
        acts[0].grounded,
        BTreeSet::from([order("F MAO - SPA/NC"), order("F MAO - SPA/SC")])
    );
}

#[test]
fn no_actor_unit_is_an_error() {
    let st = skagerrak_state();
    let a = CommunicativeAct::for_order(
        &st,
        ActKind::Commitment,
        Power::Eng,
        Power::Ger,
        &order("F NWY - SWE"),
    );
    let mut b = a.clone();
    b.sender = Power::Fra;
    b.actor = Power::Fra;
    let map = st.map().clone();
    let mut g = b.action(&map).unwrap();
    if let Some(u) = g.acting_unit_mut() {
        u.nation = None;
    }
    b.graph = g.to_graph();
    assert_eq!(
        ground(&a, &ctx(Power::Eng, Power::Ger, &st)).unwrap().len(),
        1
    );
    assert!(matches!(
        ground(&b, &ctx(Power::Fra, Power::Ger, &st)),
        Err(MessageError::NoActorUnit { .. })
    ));
}

#[test]
fn same_power_rejected() {
    let st = skagerrak_state();
    assert_eq!(
        MessageContext::new(Power::Eng, Power::Eng, st).unwrap_err(),
        MessageError::SamePower(Power::Eng)
    );
}

#[test]
fn act_serde_round_trip() {
    let st = skagerrak_state();
    let a = CommunicativeAct::for_order(
        &st,
        ActKind::Proposal,
        Power::Eng,
        Power::Ger,
        &order("F SKA - SWE"),
    );
    let j = serde_json::to_string(&a).unwrap();
    let b: CommunicativeAct = serde_json::from_str(&j).unwrap();
    assert!(crate::graph::isomorphic(&a.graph, &b.graph));
    assert_eq!(a.grounded, b.grounded);
}
