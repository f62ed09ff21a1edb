//! Shared fixtures for the benchmarks.

use std::collections::BTreeMap;

use dipintent::game::{GameState, Map, Order, Power, Turn};
use dipintent::graph::{random_graph, IntentGraph};
use dipintent::message::MessageContext;
use dipintent::sim::{AgentConfig, CommLevel, GameConfig};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub const SKAGERRAK_TEXT: &str =
    "You can steal STP from Russia if you're in SWE next turn. I will support you there.";

/// England to Germany, fall 1901, with the three fleets from the example.
pub fn skagerrak_context() -> MessageContext {
    let mut st = GameState::empty(Map::standard(), "F1901M".parse::<Turn>().unwrap());
    for u in ["ENG F NWY", "GER F SKA", "RUS F STP/SC"] {
        st = st.with(u).unwrap();
    }
    MessageContext::new(Power::Eng, Power::Ger, st).unwrap()
}

/// Starting position with every unit holding.
pub fn opening_holds() -> (GameState, BTreeMap<Power, Vec<Order>>) {
    let st = GameState::initial(Map::standard());
    let mut orders: BTreeMap<Power, Vec<Order>> = BTreeMap::new();
    for u in st.units() {
        orders
            .entry(u.owner)
            .or_default()
            .push(Order::hold(u.order_unit()));
    }
    (st, orders)
}

pub fn graph_pairs(n: usize, max_vars: usize, seed: u64) -> Vec<(IntentGraph, IntentGraph)> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..n)
        .map(|_| {
            (
                random_graph(&mut rng, max_vars),
                random_graph(&mut rng, max_vars),
            )
        })
        .collect()
}

pub fn short_game(turns: u32) -> GameConfig {
    let mut g = GameConfig::with_talkers(
        "bench",
        &[Power::Eng, Power::Fra, Power::Ger],
        CommLevel::NaturalLanguage,
        AgentConfig::negotiator(),
        AgentConfig::gunboat(),
    );
    g.turns = turns;
    g
}
