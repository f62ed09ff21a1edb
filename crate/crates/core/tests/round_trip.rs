// Rendering then parsing: template English back to the same grounded
// orders, and graphs through text.

mod common;

use std::collections::BTreeSet;

use common::boards::{owner_of, random_state, universe};
use dipintent::game::{Order, Power};
use dipintent::graph::{isomorphic, parse_graph_text, random_graph, serialize_graph};
use dipintent::message::{parse_message, ActKind, CommunicativeAct, MessageContext};
use dipintent::sim::{render_message, CommLevel};
use rand::seq::IndexedRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn other(p: Power, rng: &mut ChaCha8Rng) -> Power {
    let rest: Vec<Power> = Power::ALL.into_iter().filter(|&q| q != p).collect();
    *rest.choose(rng).unwrap()
}

#[test]
fn natural_language_round_trip() {
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    let mut failures = Vec::new();
    let mut n = 0;
    while n < 500 {
        let st = random_state(&mut rng);
        let all: Vec<Order> = universe(&st).into_iter().collect();
        let Some(&o) = all.choose(&mut rng) else {
            continue;
        };
        n += 1;
        let owner = owner_of(&st, &o);
        let (kind, sender, recipient) = if rng.random_bool(0.5) {
            (ActKind::Commitment, owner, other(owner, &mut rng))
        } else {
            (ActKind::Proposal, other(owner, &mut rng), owner)
        };
        let act = CommunicativeAct::for_order(&st, kind, sender, recipient, &o);
        let text = render_message(&act, CommLevel::NaturalLanguage, &st).unwrap();
        let ctx = MessageContext::new(sender, recipient, st.clone()).unwrap();
        let read = parse_message(&text, &ctx);
        let ok = read.len() == 1 && read[0].kind == kind && read[0].grounded == BTreeSet::from([o]);
        if !ok {
            failures.push(format!(
                "{o} {text:?} -> {:?}",
                read.iter()
                    .map(|a| (a.kind, &a.grounded))
                    .collect::<Vec<_>>()
            ));
        }
    }
    assert!(
        failures.is_empty(),
        "{} of 500 failed:\n{}",
        failures.len(),
        failures.join("\n")
    );
}

#[test]
fn graph_text_round_trip() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for _ in 0..200 {
        let g = random_graph(&mut rng, 8);
        let text = serialize_graph(&g);
        let back = parse_graph_text(&text).unwrap_or_else(|e| panic!("{e}: {text}"));
        assert!(isomorphic(&back, &g), "{text}");
    }
}
