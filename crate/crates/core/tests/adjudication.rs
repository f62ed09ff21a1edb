mod common;

use std::collections::BTreeMap;

use common::cases::{check_case, compare_with_oracle, load_cases};
use dipintent::game::{
    adjudicate, legal_builds, legal_moves, parse_order, Command, GameState, Map, Order, Outcome,
    Phase, Power, Season, Turn,
};
use rand::prelude::*;
use rand_chacha::ChaCha8Rng;

#[test]
fn hand_resolved_cases_match_oracle() {
    let cases = load_cases();
    assert_eq!(cases.len(), 25);
    let failures: Vec<String> = cases.iter().filter_map(|c| check_case(c).err()).collect();
    assert!(failures.is_empty(), "{failures:#?}");
}

fn random_orders(state: &GameState, rng: &mut ChaCha8Rng) -> BTreeMap<Power, Vec<Order>> {
    let mut out: BTreeMap<Power, Vec<Order>> = BTreeMap::new();
    match state.turn().phase {
        Phase::Movement | Phase::Retreat => {
            let units: Vec<_> = if state.turn().phase == Phase::Movement {
                state.units().copied().collect()
            } else {
                state.dislodged().iter().map(|d| d.unit).collect()
            };
            for u in units {
                let legal: Vec<Order> = legal_moves(state, &u).into_iter().collect();
                // bias towards moves so the board actually changes
                let moves: Vec<&Order> = legal
                    .iter()
                    .filter(|o| matches!(o.command, Command::Move { .. }))
                    .collect();
                let pick = if !moves.is_empty() && rng.random_bool(0.5) {
                    *moves[rng.random_range(0..moves.len())]
                } else {
                    legal[rng.random_range(0..legal.len())]
                };
                out.entry(u.owner).or_default().push(pick);
            }
        }
        Phase::Adjustment => {
            for p in Power::ALL {
                let builds: Vec<Order> = legal_builds(state, p).into_iter().collect();
                if let Some(b) = builds.choose(rng) {
                    out.entry(p).or_default().push(*b);
                }
            }
        }
    }
    out
}

#[test]
fn fuzzed_turns_conserve_units_and_centers() {
    let mut rng = ChaCha8Rng::seed_from_u64(0xd1f);
    let map = Map::standard();
    let mut state = GameState::initial(map.clone());
    let mut movement_turns = 0;
    while movement_turns < 1000 {
        if state.turn().year > 1910 {
            state = GameState::initial(map.clone());
        }
        let orders = random_orders(&state, &mut rng);
        let (next, report) = adjudicate(&state, &orders).unwrap();
        let sc_total: usize = Power::ALL
            .iter()
            .map(|&p| next.supply_center_count(p))
            .sum();
        assert!(sc_total <= 34);
        let disbanded = report
            .results
            .iter()
            .filter(|r| r.outcome == Outcome::Disbanded)
            .count();
        let built = report
            .results
            .iter()
            .filter(|r| r.outcome == Outcome::Built)
            .count();
        match state.turn().phase {
            Phase::Movement => {
                movement_turns += 1;
                assert_eq!(
                    next.unit_count() + next.dislodged().len() + disbanded,
                    state.unit_count(),
                    "{}",
                    state.turn()
                );
            }
            Phase::Retreat => {
                assert_eq!(
                    next.unit_count() + disbanded,
                    state.unit_count() + state.dislodged().len()
                );
            }
            Phase::Adjustment => {
                assert_eq!(next.unit_count() + disbanded, state.unit_count() + built);
                for p in Power::ALL {
                    assert!(
                        next.units_of(p).count()
                            <= next.supply_center_count(p).max(state.units_of(p).count())
                    );
                }
            }
        }
        if next.turn().phase != Phase::Adjustment {
            assert_eq!(
                next.sc_ownership(),
                state.sc_ownership(),
                "centers changed outside a fall close"
            );
        }
        let mut seen = std::collections::BTreeSet::new();
        for u in next.units() {
            assert!(seen.insert(u.loc.prov));
        }
        state = next;
    }
}

#[test]
fn random_turns_agree_with_oracle() {
    let mut rng = ChaCha8Rng::seed_from_u64(17);
    let map = Map::standard();
    let mut checked = 0;
    let mut state = GameState::initial(map.clone());
    while checked < 150 {
        if state.turn().year > 1906 {
            state = GameState::initial(map.clone());
        }
        let mut orders = random_orders(&state, &mut rng);
        if state.turn().phase == Phase::Movement {
            // keep enumeration small: moves past the tenth become holds
            let mut n_moves = 0;
            for o in orders.values_mut().flatten() {
                if matches!(o.command, Command::Move { .. }) {
                    n_moves += 1;
                    if n_moves > 10 {
                        *o = Order::hold(o.unit);
                    }
                }
            }
            let flat: Vec<Order> = orders.values().flatten().copied().collect();
            compare_with_oracle(&state, &flat)
                .unwrap_or_else(|e| panic!("{}: {e}\n{flat:?}", state.turn()));
            checked += 1;
        }
        state = adjudicate(&state, &orders).unwrap().0;
    }
}

fn orders_for(state: &GameState, texts: &[&str]) -> BTreeMap<Power, Vec<Order>> {
    let mut out: BTreeMap<Power, Vec<Order>> = BTreeMap::new();
    for t in texts {
        let o = parse_order(t, state.map(), Some(state)).unwrap();
        let owner = state
            .dislodged_at(o.prov())
            .map(|d| d.unit.owner)
            .or_else(|| state.unit_at(o.prov()).map(|u| u.owner))
            .or_else(|| state.map().get(o.prov()).home)
            .unwrap();
        out.entry(owner).or_default().push(o);
    }
    out
}

#[test]
fn phase_flow_through_a_year() {
    let map = Map::standard();
    let st = GameState::initial(map.clone());
    let (st, _) = adjudicate(&st, &orders_for(&st, &["A PAR - BUR", "F BRE - MAO"])).unwrap();
    assert_eq!(st.turn().to_string(), "F1901M");
    let (st, _) = adjudicate(&st, &orders_for(&st, &["F MAO - POR", "A BUR - BEL"])).unwrap();
    assert_eq!(st.turn().to_string(), "W1901A");
    assert_eq!(st.supply_center_count(Power::Fra), 5);
    let (st, report) = adjudicate(&st, &orders_for(&st, &["A PAR B", "F BRE B"])).unwrap();
    assert_eq!(st.turn(), Turn::movement(1902, Season::Spring));
    assert_eq!(
        report
            .results
            .iter()
            .filter(|r| r.outcome == Outcome::Built)
            .count(),
        2
    );
    assert_eq!(st.units_of(Power::Fra).count(), 5);
}

#[test]
fn retreat_phase_and_standoff_block() {
    let map = Map::standard();
    let st = GameState::empty(map.clone(), Turn::FIRST)
        .with("GER A BUR")
        .unwrap()
        .with("FRA A PAR")
        .unwrap()
        .with("FRA A MAR")
        .unwrap()
        .with("ITA A TYR")
        .unwrap()
        .with("AUS A BOH")
        .unwrap();
    // MUN is contested and left empty; BUR is taken from PAR.
    let orders = orders_for(
        &st,
        &[
            "A PAR - BUR",
            "A MAR S A PAR - BUR",
            "A TYR - MUN",
            "A BOH - MUN",
        ],
    );
    let (st, report) = adjudicate(&st, &orders).unwrap();
    assert_eq!(st.turn().phase, Phase::Retreat);
    assert_eq!(report.dislodged.len(), 1);
    assert!(st.standoffs().contains(&map.prov("MUN").unwrap()));
    let legal: Vec<String> = legal_moves(&st, &report.dislodged[0].unit)
        .iter()
        .map(|o| o.to_string())
        .collect();
    assert!(!legal.contains(&"A BUR R MUN".to_string()));
    assert!(!legal.contains(&"A BUR R PAR".to_string()));
    assert!(legal.contains(&"A BUR R RUH".to_string()));
    let (st, _) = adjudicate(&st, &orders_for(&st, &["A BUR R RUH"])).unwrap();
    assert_eq!(st.turn().to_string(), "F1901M");
    assert_eq!(
        st.unit_at(map.prov("RUH").unwrap()).unwrap().owner,
        Power::Ger
    );
}

#[test]
fn missing_disbands_pick_farthest_unit() {
    let map = Map::standard();
    let st = GameState::empty(
        map.clone(),
        Turn::new(1901, Season::Fall, Phase::Adjustment),
    )
    .with("ENG F LON")
    .unwrap()
    .with("ENG A YOR")
    .unwrap()
    .with("ENG F NAF")
    .unwrap()
    .with_owner(map.prov("LON").unwrap(), Power::Eng)
    .unwrap()
    .with_owner(map.prov("EDI").unwrap(), Power::Eng)
    .unwrap();
    let (st, report) = adjudicate(&st, &BTreeMap::new()).unwrap();
    assert!(st.unit_at(map.prov("NAF").unwrap()).is_none());
    assert_eq!(st.units_of(Power::Eng).count(), 2);
    assert!(report.results[0].defaulted);
}

#[test]
fn phase_mismatch_is_an_error() {
    let map = Map::standard();
    let st = GameState::initial(map.clone());
    let o = parse_order("A PAR B", &map, None).unwrap();
    assert!(adjudicate(&st, &BTreeMap::from([(Power::Fra, vec![o])])).is_err());
}

#[test]
fn adjudication_is_deterministic_across_threads() {
    let map = Map::standard();
    let st = GameState::initial(map);
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let orders = random_orders(&st, &mut rng);
    let base = adjudicate(&st, &orders).unwrap();
    let handles: Vec<_> = (0..4)
        .map(|_| {
            let (st, orders) = (st.clone(), orders.clone());
            std::thread::spawn(move || adjudicate(&st, &orders).unwrap())
        })
        .collect();
    for h in handles {
        assert_eq!(h.join().unwrap(), base);
    }
}
