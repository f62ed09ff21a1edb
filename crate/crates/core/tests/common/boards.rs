// Random boards and the full set of legal orders on them.

use std::collections::BTreeSet;

use dipintent::game::{
    legal_builds, legal_moves, Command, GameState, Loc, Map, Order, Phase, Power, Season, Turn,
    Unit, UnitKind,
};
use rand::seq::IndexedRandom;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

/// A spring board with some starting units dropped and others scattered,
/// or (30% of the time) a winter board with builds owed.
pub fn random_state(rng: &mut ChaCha8Rng) -> GameState {
    let map = Map::standard();
    let mut st = GameState::initial(map.clone());
    let adjustment = rng.random_bool(0.3);
    if adjustment {
        st = st.with_turn(Turn::new(1901, Season::Fall, Phase::Adjustment));
    }
    // rebuild the board: drop some starting units, scatter others
    let keep: Vec<Unit> = st
        .units()
        .copied()
        .filter(|_| rng.random_bool(0.6))
        .collect();
    let mut out = GameState::empty(map.clone(), st.turn());
    for p in map.provinces().filter(|p| p.supply_center) {
        if let Some(h) = p.home {
            out = out.with_owner(p.code, h).unwrap();
        }
    }
    for u in keep {
        out = out.with_unit(u.owner, u.kind, u.loc).unwrap();
    }
    if !adjustment {
        let provs: Vec<_> = map.provinces().map(|p| p.code).collect();
        for _ in 0..12 {
            let p = *provs.choose(rng).unwrap();
            let kind = if rng.random_bool(0.5) {
                UnitKind::Army
            } else {
                UnitKind::Fleet
            };
            let coast = map.get(p).coasts.choose(rng).copied();
            let loc = match (kind, coast) {
                (UnitKind::Fleet, Some(c)) => Loc::with_coast(p, c),
                _ => Loc::new(p),
            };
            let owner = *Power::ALL.choose(rng).unwrap();
            if let Ok(s) = out.clone().with_unit(owner, kind, loc) {
                out = s;
            }
        }
    }
    out
}

pub fn owner_of(state: &GameState, o: &Order) -> Power {
    match o.command {
        Command::Build => state.map().get(o.prov()).home.unwrap(),
        _ => state.unit_at(o.prov()).unwrap().owner,
    }
}

pub fn universe(state: &GameState) -> BTreeSet<Order> {
    let mut all: BTreeSet<Order> = state.units().flat_map(|u| legal_moves(state, u)).collect();
    for p in Power::ALL {
        all.extend(legal_builds(state, p));
    }
    all
}
