//! Scripted one-ply order policies.

use std::collections::{BTreeMap, BTreeSet, VecDeque};

use rand::seq::SliceRandom;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::game::rules::adjustment_delta;
use crate::game::{
    legal_builds, legal_moves, validate_order, Command, GameState, Order, OrderKind, Power, Prov,
    Terrain, Unit, UnitKind,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Policy {
    /// Grabs the nearest centers it does not own.
    Greedy,
    /// Sits on its own centers, supporting threatened ones.
    Defensive,
    /// Greedy orders, plus talking.
    Negotiator,
}

/// Steps from each province to the nearest center `power` does not own,
/// moving as a unit of `kind` would.
fn distances(state: &GameState, power: Power, kind: UnitKind) -> BTreeMap<Prov, u32> {
    let map = state.map();
    let passable = |p: Prov| match map.terrain(p) {
        Some(Terrain::Sea) => kind == UnitKind::Fleet,
        Some(Terrain::Land) => kind == UnitKind::Army,
        Some(Terrain::Coastal) => true,
        None => false,
    };
    let mut dist = BTreeMap::new();
    let mut queue = VecDeque::new();
    for p in map
        .provinces()
        .filter(|p| p.supply_center && state.owner(p.code) != Some(power))
    {
        if passable(p.code) {
            dist.insert(p.code, 0);
            queue.push_back(p.code);
        }
    }
    while let Some(p) = queue.pop_front() {
        let d = dist[&p];
        for q in map.neighbors(p) {
            if passable(q) && !dist.contains_key(&q) {
                dist.insert(q, d + 1);
                queue.push_back(q);
            }
        }
    }
    dist
}

fn threatened(state: &GameState, power: Power, p: Prov) -> bool {
    let map = state.map();
    map.neighbors(p)
        .into_iter()
        .filter_map(|q| state.unit_at(q))
        .any(|u| u.owner != power && map.can_reach(u.kind, u.loc, p))
}

/// Hold plus every legal move to an adjacent province.
pub(crate) fn simple_options(state: &GameState, unit: &Unit) -> Vec<Order> {
    let me = unit.order_unit();
    let mut out = vec![Order::hold(me)];
    let map = state.map();
    let dests: Vec<crate::game::Loc> = match unit.kind {
        UnitKind::Fleet => map.fleet_destinations(unit.loc).to_vec(),
        UnitKind::Army => map
            .get(unit.loc.prov)
            .army_neighbors()
            .map(crate::game::Loc::new)
            .collect(),
    };
    for d in dests {
        let o = Order::move_to(me, d);
        if validate_order(state, &o).is_ok() {
            out.push(o);
        }
    }
    out
}

/// Movement orders for every unit of `power`, keyed by province.
pub(crate) fn plan_movement<R: Rng + ?Sized>(
    state: &GameState,
    power: Power,
    policy: Policy,
    rng: &mut R,
) -> BTreeMap<Prov, Order> {
    let map = state.map();
    let defensive = policy == Policy::Defensive;
    let dist = [
        distances(state, power, UnitKind::Army),
        distances(state, power, UnitKind::Fleet),
    ];
    let far = |kind: UnitKind, p: Prov| {
        let d = &dist[usize::from(kind == UnitKind::Fleet)];
        f64::from(d.get(&p).copied().unwrap_or(12))
    };
    let mut units: Vec<Unit> = state.units_of(power).copied().collect();
    units.shuffle(rng);
    let mut claimed: BTreeSet<Prov> = BTreeSet::new();
    let mut plan: BTreeMap<Prov, Order> = BTreeMap::new();
    for u in &units {
        let here = u.loc.prov;
        let own_sc = map.get(here).supply_center && state.owner(here) == Some(power);
        let mut best: Option<(f64, Order)> = None;
        for o in simple_options(state, u) {
            let score = match o.command {
                Command::Move { dest } => {
                    let d = dest.prov;
                    let occupant = state.unit_at(d);
                    if claimed.contains(&d) || occupant.is_some_and(|x| x.owner == power) {
                        continue;
                    }
                    let p = map.get(d);
                    let mut s = if p.supply_center && state.owner(d) != Some(power) {
                        10.0
                    } else {
                        6.0 - far(u.kind, d)
                    };
                    if occupant.is_some() {
                        s -= 2.0;
                    }
                    if defensive {
                        s -= 3.0;
                    }
                    s
                }
                _ => {
                    let mut s = 5.0 - far(u.kind, here);
                    if own_sc && threatened(state, power, here) {
                        s = s.max(8.0);
                    }
                    if defensive && own_sc {
                        s += 4.0;
                    }
                    s
                }
            } + rng.random::<f64>() * 1.5;
            if best.as_ref().is_none_or(|(b, _)| score > *b) {
                best = Some((score, o));
            }
        }
        let (_, o) = best.expect("hold is always an option");
        claimed.insert(match o.command {
            Command::Move { dest } => dest.prov,
            _ => here,
        });
        plan.insert(here, o);
    }
    coordinate_supports(state, power, defensive, &mut plan);
    plan
}

/// Idle holders back up moves into contested provinces, or (defensive)
/// threatened neighbors.
fn coordinate_supports(
    state: &GameState,
    power: Power,
    defensive: bool,
    plan: &mut BTreeMap<Prov, Order>,
) {
    let map = state.map();
    let moves: Vec<Order> = plan
        .values()
        .filter(|o| o.kind() == OrderKind::Move)
        .copied()
        .collect();
    let mut helped: BTreeSet<Prov> = BTreeSet::new();
    let holders: Vec<Prov> = plan
        .iter()
        .filter(|(_, o)| o.kind() == OrderKind::Hold)
        .map(|(p, _)| *p)
        .collect();
    for h in holders {
        let unit = *state.unit_at(h).unwrap();
        let on_threatened_sc = map.get(h).supply_center && threatened(state, power, h);
        if on_threatened_sc && !defensive {
            continue;
        }
        let pick = moves.iter().find_map(|m| {
            let Command::Move { dest } = m.command else {
                return None;
            };
            let d = dest.prov;
            let contested = state.unit_at(d).is_some() || threatened(state, power, d);
            if !contested || helped.contains(&d) || d == h || !map.can_reach(unit.kind, unit.loc, d)
            {
                return None;
            }
            let o = Order::new(
                unit.order_unit(),
                Command::SupportMove {
                    target: m.unit,
                    dest: d,
                },
            );
            validate_order(state, &o).is_ok().then_some((d, o))
        });
        let pick = pick.or_else(|| {
            if !defensive {
                return None;
            }
            plan.iter().find_map(|(&p, o)| {
                let target = state.unit_at(p)?;
                if o.kind() != OrderKind::Hold
                    || p == h
                    || helped.contains(&p)
                    || !threatened(state, power, p)
                {
                    return None;
                }
                let s = Order::new(
                    unit.order_unit(),
                    Command::SupportHold {
                        target: target.order_unit(),
                    },
                );
                validate_order(state, &s).is_ok().then_some((p, s))
            })
        });
        if let Some((d, o)) = pick {
            helped.insert(d);
            plan.insert(h, o);
        }
    }
}

/// A retreat for each dislodged unit, preferring centers; disband if
/// nowhere to go.
pub(crate) fn plan_retreats<R: Rng + ?Sized>(
    state: &GameState,
    power: Power,
    rng: &mut R,
) -> Vec<Order> {
    let map = state.map();
    let mut taken = BTreeSet::new();
    let mut out = Vec::new();
    for d in state.dislodged().iter().filter(|d| d.unit.owner == power) {
        let mut opts: Vec<Order> = legal_moves(state, &d.unit)
            .into_iter()
            .filter(
                |o| matches!(o.command, Command::Retreat { dest } if !taken.contains(&dest.prov)),
            )
            .collect();
        opts.shuffle(rng);
        opts.sort_by_key(|o| match o.command {
            Command::Retreat { dest } => !map.get(dest.prov).supply_center,
            _ => true,
        });
        let o = opts
            .first()
            .copied()
            .unwrap_or(Order::new(d.unit.order_unit(), Command::Disband));
        if let Command::Retreat { dest } = o.command {
            taken.insert(dest.prov);
        }
        out.push(o);
    }
    out
}

/// Builds on free home centers, or disbands units off centers first.
pub(crate) fn plan_adjustments<R: Rng + ?Sized>(
    state: &GameState,
    power: Power,
    rng: &mut R,
) -> Vec<Order> {
    let delta = adjustment_delta(state, power);
    let map = state.map();
    let mut out = Vec::new();
    if delta > 0 {
        let builds = legal_builds(state, power);
        let mut provs: Vec<Prov> = builds
            .iter()
            .map(|o| o.prov())
            .collect::<BTreeSet<_>>()
            .into_iter()
            .collect();
        provs.shuffle(rng);
        for p in provs.into_iter().take(delta as usize) {
            let here: Vec<&Order> = builds.iter().filter(|o| o.prov() == p).collect();
            let fleet = rng.random_bool(0.4);
            let pick = here
                .iter()
                .find(|o| (o.unit.kind == UnitKind::Fleet) == fleet)
                .or(here.first())
                .copied();
            out.extend(pick.copied());
        }
    } else if delta < 0 {
        let mut units: Vec<Unit> = state.units_of(power).copied().collect();
        units.shuffle(rng);
        units.sort_by_key(|u| map.get(u.loc.prov).supply_center);
        out.extend(
            units
                .into_iter()
                .take((-delta) as usize)
                .map(|u| Order::new(u.order_unit(), Command::Disband)),
        );
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::game::{validate_for, Map};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn plans_are_legal_and_complete() {
        let st = GameState::initial(Map::standard());
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for p in Power::ALL {
            for pol in [Policy::Greedy, Policy::Defensive, Policy::Negotiator] {
                let plan = plan_movement(&st, p, pol, &mut rng);
                assert_eq!(plan.len(), st.units_of(p).count());
                for o in plan.values() {
                    assert!(validate_for(&st, p, o).is_ok(), "{o}");
                }
            }
        }
    }

    #[test]
    fn greedy_opens_toward_neutral_centers() {
        let st = GameState::initial(Map::standard());
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let moves = (0..20)
            .flat_map(|_| plan_movement(&st, Power::Fra, Policy::Greedy, &mut rng).into_values())
            .filter(|o| o.kind() == OrderKind::Move)
            .count();
        assert!(moves > 20);
    }
}
