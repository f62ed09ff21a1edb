//! Order legality: per-phase validation and enumeration of legal orders.

use std::collections::{BTreeSet, HashSet};

use serde::Serialize;

use super::map::{Loc, Prov, Terrain, UnitKind};
use super::order::{Command, Order, OrderKind, OrderUnit};
use super::power::Power;
use super::state::{GameState, Phase, Unit};

/// Rule family a diagnostic belongs to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Rule {
    Phase,
    Occupancy,
    UnitKind,
    Adjacency,
    Convoy,
    Support,
    Ownership,
    BuildRule,
    Retreat,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum Diagnostic {
    #[error("phase: {kind:?} orders are not accepted in the {phase:?} phase")]
    WrongPhase { phase: Phase, kind: OrderKind },
    #[error("occupancy: no {0} on the board")]
    NoUnit(OrderUnit),
    #[error("unit kind: {kind} cannot stand in {loc}")]
    Terrain { kind: UnitKind, loc: Loc },
    #[error("adjacency: {from} does not border {to}")]
    NotAdjacent { from: Loc, to: Loc },
    #[error("convoy: no convoy route from {from} to {to}")]
    NoConvoyRoute { from: Prov, to: Prov },
    #[error("convoy: {0} is not a fleet at sea")]
    ConvoyNotAtSea(OrderUnit),
    #[error("convoy: no army in {0}")]
    ConvoyNoArmy(Prov),
    #[error("support: no {0} to support")]
    SupportNoTarget(OrderUnit),
    #[error("support: a unit cannot support itself")]
    SupportSelf,
    #[error("support: {supporter} cannot reach {dest}")]
    SupportCannotReach { supporter: OrderUnit, dest: Prov },
    #[error("support: {target} cannot reach {dest}")]
    TargetCannotReach { target: OrderUnit, dest: Prov },
    #[error("ownership: {unit} is not controlled by {power}")]
    NotOwner { unit: String, power: Power },
    #[error("build rule: {0} is not a home supply center")]
    BuildNotHome(Prov),
    #[error("build rule: {0} is not owned by its home power")]
    BuildNotOwned(Prov),
    #[error("build rule: {0} is occupied")]
    BuildOccupied(Prov),
    #[error("build rule: {0} has no builds available")]
    NoBuildsAvailable(Power),
    #[error("build rule: {0} does not need to disband")]
    DisbandNotRequired(Power),
    #[error("retreat: {0} was not dislodged")]
    NotDislodged(OrderUnit),
    #[error("retreat: {0} is where the attack came from")]
    RetreatToAttacker(Prov),
    #[error("retreat: {0} was left vacant by a standoff")]
    RetreatToStandoff(Prov),
    #[error("retreat: {0} is occupied")]
    RetreatOccupied(Prov),
}

impl Diagnostic {
    pub fn rule(&self) -> Rule {
        use Diagnostic::*;
        match self {
            WrongPhase { .. } => Rule::Phase,
            NoUnit(_) => Rule::Occupancy,
            Terrain { .. } => Rule::UnitKind,
            NotAdjacent { .. } => Rule::Adjacency,
            NoConvoyRoute { .. } | ConvoyNotAtSea(_) | ConvoyNoArmy(_) => Rule::Convoy,
            SupportNoTarget(_)
            | SupportSelf
            | SupportCannotReach { .. }
            | TargetCannotReach { .. } => Rule::Support,
            NotOwner { .. } => Rule::Ownership,
            BuildNotHome(_)
            | BuildNotOwned(_)
            | BuildOccupied(_)
            | NoBuildsAvailable(_)
            | DisbandNotRequired(_) => Rule::BuildRule,
            NotDislodged(_) | RetreatToAttacker(_) | RetreatToStandoff(_) | RetreatOccupied(_) => {
                Rule::Retreat
            }
        }
    }
}

/// Checks one order against the board. Diagnostics are values, not errors.
pub fn validate_order(state: &GameState, order: &Order) -> Result<(), Diagnostic> {
    let phase = state.turn().phase;
    let kind = order.kind();
    let allowed = match phase {
        Phase::Movement => matches!(
            kind,
            OrderKind::Hold
                | OrderKind::Move
                | OrderKind::SupportHold
                | OrderKind::SupportMove
                | OrderKind::Convoy
        ),
        Phase::Retreat => matches!(kind, OrderKind::Retreat | OrderKind::Disband),
        Phase::Adjustment => matches!(kind, OrderKind::Build | OrderKind::Disband),
    };
    if !allowed {
        return Err(Diagnostic::WrongPhase { phase, kind });
    }
    match phase {
        Phase::Movement => validate_movement(state, order),
        Phase::Retreat => validate_retreat(state, order),
        Phase::Adjustment => validate_adjustment(state, order),
    }
}

/// [`validate_order`] plus the check that `power` controls the ordered unit
/// (or, for builds, that the center is one of `power`'s homes).
pub fn validate_for(state: &GameState, power: Power, order: &Order) -> Result<(), Diagnostic> {
    let owner = match order.command {
        Command::Build => state.map().province(order.prov()).and_then(|p| p.home),
        _ if state.turn().phase == Phase::Retreat => {
            state.dislodged_at(order.prov()).map(|d| d.unit.owner)
        }
        _ => state.unit_at(order.prov()).map(|u| u.owner),
    };
    if let Some(owner) = owner {
        if owner != power {
            return Err(Diagnostic::NotOwner {
                unit: order.unit.to_string(),
                power,
            });
        }
    }
    validate_order(state, order)
}

fn board_unit(state: &GameState, u: OrderUnit) -> Result<&Unit, Diagnostic> {
    match state.unit_at(u.loc.prov) {
        Some(b) if b.kind == u.kind && b.loc == u.loc => Ok(b),
        _ => Err(Diagnostic::NoUnit(u)),
    }
}

fn check_terrain(state: &GameState, kind: UnitKind, loc: Loc) -> Result<(), Diagnostic> {
    state
        .check_placement(kind, loc)
        .map_err(|_| Diagnostic::Terrain { kind, loc })
}

/// Whether unit `u` could move to province `dest` this turn: by adjacency,
/// or for armies by some chain of fleets at sea.
pub fn can_move_to(state: &GameState, u: OrderUnit, dest: Prov) -> bool {
    let map = state.map();
    if u.loc.prov == dest {
        return false;
    }
    match u.kind {
        UnitKind::Fleet => map.fleet_reaches(u.loc, dest),
        UnitKind::Army => {
            map.army_adjacent(u.loc.prov, dest)
                || (map.terrain(dest) == Some(Terrain::Coastal)
                    && convoy_route(state, u.loc.prov, dest, None))
        }
    }
}

fn validate_movement(state: &GameState, order: &Order) -> Result<(), Diagnostic> {
    let map = state.map();
    let unit = board_unit(state, order.unit)?;
    match order.command {
        Command::Hold => Ok(()),
        Command::Move { dest } => {
            if map.province(dest.prov).is_none() || dest.prov == unit.loc.prov {
                return Err(Diagnostic::NotAdjacent {
                    from: unit.loc,
                    to: dest,
                });
            }
            check_terrain(state, unit.kind, dest)?;
            match unit.kind {
                UnitKind::Fleet => {
                    if map.fleet_adjacent(unit.loc, dest) {
                        Ok(())
                    } else {
                        Err(Diagnostic::NotAdjacent {
                            from: unit.loc,
                            to: dest,
                        })
                    }
                }
                UnitKind::Army => {
                    if map.army_adjacent(unit.loc.prov, dest.prov) {
                        return Ok(());
                    }
                    let coastal = |p: Prov| map.terrain(p) == Some(Terrain::Coastal);
                    if !coastal(unit.loc.prov) || !coastal(dest.prov) {
                        return Err(Diagnostic::NotAdjacent {
                            from: unit.loc,
                            to: dest,
                        });
                    }
                    if convoy_route(state, unit.loc.prov, dest.prov, None) {
                        Ok(())
                    } else {
                        Err(Diagnostic::NoConvoyRoute {
                            from: unit.loc.prov,
                            to: dest.prov,
                        })
                    }
                }
            }
        }
        Command::SupportHold { target } => {
            if target.loc.prov == unit.loc.prov {
                return Err(Diagnostic::SupportSelf);
            }
            board_unit(state, target).map_err(|_| Diagnostic::SupportNoTarget(target))?;
            if !map.can_reach(unit.kind, unit.loc, target.loc.prov) {
                return Err(Diagnostic::SupportCannotReach {
                    supporter: order.unit,
                    dest: target.loc.prov,
                });
            }
            Ok(())
        }
        Command::SupportMove { target, dest } => {
            if target.loc.prov == unit.loc.prov {
                return Err(Diagnostic::SupportSelf);
            }
            board_unit(state, target).map_err(|_| Diagnostic::SupportNoTarget(target))?;
            if dest == unit.loc.prov || !map.can_reach(unit.kind, unit.loc, dest) {
                return Err(Diagnostic::SupportCannotReach {
                    supporter: order.unit,
                    dest,
                });
            }
            if !can_move_to(state, target, dest) {
                return Err(Diagnostic::TargetCannotReach { target, dest });
            }
            Ok(())
        }
        Command::Convoy { army, dest } => {
            if unit.kind != UnitKind::Fleet || map.terrain(unit.loc.prov) != Some(Terrain::Sea) {
                return Err(Diagnostic::ConvoyNotAtSea(order.unit));
            }
            match state.unit_at(army) {
                Some(a) if a.kind == UnitKind::Army => {}
                _ => return Err(Diagnostic::ConvoyNoArmy(army)),
            }
            if army == dest || map.terrain(dest) != Some(Terrain::Coastal) {
                return Err(Diagnostic::NoConvoyRoute {
                    from: army,
                    to: dest,
                });
            }
            if convoy_route(state, army, dest, Some(unit.loc.prov)) {
                Ok(())
            } else {
                Err(Diagnostic::NoConvoyRoute {
                    from: army,
                    to: dest,
                })
            }
        }
        _ => unreachable!("phase filter admits only movement orders"),
    }
}

fn validate_retreat(state: &GameState, order: &Order) -> Result<(), Diagnostic> {
    let d = state
        .dislodged_at(order.prov())
        .filter(|d| d.unit.kind == order.unit.kind && d.unit.loc == order.unit.loc)
        .ok_or(Diagnostic::NotDislodged(order.unit))?;
    match order.command {
        Command::Disband => Ok(()),
        Command::Retreat { dest } => {
            let map = state.map();
            check_terrain(state, d.unit.kind, dest)?;
            let adjacent = match d.unit.kind {
                UnitKind::Army => map.army_adjacent(d.unit.loc.prov, dest.prov),
                UnitKind::Fleet => map.fleet_adjacent(d.unit.loc, dest),
            };
            if !adjacent {
                return Err(Diagnostic::NotAdjacent {
                    from: d.unit.loc,
                    to: dest,
                });
            }
            if d.attacker_from == Some(dest.prov) {
                return Err(Diagnostic::RetreatToAttacker(dest.prov));
            }
            if state.standoffs().contains(&dest.prov) {
                return Err(Diagnostic::RetreatToStandoff(dest.prov));
            }
            if state.unit_at(dest.prov).is_some() {
                return Err(Diagnostic::RetreatOccupied(dest.prov));
            }
            Ok(())
        }
        _ => unreachable!(),
    }
}

/// Builds (positive) or disbands (negative) owed by `power` in an adjustment phase.
pub fn adjustment_delta(state: &GameState, power: Power) -> i64 {
    state.supply_center_count(power) as i64 - state.units_of(power).count() as i64
}

fn validate_adjustment(state: &GameState, order: &Order) -> Result<(), Diagnostic> {
    let prov = order.prov();
    match order.command {
        Command::Build => {
            let home = state
                .map()
                .province(prov)
                .filter(|p| p.supply_center)
                .and_then(|p| p.home)
                .ok_or(Diagnostic::BuildNotHome(prov))?;
            if state.owner(prov) != Some(home) {
                return Err(Diagnostic::BuildNotOwned(prov));
            }
            if state.unit_at(prov).is_some() {
                return Err(Diagnostic::BuildOccupied(prov));
            }
            check_terrain(state, order.unit.kind, order.unit.loc)?;
            if adjustment_delta(state, home) <= 0 {
                return Err(Diagnostic::NoBuildsAvailable(home));
            }
            Ok(())
        }
        Command::Disband => {
            let u = board_unit(state, order.unit)?;
            if adjustment_delta(state, u.owner) >= 0 {
                return Err(Diagnostic::DisbandNotRequired(u.owner));
            }
            Ok(())
        }
        _ => unreachable!(),
    }
}

/// Whether an army in `from` could be convoyed to `to` by the fleets now at
/// sea. With `via`, the route must pass through the fleet in that province.
pub fn convoy_route(state: &GameState, from: Prov, to: Prov, via: Option<Prov>) -> bool {
    let fleets: Vec<&Unit> = state
        .units()
        .filter(|u| {
            u.kind == UnitKind::Fleet && state.map().terrain(u.loc.prov) == Some(Terrain::Sea)
        })
        .collect();
    convoy_route_over(
        state,
        from,
        to,
        via,
        &fleets.iter().map(|u| u.loc).collect::<Vec<_>>(),
    )
}

/// Convoy route search restricted to fleets at the given sea locations.
pub(crate) fn convoy_route_over(
    state: &GameState,
    from: Prov,
    to: Prov,
    via: Option<Prov>,
    fleets: &[Loc],
) -> bool {
    let map = state.map();
    if from == to {
        return false;
    }
    if let Some(v) = via {
        if !fleets.iter().any(|f| f.prov == v) {
            return false;
        }
    }
    fn dfs(
        map: &crate::game::Map,
        cur: Loc,
        to: Prov,
        via: Option<Prov>,
        seen_via: bool,
        fleets: &[Loc],
        visited: &mut HashSet<Prov>,
    ) -> bool {
        let seen_via = seen_via || via.is_none_or(|v| v == cur.prov);
        if seen_via && map.fleet_reaches(cur, to) {
            return true;
        }
        for f in fleets {
            if !visited.contains(&f.prov) && map.fleet_reaches(cur, f.prov) {
                visited.insert(f.prov);
                if dfs(map, *f, to, via, seen_via, fleets, visited) {
                    return true;
                }
                if via.is_some() {
                    visited.remove(&f.prov);
                }
            }
        }
        false
    }
    let mut visited = HashSet::new();
    for f in fleets {
        if map.fleet_reaches(*f, from) {
            visited.insert(f.prov);
            if dfs(map, *f, to, via, false, fleets, &mut visited) {
                return true;
            }
            if via.is_some() {
                visited.remove(&f.prov);
            }
        }
    }
    false
}

/// Every order for `unit` that passes [`validate_order`] in the current phase.
pub fn legal_moves(state: &GameState, unit: &Unit) -> BTreeSet<Order> {
    let map = state.map();
    let me = unit.order_unit();
    let mut cands: Vec<Order> = Vec::new();
    match state.turn().phase {
        Phase::Movement => {
            cands.push(Order::hold(me));
            match unit.kind {
                UnitKind::Fleet => {
                    for &d in map.fleet_destinations(unit.loc) {
                        cands.push(Order::move_to(me, d));
                    }
                }
                UnitKind::Army => {
                    for p in map.provinces() {
                        if p.terrain != Terrain::Sea && p.code != unit.loc.prov {
                            cands.push(Order::move_to(me, Loc::new(p.code)));
                        }
                    }
                }
            }
            let reach: Vec<Prov> = map
                .neighbors(unit.loc.prov)
                .into_iter()
                .filter(|&d| map.can_reach(unit.kind, unit.loc, d))
                .collect();
            for other in state.units().filter(|o| o.loc.prov != unit.loc.prov) {
                let target = other.order_unit();
                cands.push(Order::new(me, Command::SupportHold { target }));
                for &dest in &reach {
                    if dest != other.loc.prov {
                        cands.push(Order::new(me, Command::SupportMove { target, dest }));
                    }
                }
            }
            if unit.kind == UnitKind::Fleet && map.terrain(unit.loc.prov) == Some(Terrain::Sea) {
                for army in state.units().filter(|o| o.kind == UnitKind::Army) {
                    for p in map.provinces().filter(|p| p.terrain == Terrain::Coastal) {
                        cands.push(Order::new(
                            me,
                            Command::Convoy {
                                army: army.loc.prov,
                                dest: p.code,
                            },
                        ));
                    }
                }
            }
        }
        Phase::Retreat => {
            if let Some(d) = state
                .dislodged_at(unit.loc.prov)
                .filter(|d| d.unit == *unit)
            {
                cands.push(Order::new(me, Command::Disband));
                match d.unit.kind {
                    UnitKind::Army => {
                        for q in map.get(unit.loc.prov).army_neighbors() {
                            cands.push(Order::new(me, Command::Retreat { dest: Loc::new(q) }));
                        }
                    }
                    UnitKind::Fleet => {
                        for &q in map.fleet_destinations(unit.loc) {
                            cands.push(Order::new(me, Command::Retreat { dest: q }));
                        }
                    }
                }
            }
        }
        Phase::Adjustment => cands.push(Order::new(me, Command::Disband)),
    }
    cands
        .into_iter()
        .filter(|o| validate_order(state, o).is_ok())
        .collect()
}

/// Legal build orders for `power` in an adjustment phase.
pub fn legal_builds(state: &GameState, power: Power) -> BTreeSet<Order> {
    let map = state.map();
    let mut out = BTreeSet::new();
    for home in map.home_centers(power) {
        let p = map.get(home);
        let mut locs = vec![(UnitKind::Army, Loc::new(home))];
        if p.has_coasts() {
            locs.extend(
                p.coasts
                    .iter()
                    .map(|&c| (UnitKind::Fleet, Loc::with_coast(home, c))),
            );
        } else {
            locs.push((UnitKind::Fleet, Loc::new(home)));
        }
        for (k, l) in locs {
            let o = Order::new(OrderUnit::new(k, l), Command::Build);
            if validate_order(state, &o).is_ok() {
                out.insert(o);
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::game::map::Map;
    use crate::game::order::parse_order;
    use crate::game::state::{Season, Turn};

    fn order(st: &GameState, s: &str) -> Order {
        parse_order(s, st.map(), None).unwrap()
    }

    #[test]
    fn army_into_sea_is_a_kind_violation() {
        let st = GameState::initial(Map::standard());
        let d = validate_order(&st, &order(&st, "A PAR - ENG")).unwrap_err();
        assert_eq!(d.rule(), Rule::UnitKind);
    }

    #[test]
    fn figure_one_move_is_legal() {
        let st = GameState::empty(Map::standard(), Turn::FIRST)
            .with("GER F SKA")
            .unwrap();
        assert_eq!(validate_order(&st, &order(&st, "F SKA - SWE")), Ok(()));
    }

    #[test]
    fn build_at_non_home_center_rejected() {
        let map = Map::standard();
        let st = GameState::empty(
            map.clone(),
            Turn::new(1901, Season::Fall, Phase::Adjustment),
        )
        .with_owner(map.prov("BEL").unwrap(), Power::Fra)
        .unwrap()
        .with_owner(map.prov("PAR").unwrap(), Power::Fra)
        .unwrap();
        let d = validate_order(&st, &order(&st, "A BEL B")).unwrap_err();
        assert_eq!(d.rule(), Rule::BuildRule);
        assert_eq!(validate_order(&st, &order(&st, "A PAR B")), Ok(()));
    }

    #[test]
    fn wrong_phase() {
        let st = GameState::initial(Map::standard());
        let d = validate_order(&st, &order(&st, "A PAR B")).unwrap_err();
        assert_eq!(d.rule(), Rule::Phase);
    }

    #[test]
    fn ownership_checked() {
        let st = GameState::initial(Map::standard());
        let d = validate_for(&st, Power::Ger, &order(&st, "A PAR H")).unwrap_err();
        assert_eq!(d.rule(), Rule::Ownership);
        assert!(validate_for(&st, Power::Fra, &order(&st, "A PAR H")).is_ok());
    }

    #[test]
    fn convoy_routes() {
        let st = GameState::empty(Map::standard(), Turn::FIRST)
            .with("ENG A LON")
            .unwrap()
            .with("ENG F NTH")
            .unwrap();
        assert_eq!(validate_order(&st, &order(&st, "A LON - NWY")), Ok(()));
        assert_eq!(
            validate_order(&st, &order(&st, "F NTH C A LON - NWY")),
            Ok(())
        );
        let d = validate_order(&st, &order(&st, "A LON - TUN")).unwrap_err();
        assert_eq!(d.rule(), Rule::Convoy);
    }

    #[test]
    fn fleet_legal_moves_respect_terrain() {
        let st = GameState::initial(Map::standard());
        let u = *st.unit_at(st.map().prov("KIE").unwrap()).unwrap();
        let moves = legal_moves(&st, &u);
        assert!(moves.contains(&Order::hold(u.order_unit())));
        for m in &moves {
            if let Command::Move { dest } = m.command {
                assert_ne!(st.map().terrain(dest.prov), Some(Terrain::Land));
            }
            assert_eq!(validate_order(&st, m), Ok(()));
        }
        assert!(moves.contains(&order(&st, "F KIE - DEN")));
        assert!(!moves.contains(&order(&st, "F KIE - MUN")));
    }
}
