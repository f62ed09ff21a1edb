//! Order resolution for all three phases.
//!
//! Movement uses guess-and-check over one boolean decision per order (move
//! succeeds / support given / unit not dislodged). Cycles with one consistent
//! outcome resolve normally; otherwise the backup rule applies: circular
//! movement succeeds, convoy paradoxes hold.

use std::collections::{BTreeMap, BTreeSet, VecDeque};

use serde::{Deserialize, Serialize};

use super::map::{Prov, UnitKind};
use super::order::{Command, Order, OrderKind};
use super::power::Power;
use super::rules::{adjustment_delta, convoy_route_over, legal_moves, validate_for};
use super::state::{Dislodged, GameState, Phase, Season, Turn, Unit};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum AdjudicationError {
    #[error("{order} cannot be given in the {phase:?} phase")]
    PhaseMismatch { phase: Phase, order: Order },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Outcome {
    Succeeds,
    Bounces,
    Cut,
    Dislodged,
    /// Illegal, duplicated, or (for supports and convoys) not matched by the
    /// supported unit's actual order.
    Void,
    Disbanded,
    Built,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct OrderResult {
    pub power: Power,
    pub order: Order,
    pub outcome: Outcome,
    /// Filled in by the adjudicator (default hold, forced disband).
    #[serde(default, skip_serializing_if = "std::ops::Not::not")]
    pub defaulted: bool,
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct ResolutionReport {
    pub results: Vec<OrderResult>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub dislodged: Vec<Dislodged>,
}

impl ResolutionReport {
    pub fn outcome_of(&self, order: &Order) -> Option<Outcome> {
        self.results
            .iter()
            .find(|r| r.order == *order)
            .map(|r| r.outcome)
    }

    fn push(&mut self, power: Power, order: Order, outcome: Outcome, defaulted: bool) {
        self.results.push(OrderResult {
            power,
            order,
            outcome,
            defaulted,
        });
    }
}

/// Resolves one phase. Orders for units a power does not control, illegal
/// orders and second orders for the same unit are void; unordered units hold
/// (movement) or disband (retreat).
pub fn adjudicate(
    state: &GameState,
    orders: &BTreeMap<Power, Vec<Order>>,
) -> Result<(GameState, ResolutionReport), AdjudicationError> {
    let phase = state.turn().phase;
    for o in orders.values().flatten() {
        let ok = match phase {
            Phase::Movement => matches!(
                o.kind(),
                OrderKind::Hold
                    | OrderKind::Move
                    | OrderKind::SupportHold
                    | OrderKind::SupportMove
                    | OrderKind::Convoy
            ),
            Phase::Retreat => matches!(o.kind(), OrderKind::Retreat | OrderKind::Disband),
            Phase::Adjustment => matches!(o.kind(), OrderKind::Build | OrderKind::Disband),
        };
        if !ok {
            return Err(AdjudicationError::PhaseMismatch { phase, order: *o });
        }
    }
    Ok(match phase {
        Phase::Movement => movement(state, orders),
        Phase::Retreat => retreat(state, orders),
        Phase::Adjustment => adjustment(state, orders),
    })
}

/// Picks each unit's effective order; the rest go to the report as void.
fn collect(
    state: &GameState,
    orders: &BTreeMap<Power, Vec<Order>>,
    report: &mut ResolutionReport,
) -> BTreeMap<Prov, (Power, Order)> {
    let mut chosen = BTreeMap::new();
    for (&power, list) in orders {
        for o in list {
            if chosen.contains_key(&o.prov()) || validate_for(state, power, o).is_err() {
                report.push(power, *o, Outcome::Void, false);
            } else {
                chosen.insert(o.prov(), (power, *o));
            }
        }
    }
    chosen
}

fn next_after_movement_or_retreat(turn: Turn) -> Turn {
    match turn.season {
        Season::Spring => Turn::movement(turn.year, Season::Fall),
        Season::Fall => Turn::new(turn.year, Season::Fall, Phase::Adjustment),
    }
}

fn close_season(
    state: &GameState,
    units: BTreeMap<Prov, Unit>,
    mut sc_owner: BTreeMap<Prov, Power>,
) -> GameState {
    let turn = next_after_movement_or_retreat(state.turn());
    if turn.phase == Phase::Adjustment {
        for (p, u) in &units {
            if state.map().get(*p).supply_center {
                sc_owner.insert(*p, u.owner);
            }
        }
    }
    GameState::from_parts(
        state.map().clone(),
        turn,
        units,
        sc_owner,
        Vec::new(),
        BTreeSet::new(),
    )
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum St {
    Unresolved,
    Guessing,
    Resolved,
}

struct Movement<'a> {
    state: &'a GameState,
    units: Vec<Unit>,
    orders: Vec<Order>,
    at: BTreeMap<Prov, usize>,
    convoyed: Vec<bool>,
    into: BTreeMap<Prov, Vec<usize>>,
    res: Vec<bool>,
    st: Vec<St>,
    deps: Vec<usize>,
}

impl<'a> Movement<'a> {
    fn new(state: &'a GameState, chosen: &BTreeMap<Prov, (Power, Order)>) -> Movement<'a> {
        let units: Vec<Unit> = state.units().copied().collect();
        let orders: Vec<Order> = units
            .iter()
            .map(|u| {
                chosen
                    .get(&u.loc.prov)
                    .map(|(_, o)| *o)
                    .unwrap_or_else(|| Order::hold(u.order_unit()))
            })
            .collect();
        let at = units
            .iter()
            .enumerate()
            .map(|(i, u)| (u.loc.prov, i))
            .collect();
        let map = state.map();
        let convoyed = units
            .iter()
            .zip(&orders)
            .map(|(u, o)| match o.command {
                Command::Move { dest } => {
                    u.kind == UnitKind::Army && !map.army_adjacent(u.loc.prov, dest.prov)
                }
                _ => false,
            })
            .collect();
        let mut into: BTreeMap<Prov, Vec<usize>> = BTreeMap::new();
        for (i, o) in orders.iter().enumerate() {
            if let Command::Move { dest } = o.command {
                into.entry(dest.prov).or_default().push(i);
            }
        }
        let n = units.len();
        Movement {
            state,
            units,
            orders,
            at,
            convoyed,
            into,
            res: vec![false; n],
            st: vec![St::Unresolved; n],
            deps: Vec::new(),
        }
    }

    fn prov(&self, i: usize) -> Prov {
        self.units[i].loc.prov
    }

    fn owner(&self, i: usize) -> Power {
        self.units[i].owner
    }

    fn dest(&self, i: usize) -> Option<Prov> {
        match self.orders[i].command {
            Command::Move { dest } => Some(dest.prov),
            _ => None,
        }
    }

    fn moves_into(&self, p: Prov) -> Vec<usize> {
        self.into.get(&p).cloned().unwrap_or_default()
    }

    fn convoy_fleets(&self, i: usize) -> Vec<usize> {
        let (from, to) = (self.prov(i), self.dest(i).unwrap());
        (0..self.units.len())
            .filter(|&j| matches!(self.orders[j].command, Command::Convoy { army, dest } if army == from && dest == to))
            .collect()
    }

    fn head_to_head(&self, i: usize) -> Option<usize> {
        if self.convoyed[i] {
            return None;
        }
        let j = *self.at.get(&self.dest(i)?)?;
        (self.dest(j) == Some(self.prov(i)) && !self.convoyed[j]).then_some(j)
    }

    /// Whether support order `s` names what its target is actually doing.
    fn support_matches(&self, s: usize) -> bool {
        match self.orders[s].command {
            Command::SupportHold { target } => self
                .at
                .get(&target.loc.prov)
                .is_some_and(|&j| self.dest(j).is_none()),
            Command::SupportMove { target, dest } => self
                .at
                .get(&target.loc.prov)
                .is_some_and(|&j| self.dest(j) == Some(dest)),
            _ => false,
        }
    }

    fn move_supports(&self, i: usize) -> Vec<usize> {
        let (p, d) = (self.prov(i), self.dest(i));
        (0..self.units.len())
            .filter(|&s| {
                matches!(self.orders[s].command,
                    Command::SupportMove { target, dest } if target.loc.prov == p && Some(dest) == d)
            })
            .collect()
    }

    fn hold_supports(&self, i: usize) -> Vec<usize> {
        let p = self.prov(i);
        (0..self.units.len())
            .filter(|&s| matches!(self.orders[s].command, Command::SupportHold { target } if target.loc.prov == p))
            .collect()
    }

    fn given(&mut self, supports: &[usize], exclude: Option<Power>) -> u32 {
        let mut n = 0;
        for &s in supports {
            if Some(self.owner(s)) != exclude && self.resolve(s) {
                n += 1;
            }
        }
        n
    }

    fn path(&mut self, i: usize) -> bool {
        if !self.convoyed[i] {
            return true;
        }
        let mut locs = Vec::new();
        for f in self.convoy_fleets(i) {
            if self.resolve(f) {
                locs.push(self.units[f].loc);
            }
        }
        convoy_route_over(self.state, self.prov(i), self.dest(i).unwrap(), None, &locs)
    }

    fn attack(&mut self, i: usize) -> u32 {
        if !self.path(i) {
            return 0;
        }
        let sup = self.move_supports(i);
        let d = self.dest(i).unwrap();
        let Some(&j) = self.at.get(&d) else {
            return 1 + self.given(&sup, None);
        };
        if self.dest(j).is_some() && self.head_to_head(i) != Some(j) && self.resolve(j) {
            return 1 + self.given(&sup, None);
        }
        if self.owner(j) == self.owner(i) {
            return 0;
        }
        let defender = self.owner(j);
        1 + self.given(&sup, Some(defender))
    }

    fn hold_strength(&mut self, p: Prov) -> u32 {
        let Some(&j) = self.at.get(&p) else { return 0 };
        if self.dest(j).is_some() {
            return if self.resolve(j) { 0 } else { 1 };
        }
        let sup = self.hold_supports(j);
        1 + self.given(&sup, None)
    }

    fn defend(&mut self, j: usize) -> u32 {
        let sup = self.move_supports(j);
        1 + self.given(&sup, None)
    }

    fn prevent(&mut self, o: usize) -> u32 {
        if !self.path(o) {
            return 0;
        }
        if let Some(k) = self.head_to_head(o) {
            if self.resolve(k) {
                return 0;
            }
        }
        let sup = self.move_supports(o);
        1 + self.given(&sup, None)
    }

    fn move_succeeds(&mut self, i: usize) -> bool {
        let d = self.dest(i).unwrap();
        let att = self.attack(i);
        let opp = match self.head_to_head(i) {
            Some(j) => self.defend(j),
            None => self.hold_strength(d),
        };
        if att <= opp {
            return false;
        }
        for o in self.moves_into(d) {
            if o != i && att <= self.prevent(o) {
                return false;
            }
        }
        true
    }

    fn dislodged(&mut self, i: usize) -> bool {
        let mut hit = false;
        for o in self.moves_into(self.prov(i)) {
            if self.resolve(o) {
                hit = true;
            }
        }
        hit
    }

    fn support_given(&mut self, s: usize) -> bool {
        if !self.support_matches(s) {
            return false;
        }
        let supported_dest = match self.orders[s].command {
            Command::SupportMove { dest, .. } => Some(dest),
            _ => None,
        };
        let here = self.prov(s);
        for o in self.moves_into(here) {
            if self.owner(o) == self.owner(s) || Some(self.prov(o)) == supported_dest {
                continue;
            }
            if self.convoyed[o] {
                // A convoyed attack leaves alone a support aimed at one of
                // its own convoying fleets.
                let against_convoy = supported_dest.is_some_and(|d| {
                    self.at.get(&d).is_some_and(|&f| {
                        matches!(self.orders[f].command,
                            Command::Convoy { army, dest } if army == self.prov(o) && dest == here)
                    })
                });
                if against_convoy || !self.path(o) {
                    continue;
                }
            }
            return false;
        }
        !self.dislodged(s)
    }

    fn decide(&mut self, i: usize) -> bool {
        match self.orders[i].command {
            Command::Move { .. } => self.move_succeeds(i),
            Command::SupportHold { .. } | Command::SupportMove { .. } => self.support_given(i),
            _ => !self.dislodged(i),
        }
    }

    fn resolve(&mut self, i: usize) -> bool {
        match self.st[i] {
            St::Resolved => return self.res[i],
            St::Guessing => {
                if !self.deps.contains(&i) {
                    self.deps.push(i);
                }
                return self.res[i];
            }
            St::Unresolved => {}
        }
        let old = self.deps.len();
        self.res[i] = false;
        self.st[i] = St::Guessing;
        let first = self.decide(i);
        if self.deps.len() == old {
            if self.st[i] != St::Resolved {
                self.res[i] = first;
                self.st[i] = St::Resolved;
            }
            return self.res[i];
        }
        if self.deps[old] != i {
            self.deps.push(i);
            self.res[i] = first;
            return first;
        }
        self.reset_deps(old);
        self.res[i] = true;
        self.st[i] = St::Guessing;
        let second = self.decide(i);
        if first == second {
            self.reset_deps(old);
            self.res[i] = first;
            self.st[i] = St::Resolved;
            return first;
        }
        // guessing false was self-consistent iff `first` is false
        self.backup(old, !first);
        self.resolve(i)
    }

    fn reset_deps(&mut self, old: usize) {
        for k in old..self.deps.len() {
            let d = self.deps[k];
            self.st[d] = St::Unresolved;
        }
        self.deps.truncate(old);
    }

    /// Two consistent outcomes: the moves in the cycle all succeed (circular
    /// movement, convoyed swaps). None: a convoy paradox, and the moves in the
    /// cycle all hold.
    fn backup(&mut self, old: usize, two_solutions: bool) {
        let cycle: Vec<usize> = self.deps[old..].to_vec();
        for &k in &cycle {
            if self.dest(k).is_some() {
                self.res[k] = two_solutions;
                self.st[k] = St::Resolved;
            } else {
                self.st[k] = St::Unresolved;
            }
        }
        self.deps.truncate(old);
    }
}

fn movement(
    state: &GameState,
    orders: &BTreeMap<Power, Vec<Order>>,
) -> (GameState, ResolutionReport) {
    let mut report = ResolutionReport::default();
    let chosen = collect(state, orders, &mut report);
    let mut m = Movement::new(state, &chosen);
    let n = m.units.len();
    for i in 0..n {
        m.resolve(i);
    }
    let moved: Vec<bool> = (0..n).map(|i| m.dest(i).is_some() && m.res[i]).collect();

    let mut units = BTreeMap::new();
    let mut dislodged = Vec::new();
    for i in 0..n {
        let u = m.units[i];
        if moved[i] {
            let Command::Move { dest } = m.orders[i].command else {
                unreachable!()
            };
            units.insert(dest.prov, Unit::new(u.owner, u.kind, dest));
            continue;
        }
        let attacker = m.moves_into(u.loc.prov).into_iter().find(|&o| moved[o]);
        match attacker {
            Some(o) => dislodged.push(Dislodged {
                unit: u,
                attacker_from: (!m.convoyed[o]).then(|| m.prov(o)),
            }),
            None => {
                units.insert(u.loc.prov, u);
            }
        }
    }
    let mut standoffs = BTreeSet::new();
    for (&p, movers) in &m.into.clone() {
        if units.contains_key(&p) {
            continue;
        }
        let mut bounced = false;
        for &o in movers {
            if !moved[o] && m.path(o) {
                bounced = true;
            }
        }
        if bounced {
            standoffs.insert(p);
        }
    }

    let dislodged_at: BTreeSet<Prov> = dislodged.iter().map(|d| d.unit.loc.prov).collect();
    #[allow(clippy::needless_range_loop)] // i indexes several parallel tables
    for i in 0..n {
        let power = m.owner(i);
        let prov = m.prov(i);
        let outcome = if dislodged_at.contains(&prov) {
            Outcome::Dislodged
        } else {
            match m.orders[i].command {
                Command::Move { .. } if moved[i] => Outcome::Succeeds,
                Command::Move { .. } => Outcome::Bounces,
                Command::SupportHold { .. } | Command::SupportMove { .. }
                    if !m.support_matches(i) =>
                {
                    Outcome::Void
                }
                Command::SupportHold { .. } | Command::SupportMove { .. } if !m.res[i] => {
                    Outcome::Cut
                }
                Command::Convoy { army, dest }
                    if !m
                        .at
                        .get(&army)
                        .is_some_and(|&a| m.dest(a) == Some(dest) && m.convoyed[a]) =>
                {
                    Outcome::Void
                }
                _ => Outcome::Succeeds,
            }
        };
        report.push(power, m.orders[i], outcome, !chosen.contains_key(&prov));
    }

    let sc_owner = state.sc_ownership().clone();
    let map = state.map().clone();
    let retreat_turn = Turn::new(state.turn().year, state.turn().season, Phase::Retreat);
    let probe = GameState::from_parts(
        map.clone(),
        retreat_turn,
        units.clone(),
        sc_owner.clone(),
        dislodged.clone(),
        standoffs.clone(),
    );
    // Units with nowhere to go are removed now rather than in a retreat phase.
    let mut keep = Vec::new();
    for d in &dislodged {
        let can_retreat = legal_moves(&probe, &d.unit)
            .iter()
            .any(|o| matches!(o.command, Command::Retreat { .. }));
        if can_retreat {
            keep.push(*d);
        } else {
            report.push(
                d.unit.owner,
                Order::new(d.unit.order_unit(), Command::Disband),
                Outcome::Disbanded,
                true,
            );
        }
    }
    report.dislodged = dislodged;
    if keep.is_empty() {
        (close_season(state, units, sc_owner), report)
    } else {
        (
            GameState::from_parts(map, retreat_turn, units, sc_owner, keep, standoffs),
            report,
        )
    }
}

fn retreat(
    state: &GameState,
    orders: &BTreeMap<Power, Vec<Order>>,
) -> (GameState, ResolutionReport) {
    let mut report = ResolutionReport::default();
    let chosen = collect(state, orders, &mut report);
    let mut targets: BTreeMap<Prov, usize> = BTreeMap::new();
    for (_, o) in chosen.values() {
        if let Command::Retreat { dest } = o.command {
            *targets.entry(dest.prov).or_default() += 1;
        }
    }
    let mut units: BTreeMap<Prov, Unit> = state.units().map(|u| (u.loc.prov, *u)).collect();
    for d in state.dislodged() {
        let u = d.unit;
        match chosen.get(&u.loc.prov) {
            Some((power, o)) => match o.command {
                Command::Retreat { dest } if targets[&dest.prov] == 1 => {
                    units.insert(dest.prov, Unit::new(u.owner, u.kind, dest));
                    report.push(*power, *o, Outcome::Succeeds, false);
                }
                Command::Retreat { .. } => report.push(*power, *o, Outcome::Bounces, false),
                _ => report.push(*power, *o, Outcome::Disbanded, false),
            },
            None => report.push(
                u.owner,
                Order::new(u.order_unit(), Command::Disband),
                Outcome::Disbanded,
                true,
            ),
        }
    }
    (
        close_season(state, units, state.sc_ownership().clone()),
        report,
    )
}

/// Steps from `from` to the nearest home center of `power`, over any adjacency.
fn home_distance(state: &GameState, power: Power, from: Prov) -> usize {
    let map = state.map();
    let homes: BTreeSet<Prov> = map.home_centers(power).collect();
    let mut seen = BTreeSet::from([from]);
    let mut q = VecDeque::from([(from, 0usize)]);
    while let Some((p, d)) = q.pop_front() {
        if homes.contains(&p) {
            return d;
        }
        for n in map.neighbors(p) {
            if seen.insert(n) {
                q.push_back((n, d + 1));
            }
        }
    }
    usize::MAX
}

fn adjustment(
    state: &GameState,
    orders: &BTreeMap<Power, Vec<Order>>,
) -> (GameState, ResolutionReport) {
    let mut report = ResolutionReport::default();
    let mut units: BTreeMap<Prov, Unit> = state.units().map(|u| (u.loc.prov, *u)).collect();
    for power in Power::ALL {
        let delta = adjustment_delta(state, power);
        let mut used = 0i64;
        let mut seen = BTreeSet::new();
        for o in orders.get(&power).into_iter().flatten() {
            let fits = match o.command {
                Command::Build => delta > used,
                Command::Disband => -delta > used,
                _ => false,
            };
            if fits && seen.insert(o.prov()) && validate_for(state, power, o).is_ok() {
                used += 1;
                if o.command == Command::Build {
                    units.insert(o.prov(), Unit::new(power, o.unit.kind, o.unit.loc));
                    report.push(power, *o, Outcome::Built, false);
                } else {
                    units.remove(&o.prov());
                    report.push(power, *o, Outcome::Disbanded, false);
                }
            } else {
                report.push(power, *o, Outcome::Void, false);
            }
        }
        if delta < 0 && -delta > used {
            let mut mine: Vec<(usize, Prov)> = units
                .values()
                .filter(|u| u.owner == power)
                .map(|u| (home_distance(state, power, u.loc.prov), u.loc.prov))
                .collect();
            // farthest first, then alphabetical
            mine.sort_by(|a, b| b.0.cmp(&a.0).then(a.1.cmp(&b.1)));
            for &(_, p) in mine.iter().take((-delta - used) as usize) {
                let u = units.remove(&p).unwrap();
                report.push(
                    power,
                    Order::new(u.order_unit(), Command::Disband),
                    Outcome::Disbanded,
                    true,
                );
            }
        }
    }
    let turn = Turn::movement(state.turn().year + 1, Season::Spring);
    let next = GameState::from_parts(
        state.map().clone(),
        turn,
        units,
        state.sc_ownership().clone(),
        Vec::new(),
        BTreeSet::new(),
    );
    (next, report)
}

/// Convenience: resolve with every unit holding (movement), disbanding
/// (retreat) or no adjustments chosen.
pub fn adjudicate_defaults(state: &GameState) -> (GameState, ResolutionReport) {
    adjudicate(state, &BTreeMap::new()).expect("no orders cannot mismatch the phase")
}
