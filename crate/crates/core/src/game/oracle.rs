//! Brute-force movement resolution used to cross-check the adjudicator.
//!
//! Every assignment of success/failure to the move orders is tried; an
//! assignment is kept when recomputing each move from the strength rules under
//! that assignment reproduces it. Exponential in the number of moves.

use std::collections::{BTreeMap, BTreeSet};

use super::map::{Loc, Prov, UnitKind};
use super::order::{Command, Order};
use super::rules::convoy_route_over;
use super::state::GameState;

/// Largest number of moves the oracle will enumerate.
pub const MAX_MOVES: usize = 16;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum OracleVerdict {
    /// Origins of the moves that succeed.
    Resolved(BTreeSet<Prov>),
    /// No consistent assignment (a convoy paradox).
    Paradox,
    TooLarge,
}

/// `orders` must hold one legal order per unit on the board, keyed by the
/// unit's province. Several consistent assignments only arise from circular
/// movement; the one with the most successful moves is returned.
pub fn resolve_moves(state: &GameState, orders: &BTreeMap<Prov, Order>) -> OracleVerdict {
    let map = state.map();
    let moves: Vec<Prov> = orders
        .iter()
        .filter(|(_, o)| matches!(o.command, Command::Move { .. }))
        .map(|(p, _)| *p)
        .collect();
    if moves.len() > MAX_MOVES {
        return OracleVerdict::TooLarge;
    }
    let dest_of = |p: Prov| match orders.get(&p).map(|o| o.command) {
        Some(Command::Move { dest }) => Some(dest.prov),
        _ => None,
    };
    let owner = |p: Prov| {
        state
            .unit_at(p)
            .expect("order for a unit on the board")
            .owner
    };
    let convoyed = |p: Prov| {
        let u = state.unit_at(p).unwrap();
        u.kind == UnitKind::Army && dest_of(p).is_some_and(|d| !map.army_adjacent(p, d))
    };

    let entering: BTreeMap<Prov, Vec<Prov>> = moves.iter().fold(BTreeMap::new(), |mut acc, &m| {
        acc.entry(dest_of(m).unwrap())
            .or_insert_with(Vec::new)
            .push(m);
        acc
    });
    let entering_of = |p: Prov| entering.get(&p).map(Vec::as_slice).unwrap_or(&[]);
    let supports: Vec<Prov> = orders
        .iter()
        .filter(|(_, o)| {
            matches!(
                o.command,
                Command::SupportHold { .. } | Command::SupportMove { .. }
            )
        })
        .map(|(p, _)| *p)
        .collect();
    let matches = |s: Prov| match orders[&s].command {
        Command::SupportHold { target } => {
            orders.contains_key(&target.loc.prov) && dest_of(target.loc.prov).is_none()
        }
        Command::SupportMove { target, dest } => dest_of(target.loc.prov) == Some(dest),
        _ => false,
    };
    let h2h = |m: Prov| {
        let d = dest_of(m)?;
        (!convoyed(m) && orders.contains_key(&d) && dest_of(d) == Some(m) && !convoyed(d))
            .then_some(d)
    };

    let mut fixed: Vec<BTreeSet<Prov>> = Vec::new();
    for mask in 0u32..(1u32 << moves.len()) {
        let succ: BTreeSet<Prov> = moves
            .iter()
            .enumerate()
            .filter(|(k, _)| mask >> k & 1 == 1)
            .map(|(_, p)| *p)
            .collect();
        let dislodged =
            |p: Prov| !succ.contains(&p) && entering_of(p).iter().any(|m| succ.contains(m));
        let path: BTreeMap<Prov, bool> = moves
            .iter()
            .map(|&m| {
                if !convoyed(m) {
                    return (m, true);
                }
                let d = dest_of(m).unwrap();
                let fleets: Vec<Loc> = orders
                    .iter()
                    .filter(|(f, o)| {
                        matches!(o.command, Command::Convoy { army, dest } if army == m && dest == d)
                            && !dislodged(**f)
                    })
                    .map(|(f, _)| state.unit_at(*f).unwrap().loc)
                    .collect();
                (m, convoy_route_over(state, m, d, None, &fleets))
            })
            .collect();
        let given: BTreeSet<Prov> = supports
            .iter()
            .copied()
            .filter(|&s| {
                if !matches(s) || dislodged(s) {
                    return false;
                }
                let sup_dest = match orders[&s].command {
                    Command::SupportMove { dest, .. } => Some(dest),
                    _ => None,
                };
                !entering_of(s).iter().any(|&m| {
                    if owner(m) == owner(s) || Some(m) == sup_dest {
                        return false;
                    }
                    if !convoyed(m) {
                        return true;
                    }
                    let against_convoy = sup_dest.is_some_and(|d| {
                        matches!(orders.get(&d).map(|o| o.command),
                            Some(Command::Convoy { army, dest }) if army == m && dest == s)
                    });
                    !against_convoy && path[&m]
                })
            })
            .collect();
        let supports_for = |m: Prov, excl: Option<crate::game::Power>| -> u32 {
            given
                .iter()
                .filter(|s| {
                    matches!(orders[s].command, Command::SupportMove { target, dest }
                        if target.loc.prov == m && Some(dest) == dest_of(m))
                        && Some(owner(**s)) != excl
                })
                .count() as u32
        };
        let hold_supports = |p: Prov| -> u32 {
            given
                .iter()
                .filter(|s| matches!(orders[s].command, Command::SupportHold { target } if target.loc.prov == p))
                .count() as u32
        };
        let prevent = |o: Prov| {
            if !path[&o] || h2h(o).is_some_and(|k| succ.contains(&k)) {
                0
            } else {
                1 + supports_for(o, None)
            }
        };
        let predicted: BTreeSet<Prov> = moves
            .iter()
            .copied()
            .filter(|&m| {
                let d = dest_of(m).unwrap();
                let attack = if !path[&m] {
                    0
                } else if !orders.contains_key(&d)
                    || (dest_of(d).is_some() && h2h(m) != Some(d) && succ.contains(&d))
                {
                    1 + supports_for(m, None)
                } else if owner(d) == owner(m) {
                    0
                } else {
                    1 + supports_for(m, Some(owner(d)))
                };
                let opposition = match h2h(m) {
                    Some(o) => 1 + supports_for(o, None),
                    None if !orders.contains_key(&d) => 0,
                    None if dest_of(d).is_some() => u32::from(!succ.contains(&d)),
                    None => 1 + hold_supports(d),
                };
                attack > opposition
                    && entering_of(d)
                        .iter()
                        .filter(|&&o| o != m)
                        .all(|&o| attack > prevent(o))
            })
            .collect();
        if predicted == succ {
            fixed.push(succ);
        }
    }
    match fixed.into_iter().max_by_key(|s| s.len()) {
        Some(s) => OracleVerdict::Resolved(s),
        None => OracleVerdict::Paradox,
    }
}
