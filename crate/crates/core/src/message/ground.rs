//! Resolving an act's graph to the concrete orders it can mean.

use std::collections::BTreeSet;

use super::action::{Action, Place, UnitSpec};
use super::{ActKind, CommunicativeAct, MessageContext, MessageError};
use crate::game::{
    validate_for, Command, GameState, Loc, Order, OrderUnit, Phase, Power, Unit, UnitKind,
};

fn matches(u: &Unit, spec: &UnitSpec, nation: Option<Power>) -> bool {
    spec.kind.is_none_or(|k| k == u.kind)
        && nation.is_none_or(|n| n == u.owner)
        && spec.place.as_ref().is_none_or(|p| {
            p.loc.prov == u.loc.prov
                && (p.loc.coast.is_none() || u.kind == UnitKind::Army || p.loc == u.loc)
        })
}

/// Units of `state` fitting `spec`; the nation defaults to `default`.
fn candidates(
    state: &GameState,
    spec: &UnitSpec,
    default: Option<Power>,
    dislodged: bool,
) -> Vec<Unit> {
    let nation = spec.nation.or(default);
    if dislodged {
        state
            .dislodged()
            .iter()
            .map(|d| d.unit)
            .filter(|u| matches(u, spec, nation))
            .collect()
    } else {
        state
            .units()
            .filter(|u| matches(u, spec, nation))
            .copied()
            .collect()
    }
}

/// Locations a unit of `kind` could be ordered to for a named place.
fn dest_locs(state: &GameState, kind: UnitKind, p: &Place) -> Vec<Loc> {
    let prov = state.map().get(p.loc.prov);
    match kind {
        UnitKind::Army => vec![Loc::new(p.loc.prov)],
        UnitKind::Fleet if p.loc.coast.is_some() => vec![p.loc],
        UnitKind::Fleet if prov.has_coasts() => prov
            .coasts
            .iter()
            .map(|&c| Loc::with_coast(p.loc.prov, c))
            .collect(),
        UnitKind::Fleet => vec![Loc::new(p.loc.prov)],
    }
}

/// Legal orders the act's graph can stand for on `ctx.state`. Units left
/// open (kind, place, nationality) are filled from the board; the acting
/// unit's nationality defaults to the act's actor.
pub fn ground(
    act: &CommunicativeAct,
    ctx: &MessageContext,
) -> Result<BTreeSet<Order>, MessageError> {
    if matches!(act.kind, ActKind::None | ActKind::ThirdPartyReport) {
        return Ok(BTreeSet::new());
    }
    let state = &ctx.state;
    let Some(action) = act.action(state.map()) else {
        return Ok(BTreeSet::new());
    };
    let actor = Some(act.actor);
    let no_unit = || MessageError::NoActorUnit {
        actor: act.actor,
        concept: action.concept().to_string(),
    };
    let retreat_phase = state.turn().phase == Phase::Retreat;
    let mut out = BTreeSet::new();
    let mut keep = |owner: Power, o: Order| {
        if validate_for(state, owner, &o).is_ok() {
            out.insert(o);
        }
    };
    match &action {
        Action::Move { unit, dest } | Action::Retreat { unit, dest } => {
            let retreat = matches!(action, Action::Retreat { .. });
            let us = candidates(state, unit, actor, retreat);
            if us.is_empty() {
                return Err(no_unit());
            }
            let Some(dest) = dest else { return Ok(out) };
            for u in us {
                for d in dest_locs(state, u.kind, dest) {
                    let c = if retreat {
                        Command::Retreat { dest: d }
                    } else {
                        Command::Move { dest: d }
                    };
                    keep(u.owner, Order::new(u.order_unit(), c));
                }
            }
        }
        Action::Hold { unit } => {
            let us = candidates(state, unit, actor, false);
            if us.is_empty() {
                return Err(no_unit());
            }
            for u in us {
                keep(u.owner, Order::hold(u.order_unit()));
            }
        }
        Action::Disband { unit } => {
            let us = candidates(state, unit, actor, retreat_phase);
            if us.is_empty() {
                return Err(no_unit());
            }
            for u in us {
                keep(u.owner, Order::new(u.order_unit(), Command::Disband));
            }
        }
        Action::Support {
            supporter,
            target,
            dest,
        } => {
            let us = candidates(state, supporter, actor, false);
            if us.is_empty() {
                return Err(no_unit());
            }
            let targets = candidates(state, target, None, false);
            for s in &us {
                for t in targets.iter().filter(|t| t.loc.prov != s.loc.prov) {
                    let c = match dest {
                        Some(d) => Command::SupportMove {
                            target: t.order_unit(),
                            dest: d.loc.prov,
                        },
                        None => Command::SupportHold {
                            target: t.order_unit(),
                        },
                    };
                    keep(s.owner, Order::new(s.order_unit(), c));
                }
            }
        }
        Action::Convoy { fleet, army, dest } => {
            let mut fleet = fleet.clone();
            fleet.kind = Some(UnitKind::Fleet);
            let mut army = army.clone();
            army.kind = Some(UnitKind::Army);
            let fs = candidates(state, &fleet, actor, false);
            if fs.is_empty() {
                return Err(no_unit());
            }
            let Some(dest) = dest else { return Ok(out) };
            for f in &fs {
                for a in candidates(state, &army, None, false) {
                    let c = Command::Convoy {
                        army: a.loc.prov,
                        dest: dest.loc.prov,
                    };
                    keep(f.owner, Order::new(f.order_unit(), c));
                }
            }
        }
        Action::Build { nation, kind, at } => {
            let power = nation.unwrap_or(act.actor);
            let Some(at) = at else { return Ok(out) };
            let kinds = match kind {
                Some(k) => vec![*k],
                None => vec![UnitKind::Army, UnitKind::Fleet],
            };
            for k in kinds {
                for loc in dest_locs(state, k, at) {
                    keep(power, Order::new(OrderUnit::new(k, loc), Command::Build));
                }
            }
        }
        Action::Ally { .. } | Action::Demilitarize { .. } => {}
    }
    Ok(out)
}

/// Grounds in place; an error leaves the act ungrounded.
pub fn ground_into(act: &mut CommunicativeAct, ctx: &MessageContext) {
    act.grounded = ground(act, ctx).unwrap_or_default();
}
