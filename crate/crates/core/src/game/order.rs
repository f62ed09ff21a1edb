//! Orders in the conventional shorthand (`F SKA - SWE`, `F NWY S F SKA - SWE`).

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::map::{Loc, Map, Prov, UnitKind};
use super::state::GameState;

/// The unit an order is addressed to: its type and where it stands.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct OrderUnit {
    pub kind: UnitKind,
    pub loc: Loc,
}

impl OrderUnit {
    pub fn new(kind: UnitKind, loc: Loc) -> OrderUnit {
        OrderUnit { kind, loc }
    }

    pub fn army(p: Prov) -> OrderUnit {
        OrderUnit::new(UnitKind::Army, Loc::new(p))
    }

    pub fn fleet(loc: Loc) -> OrderUnit {
        OrderUnit::new(UnitKind::Fleet, loc)
    }
}

impl fmt::Display for OrderUnit {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} {}", self.kind, self.loc)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Command {
    Hold,
    /// Army moves to non-adjacent provinces are convoyed.
    Move {
        dest: Loc,
    },
    SupportHold {
        target: OrderUnit,
    },
    SupportMove {
        target: OrderUnit,
        dest: Prov,
    },
    Convoy {
        army: Prov,
        dest: Prov,
    },
    Retreat {
        dest: Loc,
    },
    Disband,
    /// Build the order's unit at its location.
    Build,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Order {
    pub unit: OrderUnit,
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum OrderKind {
    Hold,
    Move,
    SupportHold,
    SupportMove,
    Convoy,
    Retreat,
    Disband,
    Build,
}

impl Order {
    pub fn new(unit: OrderUnit, command: Command) -> Order {
        Order { unit, command }
    }

    pub fn hold(unit: OrderUnit) -> Order {
        Order::new(unit, Command::Hold)
    }

    pub fn move_to(unit: OrderUnit, dest: Loc) -> Order {
        Order::new(unit, Command::Move { dest })
    }

    pub fn kind(&self) -> OrderKind {
        match self.command {
            Command::Hold => OrderKind::Hold,
            Command::Move { .. } => OrderKind::Move,
            Command::SupportHold { .. } => OrderKind::SupportHold,
            Command::SupportMove { .. } => OrderKind::SupportMove,
            Command::Convoy { .. } => OrderKind::Convoy,
            Command::Retreat { .. } => OrderKind::Retreat,
            Command::Disband => OrderKind::Disband,
            Command::Build => OrderKind::Build,
        }
    }

    /// Province the ordered unit stands in (or is built in).
    pub fn prov(&self) -> Prov {
        self.unit.loc.prov
    }

    /// The same order with every coast dropped. Two orders describe the same
    /// action iff their normal forms are equal.
    pub fn normalized(&self) -> Order {
        let strip = |u: OrderUnit| OrderUnit::new(u.kind, Loc::new(u.loc.prov));
        let command = match self.command {
            Command::Move { dest } => Command::Move {
                dest: Loc::new(dest.prov),
            },
            Command::Retreat { dest } => Command::Retreat {
                dest: Loc::new(dest.prov),
            },
            Command::SupportHold { target } => Command::SupportHold {
                target: strip(target),
            },
            Command::SupportMove { target, dest } => Command::SupportMove {
                target: strip(target),
                dest,
            },
            c => c,
        };
        Order::new(strip(self.unit), command)
    }

    pub fn same_action(&self, other: &Order) -> bool {
        self.normalized() == other.normalized()
    }
}

impl fmt::Display for Order {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.unit)?;
        match self.command {
            Command::Hold => write!(f, " H"),
            Command::Move { dest } => write!(f, " - {dest}"),
            Command::SupportHold { target } => write!(f, " S {target}"),
            Command::SupportMove { target, dest } => write!(f, " S {target} - {dest}"),
            Command::Convoy { army, dest } => write!(f, " C A {army} - {dest}"),
            Command::Retreat { dest } => write!(f, " R {dest}"),
            Command::Disband => write!(f, " D"),
            Command::Build => write!(f, " B"),
        }
    }
}

impl Serialize for Order {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for Order {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum OrderError {
    #[error("unknown province `{0}`")]
    UnknownProvince(String),
    #[error("malformed order `{text}`: {reason}")]
    MalformedOrder { text: String, reason: String },
    #[error("no unit at {0}")]
    NoSuchUnit(String),
}

fn malformed(text: &str, reason: &str) -> OrderError {
    OrderError::MalformedOrder {
        text: text.to_string(),
        reason: reason.to_string(),
    }
}

/// Tokens after splitting `-`/`->` off location codes.
fn lex(text: &str) -> Vec<String> {
    let spaced = text.replace("->", " - ").replace('-', " - ");
    spaced
        .split_whitespace()
        .map(|t| t.to_ascii_uppercase())
        .collect()
}

/// Unit reference as written; `kind` may be omitted for support/convoy targets.
struct RawUnit {
    kind: Option<UnitKind>,
    loc: Loc,
}

struct Cursor<'a> {
    toks: &'a [String],
    pos: usize,
    text: &'a str,
}

impl<'a> Cursor<'a> {
    fn peek(&self) -> Option<&'a str> {
        self.toks.get(self.pos).map(String::as_str)
    }

    fn next(&mut self) -> Option<&'a str> {
        let t = self.toks.get(self.pos).map(String::as_str);
        self.pos += 1;
        t
    }

    fn loc(&mut self) -> Result<Loc, OrderError> {
        let t = self
            .next()
            .ok_or_else(|| malformed(self.text, "expected a province"))?;
        Loc::parse(t).ok_or_else(|| OrderError::UnknownProvince(t.to_string()))
    }

    fn unit(&mut self, kind_required: bool) -> Result<RawUnit, OrderError> {
        let kind = match self.peek().and_then(UnitKind::parse) {
            Some(k) => {
                self.pos += 1;
                Some(k)
            }
            None if kind_required => return Err(malformed(self.text, "expected A or F")),
            None => None,
        };
        Ok(RawUnit {
            kind,
            loc: self.loc()?,
        })
    }

    fn done(&self) -> Result<(), OrderError> {
        if self.pos < self.toks.len() {
            Err(malformed(self.text, "trailing tokens"))
        } else {
            Ok(())
        }
    }
}

enum RawCommand {
    Hold,
    Move(Loc),
    SupportHold(RawUnit),
    SupportMove(RawUnit, Loc),
    Convoy(RawUnit, Loc),
    Retreat(Loc),
    Disband,
    Build,
}

fn parse_raw(text: &str) -> Result<(RawUnit, RawCommand), OrderError> {
    let toks = lex(text);
    if toks.is_empty() {
        return Err(malformed(text, "empty order"));
    }
    // "BUILD A PAR" / "DISBAND F TRI" prefix forms
    let (prefix, rest) = match toks[0].as_str() {
        "BUILD" => (Some(RawCommand::Build), &toks[1..]),
        "DISBAND" | "REMOVE" => (Some(RawCommand::Disband), &toks[1..]),
        _ => (None, &toks[..]),
    };
    let mut c = Cursor {
        toks: rest,
        pos: 0,
        text,
    };
    let unit = c.unit(true)?;
    if let Some(cmd) = prefix {
        c.done()?;
        return Ok((unit, cmd));
    }
    let cmd = match c.next() {
        None | Some("H") | Some("HOLD") | Some("HOLDS") => RawCommand::Hold,
        Some("-") | Some("M") | Some("MOVE") => {
            let dest = c.loc()?;
            if c.peek() == Some("VIA") {
                c.pos += 1;
                if !matches!(c.next(), Some("C") | Some("CONVOY")) {
                    return Err(malformed(text, "expected VIA C"));
                }
            }
            RawCommand::Move(dest)
        }
        Some("S") | Some("SUPPORT") | Some("SUPPORTS") => {
            let target = c.unit(false)?;
            match c.peek() {
                Some("-") => {
                    c.pos += 1;
                    RawCommand::SupportMove(target, c.loc()?)
                }
                Some("H") | Some("HOLD") => {
                    c.pos += 1;
                    RawCommand::SupportHold(target)
                }
                _ => RawCommand::SupportHold(target),
            }
        }
        Some("C") | Some("CONVOY") | Some("CONVOYS") => {
            let army = c.unit(false)?;
            if army.kind == Some(UnitKind::Fleet) {
                return Err(malformed(text, "only armies are convoyed"));
            }
            if c.next() != Some("-") {
                return Err(malformed(text, "convoy needs a destination"));
            }
            RawCommand::Convoy(army, c.loc()?)
        }
        Some("R") | Some("RETREAT") => {
            if c.peek() == Some("-") {
                c.pos += 1;
            }
            RawCommand::Retreat(c.loc()?)
        }
        Some("D") | Some("DISBAND") => RawCommand::Disband,
        Some("B") | Some("BUILD") => RawCommand::Build,
        Some(t) => return Err(malformed(text, &format!("unexpected `{t}`"))),
    };
    c.done()?;
    Ok((unit, cmd))
}

fn check_loc(map: &Map, loc: Loc) -> Result<Loc, OrderError> {
    let unknown = || OrderError::UnknownProvince(loc.to_string());
    let p = map.province(loc.prov).ok_or_else(unknown)?;
    if let Some(c) = loc.coast {
        if !p.coasts.contains(&c) {
            return Err(unknown());
        }
    }
    Ok(loc)
}

/// Parses an order string, optionally resolving it against a game state.
///
/// With a state, the ordered unit must exist (except for builds), a fleet's
/// missing coast is filled in from the board, and support/convoy targets may
/// omit their unit type.
pub fn parse_order(text: &str, map: &Map, state: Option<&GameState>) -> Result<Order, OrderError> {
    let (raw_unit, raw_cmd) = parse_raw(text)?;
    let kind = raw_unit.kind.expect("actor kind is required");
    let mut loc = check_loc(map, raw_unit.loc)?;

    let resolve_target = |t: RawUnit| -> Result<OrderUnit, OrderError> {
        let mut tloc = check_loc(map, t.loc)?;
        let on_board = state.and_then(|s| s.unit_at(tloc.prov));
        let tkind = match (t.kind, on_board) {
            (Some(k), _) => k,
            (None, Some(u)) => u.kind,
            (None, None) => return Err(malformed(text, "target needs a unit type")),
        };
        if let Some(u) = on_board {
            if tloc.coast.is_none() && u.kind == tkind {
                tloc = u.loc;
            }
        }
        Ok(OrderUnit::new(tkind, tloc))
    };

    let command = match raw_cmd {
        RawCommand::Hold => Command::Hold,
        RawCommand::Move(d) => Command::Move {
            dest: check_loc(map, d)?,
        },
        RawCommand::SupportHold(t) => Command::SupportHold {
            target: resolve_target(t)?,
        },
        RawCommand::SupportMove(t, d) => Command::SupportMove {
            target: resolve_target(t)?,
            dest: check_loc(map, d)?.prov,
        },
        RawCommand::Convoy(a, d) => Command::Convoy {
            army: check_loc(map, a.loc)?.prov,
            dest: check_loc(map, d)?.prov,
        },
        RawCommand::Retreat(d) => Command::Retreat {
            dest: check_loc(map, d)?,
        },
        RawCommand::Disband => Command::Disband,
        RawCommand::Build => Command::Build,
    };

    if let Some(state) = state {
        if command != Command::Build {
            let unit = match command {
                Command::Retreat { .. } | Command::Disband if !state.dislodged().is_empty() => {
                    state
                        .dislodged()
                        .iter()
                        .map(|d| &d.unit)
                        .find(|u| u.loc.prov == loc.prov)
                        .copied()
                        .or_else(|| state.unit_at(loc.prov).copied())
                }
                _ => state.unit_at(loc.prov).copied(),
            };
            match unit {
                Some(u) if u.kind == kind => {
                    if loc.coast.is_none() {
                        loc = u.loc;
                    }
                }
                _ => return Err(OrderError::NoSuchUnit(format!("{kind} {loc}"))),
            }
        }
    }

    Ok(Order::new(OrderUnit::new(kind, loc), command))
}

impl FromStr for Order {
    type Err = OrderError;

    /// Syntax-only parse: codes are not checked against any map.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let (raw_unit, raw_cmd) = parse_raw(s)?;
        let need_kind = |u: RawUnit| -> Result<OrderUnit, OrderError> {
            Ok(OrderUnit::new(
                u.kind
                    .ok_or_else(|| malformed(s, "target needs a unit type"))?,
                u.loc,
            ))
        };
        let unit = OrderUnit::new(raw_unit.kind.expect("actor kind is required"), raw_unit.loc);
        let command = match raw_cmd {
            RawCommand::Hold => Command::Hold,
            RawCommand::Move(dest) => Command::Move { dest },
            RawCommand::SupportHold(t) => Command::SupportHold {
                target: need_kind(t)?,
            },
            RawCommand::SupportMove(t, d) => Command::SupportMove {
                target: need_kind(t)?,
                dest: d.prov,
            },
            RawCommand::Convoy(a, d) => Command::Convoy {
                army: a.loc.prov,
                dest: d.prov,
            },
            RawCommand::Retreat(dest) => Command::Retreat { dest },
            RawCommand::Disband => Command::Disband,
            RawCommand::Build => Command::Build,
        };
        Ok(Order::new(unit, command))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::game::map::Coast;
    use crate::game::{GameState, Power};

    fn p(s: &str) -> Prov {
        Prov::new(s).unwrap()
    }

    #[test]
    fn parses_figure_one_move() {
        let m = Map::standard();
        let o = parse_order("F SKA - SWE", &m, None).unwrap();
        assert_eq!(
            o,
            Order::move_to(OrderUnit::fleet(Loc::new(p("SKA"))), Loc::new(p("SWE")))
        );
        assert_eq!(o.to_string(), "F SKA - SWE");
    }

    #[test]
    fn parses_hold_and_support() {
        let m = Map::standard();
        let h = parse_order("A PAR H", &m, None).unwrap();
        assert_eq!(h.command, Command::Hold);
        let s = parse_order("F NWY S F SKA - SWE", &m, None).unwrap();
        assert_eq!(
            s.command,
            Command::SupportMove {
                target: OrderUnit::fleet(Loc::new(p("SKA"))),
                dest: p("SWE")
            }
        );
        assert_eq!(s.to_string(), "F NWY S F SKA - SWE");
    }

    #[test]
    fn case_insensitive_codes_and_variants() {
        let m = Map::standard();
        let o = parse_order("f ska -> swe", &m, None).unwrap();
        assert_eq!(o.to_string(), "F SKA - SWE");
        let c = parse_order("F NTH C A LON - NWY", &m, None).unwrap();
        assert_eq!(c.to_string(), "F NTH C A LON - NWY");
        let b = parse_order("BUILD F STP/NC", &m, None).unwrap();
        assert_eq!(b.to_string(), "F STP/NC B");
        let v = parse_order("A LON - NWY VIA C", &m, None).unwrap();
        assert_eq!(v.to_string(), "A LON - NWY");
    }

    #[test]
    fn errors() {
        let m = Map::standard();
        assert!(matches!(
            parse_order("F XYZ - SWE", &m, None),
            Err(OrderError::UnknownProvince(_))
        ));
        assert!(matches!(
            parse_order("F SKA SWE", &m, None),
            Err(OrderError::MalformedOrder { .. })
        ));
        assert!(matches!(
            parse_order("", &m, None),
            Err(OrderError::MalformedOrder { .. })
        ));
        assert!(matches!(
            parse_order("F STP/EC - BAR", &m, None),
            Err(OrderError::UnknownProvince(_))
        ));
        let st = GameState::initial(Map::standard());
        assert!(matches!(
            parse_order("F SKA - SWE", &m, Some(&st)),
            Err(OrderError::NoSuchUnit(_))
        ));
    }

    #[test]
    fn state_fills_coasts_and_target_kinds() {
        let m = Map::standard();
        let st = GameState::initial(m.clone());
        let o = parse_order("F STP - BOT", &m, Some(&st)).unwrap();
        assert_eq!(o.unit.loc, Loc::with_coast(p("STP"), Coast::South));
        let s = parse_order("A MOS S STP", &m, Some(&st)).unwrap();
        assert_eq!(s.to_string(), "A MOS S F STP/SC");
        assert_eq!(st.unit_at(p("STP")).unwrap().owner, Power::Rus);
    }

    #[test]
    fn normalization_drops_coasts() {
        let a: Order = "F STP/SC - BOT".parse().unwrap();
        let b: Order = "F STP - BOT".parse().unwrap();
        assert_ne!(a, b);
        assert!(a.same_action(&b));
    }
}
