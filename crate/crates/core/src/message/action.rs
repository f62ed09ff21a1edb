//! Typed view of the action an intent graph describes, and the conversions
//! between the two.

use serde::{Deserialize, Serialize};

use crate::game::{Coast, Command, GameState, Loc, Map, Order, Power, UnitKind};
use crate::graph::{IntentGraph, Target};

/// A province as mentioned: where it resolves, and the words used.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Place {
    pub loc: Loc,
    pub surface: String,
}

impl Place {
    pub fn new(loc: Loc, surface: impl Into<String>) -> Place {
        Place {
            loc,
            surface: surface.into(),
        }
    }

    /// Named by the map's canonical name.
    pub fn canonical(map: &Map, loc: Loc) -> Place {
        Place::new(loc, map.get(loc.prov).name.clone())
    }
}

/// Possibly underspecified unit reference.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct UnitSpec {
    pub kind: Option<UnitKind>,
    pub nation: Option<Power>,
    pub place: Option<Place>,
}

impl UnitSpec {
    pub fn of(nation: Power) -> UnitSpec {
        UnitSpec {
            nation: Some(nation),
            ..UnitSpec::default()
        }
    }

    pub fn exact(map: &Map, nation: Power, kind: UnitKind, loc: Loc) -> UnitSpec {
        UnitSpec {
            kind: Some(kind),
            nation: Some(nation),
            place: Some(Place::canonical(map, loc)),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "action", rename_all = "snake_case")]
pub enum Action {
    Move {
        unit: UnitSpec,
        dest: Option<Place>,
    },
    Retreat {
        unit: UnitSpec,
        dest: Option<Place>,
    },
    Hold {
        unit: UnitSpec,
    },
    /// `dest` absent means support to hold.
    Support {
        supporter: UnitSpec,
        target: UnitSpec,
        dest: Option<Place>,
    },
    Convoy {
        fleet: UnitSpec,
        army: UnitSpec,
        dest: Option<Place>,
    },
    Build {
        nation: Option<Power>,
        kind: Option<UnitKind>,
        at: Option<Place>,
    },
    Disband {
        unit: UnitSpec,
    },
    Ally {
        nation: Option<Power>,
        partner: Option<Power>,
    },
    Demilitarize {
        place: Option<Place>,
    },
}

impl Action {
    pub fn concept(&self) -> &'static str {
        match self {
            Action::Move { .. } => "move-01",
            Action::Retreat { .. } => "retreat-01",
            Action::Hold { .. } => "hold-01",
            Action::Support { .. } => "support-01",
            Action::Convoy { .. } => "transport-01",
            Action::Build { .. } => "build-01",
            Action::Disband { .. } => "disband-01",
            Action::Ally { .. } => "ally-01",
            Action::Demilitarize { .. } => "demilitarize-01",
        }
    }

    /// The unit whose owner performs the action.
    pub fn acting_unit(&self) -> Option<&UnitSpec> {
        match self {
            Action::Move { unit, .. }
            | Action::Retreat { unit, .. }
            | Action::Hold { unit }
            | Action::Disband { unit } => Some(unit),
            Action::Support { supporter, .. } => Some(supporter),
            Action::Convoy { fleet, .. } => Some(fleet),
            _ => None,
        }
    }

    pub fn acting_unit_mut(&mut self) -> Option<&mut UnitSpec> {
        match self {
            Action::Move { unit, .. }
            | Action::Retreat { unit, .. }
            | Action::Hold { unit }
            | Action::Disband { unit } => Some(unit),
            Action::Support { supporter, .. } => Some(supporter),
            Action::Convoy { fleet, .. } => Some(fleet),
            _ => None,
        }
    }

    /// Fully specified action for a concrete order of `state`.
    pub fn from_order(state: &GameState, owner: Power, order: &Order) -> Action {
        let map = state.map();
        let me = UnitSpec::exact(map, owner, order.unit.kind, order.unit.loc);
        let other = |loc: Loc, kind: UnitKind| {
            let nation = state
                .unit_at(loc.prov)
                .map(|u| u.owner)
                .or_else(|| state.dislodged_at(loc.prov).map(|d| d.unit.owner));
            UnitSpec {
                kind: Some(kind),
                nation,
                place: Some(Place::canonical(map, loc)),
            }
        };
        let place = |loc: Loc| Some(Place::canonical(map, loc));
        match order.command {
            Command::Hold => Action::Hold { unit: me },
            Command::Move { dest } => Action::Move {
                unit: me,
                dest: place(dest),
            },
            Command::Retreat { dest } => Action::Retreat {
                unit: me,
                dest: place(dest),
            },
            Command::SupportHold { target } => Action::Support {
                supporter: me,
                target: other(target.loc, target.kind),
                dest: None,
            },
            Command::SupportMove { target, dest } => Action::Support {
                supporter: me,
                target: other(target.loc, target.kind),
                dest: place(Loc::new(dest)),
            },
            Command::Convoy { army, dest } => Action::Convoy {
                fleet: me,
                army: other(Loc::new(army), UnitKind::Army),
                dest: place(Loc::new(dest)),
            },
            Command::Disband => Action::Disband { unit: me },
            Command::Build => Action::Build {
                nation: Some(owner),
                kind: Some(order.unit.kind),
                at: place(order.unit.loc),
            },
        }
    }

    pub fn to_graph(&self) -> IntentGraph {
        let concept = self.concept();
        let root = concept.chars().next().unwrap().to_string();
        let mut g = IntentGraph::new(&root, concept);
        match self {
            Action::Move { unit, dest } | Action::Retreat { unit, dest } => {
                add_unit(&mut g, &root, "ARG1", unit);
                if let Some(d) = dest {
                    add_place(&mut g, &root, "ARG2", d);
                }
            }
            Action::Hold { unit } | Action::Disband { unit } => {
                add_unit(&mut g, &root, "ARG1", unit)
            }
            Action::Support {
                supporter,
                target,
                dest,
            } => {
                add_unit(&mut g, &root, "ARG0", supporter);
                add_unit(&mut g, &root, "ARG1", target);
                if let Some(d) = dest {
                    add_place(&mut g, &root, "ARG2", d);
                }
            }
            Action::Convoy { fleet, army, dest } => {
                add_unit(&mut g, &root, "ARG0", fleet);
                add_unit(&mut g, &root, "ARG1", army);
                if let Some(d) = dest {
                    add_place(&mut g, &root, "ARG2", d);
                }
            }
            Action::Build { nation, kind, at } => {
                if let Some(n) = nation {
                    add_country(&mut g, &root, "ARG0", *n);
                }
                let u = g.add_child(&root, "ARG1", kind.map_or("unit", |k| k.word()));
                let _ = u;
                if let Some(p) = at {
                    add_place(&mut g, &root, "location", p);
                }
            }
            Action::Ally { nation, partner } => {
                if let Some(n) = nation {
                    add_country(&mut g, &root, "ARG0", *n);
                }
                if let Some(n) = partner {
                    add_country(&mut g, &root, "ARG1", *n);
                }
            }
            Action::Demilitarize { place } => {
                if let Some(p) = place {
                    add_place(&mut g, &root, "ARG1", p);
                }
            }
        }
        g
    }

    /// Reads an action back from a graph. Unknown root concepts and
    /// unresolvable names give `None`.
    pub fn from_graph(g: &IntentGraph, map: &Map) -> Option<Action> {
        let root = g.root()?;
        let unit = |role: &str| {
            g.child(root, role)
                .map(|u| read_unit(g, u, map))
                .unwrap_or(Some(UnitSpec::default()))
        };
        let place = |role: &str| -> Option<Option<Place>> {
            match g.child(root, role) {
                Some(p) => read_place(g, p, map).map(Some),
                None => Some(None),
            }
        };
        Some(match g.root_concept()? {
            "move-01" => Action::Move {
                unit: unit("ARG1")?,
                dest: place("ARG2")?,
            },
            "retreat-01" => Action::Retreat {
                unit: unit("ARG1")?,
                dest: place("ARG2")?,
            },
            "hold-01" => Action::Hold {
                unit: unit("ARG1")?,
            },
            "disband-01" => Action::Disband {
                unit: unit("ARG1")?,
            },
            "support-01" => Action::Support {
                supporter: unit("ARG0")?,
                target: unit("ARG1")?,
                dest: place("ARG2")?,
            },
            "transport-01" => Action::Convoy {
                fleet: unit("ARG0")?,
                army: unit("ARG1")?,
                dest: place("ARG2")?,
            },
            "build-01" => {
                let u = g.child(root, "ARG1");
                Action::Build {
                    nation: g.child(root, "ARG0").and_then(|c| read_country(g, c)),
                    kind: u.and_then(|u| g.concept(u)).and_then(UnitKind::parse),
                    // a location hung off the unit is still honoured here
                    at: match g
                        .child(root, "location")
                        .or_else(|| u.and_then(|u| g.child(u, "location")))
                    {
                        Some(p) => Some(read_place(g, p, map)?),
                        None => None,
                    },
                }
            }
            "ally-01" => Action::Ally {
                nation: g.child(root, "ARG0").and_then(|c| read_country(g, c)),
                partner: g.child(root, "ARG1").and_then(|c| read_country(g, c)),
            },
            "demilitarize-01" => Action::Demilitarize {
                place: place("ARG1")?,
            },
            _ => return None,
        })
    }
}

fn add_name(g: &mut IntentGraph, var: &str, name: &str) {
    let n = g.add_child(var, "name", "name");
    for (i, part) in name.split_whitespace().enumerate() {
        g.add_edge(&n, &format!("op{}", i + 1), Target::Str(part.to_string()));
    }
}

fn add_country(g: &mut IntentGraph, parent: &str, role: &str, p: Power) {
    let c = g.add_child(parent, role, "country");
    add_name(g, &c, p.name());
}

fn add_place(g: &mut IntentGraph, parent: &str, role: &str, p: &Place) {
    let v = g.add_child(parent, role, "province");
    add_name(g, &v, &p.surface);
    if let Some(c) = p.loc.coast {
        g.add_edge(&v, "coast", Target::Str(c.code().to_ascii_lowercase()));
    }
}

fn add_unit(g: &mut IntentGraph, parent: &str, role: &str, u: &UnitSpec) {
    let v = g.add_child(parent, role, u.kind.map_or("unit", |k| k.word()));
    if let Some(n) = u.nation {
        add_country(g, &v, "mod", n);
    }
    if let Some(p) = &u.place {
        add_place(g, &v, "location", p);
    }
}

fn read_country(g: &IntentGraph, var: &str) -> Option<Power> {
    g.name_of(var).and_then(|n| Power::from_name(&n))
}

fn read_place(g: &IntentGraph, var: &str, map: &Map) -> Option<Place> {
    let name = g.name_of(var)?;
    let prov = map.resolve_name(&name)?;
    let coast = g
        .get(var, "coast")
        .and_then(|t| t.constant())
        .and_then(Coast::parse);
    let loc = match coast {
        Some(c) if map.get(prov).coasts.contains(&c) => Loc::with_coast(prov, c),
        _ => Loc::new(prov),
    };
    Some(Place::new(loc, name))
}

fn read_unit(g: &IntentGraph, var: &str, map: &Map) -> Option<UnitSpec> {
    let nation = g
        .child(var, "mod")
        .or_else(|| g.child(var, "poss"))
        .and_then(|c| read_country(g, c));
    let place = match g.child(var, "location") {
        Some(p) => Some(read_place(g, p, map)?),
        None => None,
    };
    Some(UnitSpec {
        kind: g.concept(var).and_then(UnitKind::parse),
        nation,
        place,
    })
}
