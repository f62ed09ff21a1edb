use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::map::{Loc, Map, Prov, Terrain, UnitKind};
use super::power::Power;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Season {
    Spring,
    Fall,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Phase {
    Movement,
    Retreat,
    Adjustment,
}

/// A game phase, written `S1901M`, `F1901R`, `W1901A`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Turn {
    pub year: u16,
    pub season: Season,
    pub phase: Phase,
}

impl Turn {
    pub const FIRST: Turn = Turn {
        year: 1901,
        season: Season::Spring,
        phase: Phase::Movement,
    };

    pub fn new(year: u16, season: Season, phase: Phase) -> Turn {
        Turn {
            year,
            season,
            phase,
        }
    }

    pub fn movement(year: u16, season: Season) -> Turn {
        Turn::new(year, season, Phase::Movement)
    }

    /// Zero-based count of movement phases since Spring 1901.
    pub fn movement_index(&self) -> u32 {
        (self.year.saturating_sub(1901) as u32) * 2 + u32::from(self.season == Season::Fall)
    }

    /// Inverse of [`Turn::movement_index`].
    pub fn from_movement_index(i: u32) -> Turn {
        let season = if i.is_multiple_of(2) {
            Season::Spring
        } else {
            Season::Fall
        };
        Turn::movement(1901 + (i / 2) as u16, season)
    }
}

impl fmt::Display for Turn {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match (self.season, self.phase) {
            (_, Phase::Adjustment) => 'W',
            (Season::Spring, _) => 'S',
            (Season::Fall, _) => 'F',
        };
        let p = match self.phase {
            Phase::Movement => 'M',
            Phase::Retreat => 'R',
            Phase::Adjustment => 'A',
        };
        write!(f, "{s}{}{p}", self.year)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("bad turn key `{0}`")]
pub struct BadTurn(pub String);

impl FromStr for Turn {
    type Err = BadTurn;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bad = || BadTurn(s.to_string());
        let b = s.as_bytes();
        if b.len() != 6 {
            return Err(bad());
        }
        let year: u16 = s[1..5].parse().map_err(|_| bad())?;
        let phase = match b[5].to_ascii_uppercase() {
            b'M' => Phase::Movement,
            b'R' => Phase::Retreat,
            b'A' => Phase::Adjustment,
            _ => return Err(bad()),
        };
        let season = match (b[0].to_ascii_uppercase(), phase) {
            (b'S', Phase::Movement | Phase::Retreat) => Season::Spring,
            (b'F', Phase::Movement | Phase::Retreat) => Season::Fall,
            (b'W', Phase::Adjustment) => Season::Fall,
            _ => return Err(bad()),
        };
        if year < 1901 {
            return Err(bad());
        }
        Ok(Turn {
            year,
            season,
            phase,
        })
    }
}

impl Serialize for Turn {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for Turn {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Unit {
    pub owner: Power,
    pub kind: UnitKind,
    pub loc: Loc,
}

impl Unit {
    pub fn new(owner: Power, kind: UnitKind, loc: Loc) -> Unit {
        Unit { owner, kind, loc }
    }

    pub fn order_unit(&self) -> super::order::OrderUnit {
        super::order::OrderUnit::new(self.kind, self.loc)
    }
}

impl fmt::Display for Unit {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} {} {}", self.owner, self.kind, self.loc)
    }
}

impl FromStr for Unit {
    type Err = String;

    /// `ENG F NWY`
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let parts: Vec<_> = s.split_whitespace().collect();
        if parts.len() != 3 {
            return Err(format!("bad unit `{s}`"));
        }
        let owner = parts[0].parse::<Power>().map_err(|e| e.to_string())?;
        let kind = UnitKind::parse(parts[1]).ok_or_else(|| format!("bad unit type in `{s}`"))?;
        let loc = Loc::parse(parts[2]).ok_or_else(|| format!("bad location in `{s}`"))?;
        Ok(Unit { owner, kind, loc })
    }
}

impl Serialize for Unit {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for Unit {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Dislodged {
    pub unit: Unit,
    /// Origin of the dislodging attack; `None` when it came by convoy.
    pub attacker_from: Option<Prov>,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum StateError {
    #[error("unknown province {0}")]
    UnknownProvince(String),
    #[error("{0} already occupied")]
    Occupied(Prov),
    #[error("{kind} cannot stand in {loc}")]
    BadPlacement { kind: UnitKind, loc: Loc },
    #[error("{0} is not a supply center")]
    NotSupplyCenter(Prov),
    #[error("{0}")]
    Snapshot(String),
}

/// Immutable board position for one phase of one game.
#[derive(Debug, Clone)]
pub struct GameState {
    map: Arc<Map>,
    turn: Turn,
    units: BTreeMap<Prov, Unit>,
    sc_owner: BTreeMap<Prov, Power>,
    dislodged: Vec<Dislodged>,
    /// Provinces left vacant by a standoff in the preceding movement phase.
    standoffs: BTreeSet<Prov>,
}

impl PartialEq for GameState {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.map, &other.map)
            && self.turn == other.turn
            && self.units == other.units
            && self.sc_owner == other.sc_owner
            && self.dislodged == other.dislodged
            && self.standoffs == other.standoffs
    }
}

impl GameState {
    /// Empty board at `turn`.
    pub fn empty(map: Arc<Map>, turn: Turn) -> GameState {
        GameState {
            map,
            turn,
            units: BTreeMap::new(),
            sc_owner: BTreeMap::new(),
            dislodged: Vec::new(),
            standoffs: BTreeSet::new(),
        }
    }

    /// Spring 1901 with the map's starting units and home centers owned.
    pub fn initial(map: Arc<Map>) -> GameState {
        let mut st = GameState::empty(map.clone(), Turn::FIRST);
        for u in map.start_units() {
            st.units
                .insert(u.loc.prov, Unit::new(u.power, u.kind, u.loc));
        }
        for p in map.provinces() {
            if let (true, Some(h)) = (p.supply_center, p.home) {
                st.sc_owner.insert(p.code, h);
            }
        }
        st
    }

    pub fn map(&self) -> &Arc<Map> {
        &self.map
    }

    pub fn turn(&self) -> Turn {
        self.turn
    }

    pub fn with_turn(mut self, turn: Turn) -> GameState {
        self.turn = turn;
        self
    }

    /// Places a unit, checking terrain, coast layout and occupancy.
    pub fn with_unit(
        mut self,
        owner: Power,
        kind: UnitKind,
        loc: Loc,
    ) -> Result<GameState, StateError> {
        self.place(Unit::new(owner, kind, loc))?;
        Ok(self)
    }

    /// Convenience for tests and fixtures: `"ENG F NWY"`.
    pub fn with(self, unit: &str) -> Result<GameState, StateError> {
        let u: Unit = unit.parse().map_err(StateError::Snapshot)?;
        self.with_unit(u.owner, u.kind, u.loc)
    }

    pub fn with_owner(mut self, prov: Prov, owner: Power) -> Result<GameState, StateError> {
        match self.map.province(prov) {
            Some(p) if p.supply_center => {
                self.sc_owner.insert(prov, owner);
                Ok(self)
            }
            Some(_) => Err(StateError::NotSupplyCenter(prov)),
            None => Err(StateError::UnknownProvince(prov.to_string())),
        }
    }

    pub fn without_owner(mut self, prov: Prov) -> GameState {
        self.sc_owner.remove(&prov);
        self
    }

    pub(crate) fn check_placement(&self, kind: UnitKind, loc: Loc) -> Result<(), StateError> {
        let p = self
            .map
            .province(loc.prov)
            .ok_or_else(|| StateError::UnknownProvince(loc.to_string()))?;
        let ok = match kind {
            UnitKind::Army => p.terrain != Terrain::Sea && loc.coast.is_none(),
            UnitKind::Fleet => {
                p.terrain != Terrain::Land
                    && match loc.coast {
                        Some(c) => p.coasts.contains(&c),
                        None => !p.has_coasts(),
                    }
            }
        };
        if ok {
            Ok(())
        } else {
            Err(StateError::BadPlacement { kind, loc })
        }
    }

    fn place(&mut self, u: Unit) -> Result<(), StateError> {
        self.check_placement(u.kind, u.loc)?;
        if self.units.contains_key(&u.loc.prov) {
            return Err(StateError::Occupied(u.loc.prov));
        }
        self.units.insert(u.loc.prov, u);
        Ok(())
    }

    pub fn unit_at(&self, p: Prov) -> Option<&Unit> {
        self.units.get(&p)
    }

    pub fn units(&self) -> impl Iterator<Item = &Unit> {
        self.units.values()
    }

    pub fn units_of(&self, power: Power) -> impl Iterator<Item = &Unit> {
        self.units.values().filter(move |u| u.owner == power)
    }

    pub fn unit_count(&self) -> usize {
        self.units.len()
    }

    pub fn dislodged(&self) -> &[Dislodged] {
        &self.dislodged
    }

    pub fn dislodged_at(&self, p: Prov) -> Option<&Dislodged> {
        self.dislodged.iter().find(|d| d.unit.loc.prov == p)
    }

    pub fn standoffs(&self) -> &BTreeSet<Prov> {
        &self.standoffs
    }

    pub fn owner(&self, sc: Prov) -> Option<Power> {
        self.sc_owner.get(&sc).copied()
    }

    pub fn sc_ownership(&self) -> &BTreeMap<Prov, Power> {
        &self.sc_owner
    }

    pub fn supply_center_count(&self, power: Power) -> usize {
        self.sc_owner.values().filter(|&&p| p == power).count()
    }

    /// Supply-center counts indexed by [`Power::index`].
    pub fn sc_counts(&self) -> [usize; 7] {
        let mut out = [0; 7];
        for p in self.sc_owner.values() {
            out[p.index()] += 1;
        }
        out
    }

    pub fn is_eliminated(&self, power: Power) -> bool {
        self.units_of(power).next().is_none()
            && self.supply_center_count(power) == 0
            && !self.dislodged.iter().any(|d| d.unit.owner == power)
    }

    pub fn snapshot(&self) -> StateSnapshot {
        StateSnapshot {
            turn: self.turn,
            units: self.units.values().copied().collect(),
            supply_centers: self.sc_owner.clone(),
            dislodged: self.dislodged.clone(),
            standoffs: self.standoffs.iter().copied().collect(),
        }
    }

    pub fn from_snapshot(map: Arc<Map>, snap: &StateSnapshot) -> Result<GameState, StateError> {
        let mut st = GameState::empty(map, snap.turn);
        for u in &snap.units {
            st.place(*u)?;
        }
        for (&p, &o) in &snap.supply_centers {
            st = st.with_owner(p, o)?;
        }
        st.dislodged = snap.dislodged.clone();
        st.standoffs = snap.standoffs.iter().copied().collect();
        Ok(st)
    }

    pub(crate) fn from_parts(
        map: Arc<Map>,
        turn: Turn,
        units: BTreeMap<Prov, Unit>,
        sc_owner: BTreeMap<Prov, Power>,
        dislodged: Vec<Dislodged>,
        standoffs: BTreeSet<Prov>,
    ) -> GameState {
        GameState {
            map,
            turn,
            units,
            sc_owner,
            dislodged,
            standoffs,
        }
    }
}

/// Serializable view of a [`GameState`], used in logs and corpus files.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct StateSnapshot {
    pub turn: Turn,
    pub units: Vec<Unit>,
    pub supply_centers: BTreeMap<Prov, Power>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub dislodged: Vec<Dislodged>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub standoffs: Vec<Prov>,
}

/// Number of supply centers owned by `power`.
pub fn supply_center_count(state: &GameState, power: Power) -> usize {
    state.supply_center_count(power)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn opening_counts() {
        let st = GameState::initial(Map::standard());
        assert_eq!(supply_center_count(&st, Power::Fra), 3);
        assert_eq!(supply_center_count(&st, Power::Rus), 4);
        assert_eq!(st.sc_counts().iter().sum::<usize>(), 22);
        assert_eq!(st.unit_count(), 22);
    }

    #[test]
    fn turn_keys_round_trip() {
        for key in ["S1901M", "F1901M", "F1903R", "W1901A", "S1907R"] {
            assert_eq!(key.parse::<Turn>().unwrap().to_string(), key);
        }
        assert!("X1901M".parse::<Turn>().is_err());
        assert!("W1901M".parse::<Turn>().is_err());
        assert_eq!(Turn::from_movement_index(13).to_string(), "F1907M");
        assert_eq!("F1907M".parse::<Turn>().unwrap().movement_index(), 13);
    }

    #[test]
    fn placement_rules() {
        let m = Map::standard();
        let st = GameState::empty(m, Turn::FIRST);
        assert!(st.clone().with("ENG A NTH").is_err());
        assert!(st.clone().with("ENG F PAR").is_err());
        assert!(st.clone().with("RUS F STP").is_err());
        let st = st.with("RUS F STP/NC").unwrap();
        assert!(matches!(st.with("ENG A STP"), Err(StateError::Occupied(_))));
    }

    #[test]
    fn snapshot_round_trip() {
        let st = GameState::initial(Map::standard());
        let snap = st.snapshot();
        let json = serde_json::to_string(&snap).unwrap();
        let back: StateSnapshot = serde_json::from_str(&json).unwrap();
        let st2 = GameState::from_snapshot(st.map().clone(), &back).unwrap();
        assert_eq!(st, st2);
    }
}
