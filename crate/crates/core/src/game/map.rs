//! Map topology: provinces, coasts, and per-unit-type adjacency.
//!
//! Maps are loaded from a small line-oriented text format (see
//! `data/standard.map`), which lets tests build miniature boards.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::path::Path;

use std::sync::{Arc, OnceLock};

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::power::Power;

/// A three-letter province code such as `SWE` or `STP`.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Prov([u8; 3]);

impl Prov {
    /// Builds a code from three ASCII letters, case-insensitively.
    pub fn new(code: &str) -> Option<Prov> {
        let b = code.as_bytes();
        if b.len() != 3 || !b.iter().all(|c| c.is_ascii_alphabetic()) {
            return None;
        }
        Some(Prov([
            b[0].to_ascii_uppercase(),
            b[1].to_ascii_uppercase(),
            b[2].to_ascii_uppercase(),
        ]))
    }

    pub fn as_str(&self) -> &str {
        // always ASCII letters
        std::str::from_utf8(&self.0).unwrap_or("???")
    }
}

impl fmt::Display for Prov {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl fmt::Debug for Prov {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl Serialize for Prov {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(self.as_str())
    }
}

impl<'de> Deserialize<'de> for Prov {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        Prov::new(&s).ok_or_else(|| serde::de::Error::custom(format!("bad province code `{s}`")))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Coast {
    #[serde(rename = "NC")]
    North,
    #[serde(rename = "SC")]
    South,
    #[serde(rename = "EC")]
    East,
    #[serde(rename = "WC")]
    West,
}

impl Coast {
    pub fn code(self) -> &'static str {
        match self {
            Coast::North => "NC",
            Coast::South => "SC",
            Coast::East => "EC",
            Coast::West => "WC",
        }
    }

    pub fn words(self) -> &'static str {
        match self {
            Coast::North => "north coast",
            Coast::South => "south coast",
            Coast::East => "east coast",
            Coast::West => "west coast",
        }
    }

    pub fn parse(s: &str) -> Option<Coast> {
        match s.to_ascii_lowercase().as_str() {
            "nc" | "n" | "north" => Some(Coast::North),
            "sc" | "s" | "south" => Some(Coast::South),
            "ec" | "e" | "east" => Some(Coast::East),
            "wc" | "w" | "west" => Some(Coast::West),
            _ => None,
        }
    }
}

/// A province plus an optional named coast (`STP/SC`).
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Loc {
    pub prov: Prov,
    pub coast: Option<Coast>,
}

impl Loc {
    pub fn new(prov: Prov) -> Loc {
        Loc { prov, coast: None }
    }

    pub fn with_coast(prov: Prov, coast: Coast) -> Loc {
        Loc {
            prov,
            coast: Some(coast),
        }
    }

    /// Parses `SWE`, `STP/SC`, `stp(sc)`. Does not check the code against a map.
    pub fn parse(s: &str) -> Option<Loc> {
        let s = s.trim();
        let (p, c) = if let Some((p, c)) = s.split_once('/') {
            (p, Some(c))
        } else if let Some((p, rest)) = s.split_once('(') {
            (p, Some(rest.trim_end_matches(')')))
        } else {
            (s, None)
        };
        let prov = Prov::new(p.trim())?;
        let coast = match c {
            Some(c) => Some(Coast::parse(c.trim())?),
            None => None,
        };
        Some(Loc { prov, coast })
    }
}

impl From<Prov> for Loc {
    fn from(p: Prov) -> Loc {
        Loc::new(p)
    }
}

impl fmt::Display for Loc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.coast {
            Some(c) => write!(f, "{}/{}", self.prov, c.code()),
            None => write!(f, "{}", self.prov),
        }
    }
}

impl fmt::Debug for Loc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl Serialize for Loc {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for Loc {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        Loc::parse(&s).ok_or_else(|| serde::de::Error::custom(format!("bad location `{s}`")))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum UnitKind {
    #[serde(rename = "A")]
    Army,
    #[serde(rename = "F")]
    Fleet,
}

impl UnitKind {
    pub fn letter(self) -> char {
        match self {
            UnitKind::Army => 'A',
            UnitKind::Fleet => 'F',
        }
    }

    pub fn word(self) -> &'static str {
        match self {
            UnitKind::Army => "army",
            UnitKind::Fleet => "fleet",
        }
    }

    pub fn parse(s: &str) -> Option<UnitKind> {
        match s.to_ascii_lowercase().as_str() {
            "a" | "army" => Some(UnitKind::Army),
            "f" | "fleet" => Some(UnitKind::Fleet),
            _ => None,
        }
    }
}

impl fmt::Display for UnitKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.letter())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Terrain {
    Land,
    Sea,
    Coastal,
}

#[derive(Debug, Clone)]
pub struct Province {
    pub code: Prov,
    pub name: String,
    pub aliases: Vec<String>,
    pub terrain: Terrain,
    pub supply_center: bool,
    pub home: Option<Power>,
    /// Named coasts; empty for single-coast or landlocked provinces.
    pub coasts: Vec<Coast>,
    army_adj: BTreeSet<Prov>,
    /// Fleet edges keyed by the coast the fleet stands on (`None` when the
    /// province has no named coasts).
    fleet_adj: BTreeMap<Option<Coast>, Vec<Loc>>,
}

impl Province {
    pub fn has_coasts(&self) -> bool {
        !self.coasts.is_empty()
    }

    pub fn army_neighbors(&self) -> impl Iterator<Item = Prov> + '_ {
        self.army_adj.iter().copied()
    }
}

#[derive(Debug, thiserror::Error)]
pub enum MapError {
    #[error("map line {line}: {msg}")]
    Syntax { line: usize, msg: String },
    #[error("map adjacency not symmetric: {0}")]
    Asymmetric(String),
    #[error("map topology: {0}")]
    Topology(String),
    #[error("reading map: {0}")]
    Io(#[from] std::io::Error),
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("unknown province `{0}`")]
pub struct UnknownProvince(pub String);

/// A starting unit as listed in a map file.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct StartUnit {
    pub power: Power,
    pub kind: UnitKind,
    pub loc: Loc,
}

#[derive(Debug, Clone)]
pub struct Map {
    pub name: String,
    pub version: u32,
    provinces: BTreeMap<Prov, Province>,
    start: Vec<StartUnit>,
    /// Lower-cased full names and aliases, longest first.
    names: Vec<(String, Prov)>,
}

static STANDARD: OnceLock<Arc<Map>> = OnceLock::new();

impl Map {
    /// The standard 75-province board shipped in `data/standard.map`.
    pub fn standard() -> Arc<Map> {
        STANDARD
            .get_or_init(|| {
                Arc::new(
                    Map::parse(include_str!("../../data/standard.map"))
                        .expect("bundled standard map is valid"),
                )
            })
            .clone()
    }

    pub fn load(path: &Path) -> Result<Map, MapError> {
        Map::parse(&std::fs::read_to_string(path)?)
    }

    pub fn parse(text: &str) -> Result<Map, MapError> {
        let mut name = String::from("unnamed");
        let mut version = 1;
        let mut provinces: BTreeMap<Prov, Province> = BTreeMap::new();
        let mut start = Vec::new();
        let mut current: Option<Prov> = None;

        for (i, raw) in text.lines().enumerate() {
            let line_no = i + 1;
            let err = |msg: String| MapError::Syntax { line: line_no, msg };
            let line = raw.split('#').next().unwrap_or("");
            if line.trim().is_empty() {
                continue;
            }
            let indented = line.starts_with(' ') || line.starts_with('\t');
            let tokens = tokenize(line.trim()).map_err(&err)?;
            let head = tokens[0].as_str();
            if indented {
                let code =
                    current.ok_or_else(|| err("attribute outside a province block".into()))?;
                let prov = provinces.get_mut(&code).expect("current province exists");
                match head {
                    "alias" => prov.aliases.extend(tokens[1..].iter().cloned()),
                    "army" => {
                        for t in &tokens[1..] {
                            let p = Prov::new(t).ok_or_else(|| err(format!("bad code `{t}`")))?;
                            prov.army_adj.insert(p);
                        }
                    }
                    h if h == "fleet" || h.starts_with("fleet/") => {
                        let coast = match h.split_once('/') {
                            Some((_, c)) => {
                                let c = Coast::parse(c)
                                    .ok_or_else(|| err(format!("bad coast `{c}`")))?;
                                if !prov.coasts.contains(&c) {
                                    prov.coasts.push(c);
                                }
                                Some(c)
                            }
                            None => None,
                        };
                        let mut locs = Vec::new();
                        for t in &tokens[1..] {
                            locs.push(
                                Loc::parse(t).ok_or_else(|| err(format!("bad location `{t}`")))?,
                            );
                        }
                        prov.fleet_adj.entry(coast).or_default().extend(locs);
                    }
                    other => return Err(err(format!("unknown attribute `{other}`"))),
                }
                continue;
            }
            current = None;
            match head {
                "map" => {
                    name = tokens.get(1).cloned().unwrap_or_default();
                    version = tokens
                        .get(2)
                        .and_then(|v| v.parse().ok())
                        .ok_or_else(|| err("map header needs a numeric version".into()))?;
                }
                "province" => {
                    let code = tokens
                        .get(1)
                        .and_then(|c| Prov::new(c))
                        .ok_or_else(|| err("province needs a three-letter code".into()))?;
                    let mut terrain = None;
                    let mut sc = false;
                    let mut home = None;
                    let mut pname = code.to_string();
                    for t in &tokens[2..] {
                        let (k, v) = t
                            .split_once('=')
                            .ok_or_else(|| err(format!("expected key=value, got `{t}`")))?;
                        match k {
                            "kind" => {
                                terrain = Some(match v {
                                    "land" => Terrain::Land,
                                    "sea" => Terrain::Sea,
                                    "coastal" => Terrain::Coastal,
                                    _ => return Err(err(format!("bad kind `{v}`"))),
                                })
                            }
                            "sc" => sc = v == "yes",
                            "home" => {
                                home = if v == "-" {
                                    None
                                } else {
                                    Some(v.parse::<Power>().map_err(|e| err(e.to_string()))?)
                                }
                            }
                            "name" => pname = v.to_string(),
                            _ => return Err(err(format!("unknown key `{k}`"))),
                        }
                    }
                    let terrain = terrain.ok_or_else(|| err("province needs kind=".into()))?;
                    if provinces.contains_key(&code) {
                        return Err(err(format!("duplicate province {code}")));
                    }
                    provinces.insert(
                        code,
                        Province {
                            code,
                            name: pname,
                            aliases: Vec::new(),
                            terrain,
                            supply_center: sc,
                            home,
                            coasts: Vec::new(),
                            army_adj: BTreeSet::new(),
                            fleet_adj: BTreeMap::new(),
                        },
                    );
                    current = Some(code);
                }
                "unit" => {
                    if tokens.len() != 4 {
                        return Err(err("unit lines are `unit POWER A|F LOC`".into()));
                    }
                    let power = tokens[1].parse::<Power>().map_err(|e| err(e.to_string()))?;
                    let kind =
                        UnitKind::parse(&tokens[2]).ok_or_else(|| err("bad unit kind".into()))?;
                    let loc =
                        Loc::parse(&tokens[3]).ok_or_else(|| err("bad unit location".into()))?;
                    start.push(StartUnit { power, kind, loc });
                }
                other => return Err(err(format!("unknown record `{other}`"))),
            }
        }

        let mut names = Vec::new();
        for p in provinces.values() {
            names.push((p.name.to_ascii_lowercase(), p.code));
            for a in &p.aliases {
                names.push((a.to_ascii_lowercase(), p.code));
            }
        }
        names.sort_by(|a, b| b.0.len().cmp(&a.0.len()).then(a.0.cmp(&b.0)));
        names.dedup();

        let map = Map {
            name,
            version,
            provinces,
            start,
            names,
        };
        map.check()?;
        Ok(map)
    }

    fn check(&self) -> Result<(), MapError> {
        for p in self.provinces.values() {
            for q in &p.army_adj {
                let other = self
                    .provinces
                    .get(q)
                    .ok_or_else(|| MapError::Topology(format!("{} lists unknown {}", p.code, q)))?;
                if p.terrain == Terrain::Sea || other.terrain == Terrain::Sea {
                    return Err(MapError::Topology(format!(
                        "army adjacency {}-{} touches a sea province",
                        p.code, q
                    )));
                }
                if !other.army_adj.contains(&p.code) {
                    return Err(MapError::Asymmetric(format!("army {}-{}", p.code, q)));
                }
            }
            if p.terrain == Terrain::Land && !p.fleet_adj.is_empty() {
                return Err(MapError::Topology(format!(
                    "land province {} has fleet edges",
                    p.code
                )));
            }
            for (coast, targets) in &p.fleet_adj {
                let from = Loc {
                    prov: p.code,
                    coast: *coast,
                };
                for to in targets {
                    let other = self.provinces.get(&to.prov).ok_or_else(|| {
                        MapError::Topology(format!("{} lists unknown {}", p.code, to))
                    })?;
                    if other.terrain == Terrain::Land {
                        return Err(MapError::Topology(format!(
                            "fleet edge {from}-{to} into land"
                        )));
                    }
                    if other.has_coasts() != to.coast.is_some() {
                        return Err(MapError::Topology(format!(
                            "fleet edge {from}-{to} coast mismatch"
                        )));
                    }
                    let back = other.fleet_adj.get(&to.coast).map(|v| v.contains(&from));
                    if back != Some(true) {
                        return Err(MapError::Asymmetric(format!("fleet {from}-{to}")));
                    }
                }
            }
        }
        for u in &self.start {
            let p = self
                .provinces
                .get(&u.loc.prov)
                .ok_or_else(|| MapError::Topology(format!("start unit in unknown {}", u.loc)))?;
            let ok = match u.kind {
                UnitKind::Army => p.terrain != Terrain::Sea && u.loc.coast.is_none(),
                UnitKind::Fleet => {
                    p.terrain != Terrain::Land && (p.has_coasts() == u.loc.coast.is_some())
                }
            };
            if !ok {
                return Err(MapError::Topology(format!(
                    "start unit {} {} misplaced",
                    u.kind, u.loc
                )));
            }
        }
        Ok(())
    }

    pub fn province(&self, p: Prov) -> Option<&Province> {
        self.provinces.get(&p)
    }

    /// Looks up a province that is known to exist.
    pub fn get(&self, p: Prov) -> &Province {
        self.provinces
            .get(&p)
            .unwrap_or_else(|| panic!("province {p} not on map {}", self.name))
    }

    pub fn provinces(&self) -> impl Iterator<Item = &Province> {
        self.provinces.values()
    }

    pub fn contains(&self, p: Prov) -> bool {
        self.provinces.contains_key(&p)
    }

    /// Resolves a code (`swe`) to a province on this map.
    pub fn prov(&self, code: &str) -> Result<Prov, UnknownProvince> {
        Prov::new(code)
            .filter(|p| self.provinces.contains_key(p))
            .ok_or_else(|| UnknownProvince(code.to_string()))
    }

    /// Resolves a location string, checking the province and coast against the map.
    pub fn loc(&self, s: &str) -> Result<Loc, UnknownProvince> {
        let loc = Loc::parse(s).ok_or_else(|| UnknownProvince(s.to_string()))?;
        let p = self
            .province(loc.prov)
            .ok_or_else(|| UnknownProvince(s.to_string()))?;
        match loc.coast {
            Some(c) if !p.coasts.contains(&c) => Err(UnknownProvince(s.to_string())),
            _ => Ok(loc),
        }
    }

    /// Full name or alias lookup, case-insensitive ("Sweden", "StP").
    pub fn resolve_name(&self, name: &str) -> Option<Prov> {
        let lower = name.trim().to_ascii_lowercase();
        self.names
            .iter()
            .find(|(n, _)| *n == lower)
            .map(|(_, p)| *p)
            .or_else(|| Prov::new(&lower).filter(|p| self.contains(*p)))
    }

    /// All names and aliases, lower-cased, longest first.
    pub fn names(&self) -> &[(String, Prov)] {
        &self.names
    }

    pub fn start_units(&self) -> &[StartUnit] {
        &self.start
    }

    pub fn supply_centers(&self) -> impl Iterator<Item = Prov> + '_ {
        self.provinces
            .values()
            .filter(|p| p.supply_center)
            .map(|p| p.code)
    }

    pub fn home_centers(&self, power: Power) -> impl Iterator<Item = Prov> + '_ {
        self.provinces
            .values()
            .filter(move |p| p.supply_center && p.home == Some(power))
            .map(|p| p.code)
    }

    pub fn terrain(&self, p: Prov) -> Option<Terrain> {
        self.province(p).map(|p| p.terrain)
    }

    pub fn army_adjacent(&self, a: Prov, b: Prov) -> bool {
        self.province(a).is_some_and(|p| p.army_adj.contains(&b))
    }

    /// Fleet-reachable locations from `from`. The coast on `from` must match
    /// the province's coast layout.
    pub fn fleet_destinations(&self, from: Loc) -> &[Loc] {
        self.province(from.prov)
            .and_then(|p| p.fleet_adj.get(&from.coast))
            .map(Vec::as_slice)
            .unwrap_or(&[])
    }

    pub fn fleet_adjacent(&self, from: Loc, to: Loc) -> bool {
        self.fleet_destinations(from).contains(&to)
    }

    /// Whether a fleet at `from` can reach any coast of `to`; the test used
    /// for support, where the destination coast is irrelevant.
    pub fn fleet_reaches(&self, from: Loc, to: Prov) -> bool {
        self.fleet_destinations(from).iter().any(|l| l.prov == to)
    }

    /// Whether a unit of `kind` standing at `from` can move to province `to`
    /// without a convoy.
    pub fn can_reach(&self, kind: UnitKind, from: Loc, to: Prov) -> bool {
        match kind {
            UnitKind::Army => self.army_adjacent(from.prov, to),
            UnitKind::Fleet => self.fleet_reaches(from, to),
        }
    }

    /// Whether any two provinces border each other for some unit type.
    pub fn touches(&self, a: Prov, b: Prov) -> bool {
        let Some(p) = self.province(a) else {
            return false;
        };
        p.army_adj.contains(&b) || p.fleet_adj.values().flatten().any(|l| l.prov == b)
    }

    /// Neighbours of `a` for any unit type, in code order.
    pub fn neighbors(&self, a: Prov) -> BTreeSet<Prov> {
        let mut out = BTreeSet::new();
        if let Some(p) = self.province(a) {
            out.extend(p.army_adj.iter().copied());
            out.extend(p.fleet_adj.values().flatten().map(|l| l.prov));
        }
        out
    }
}

fn tokenize(line: &str) -> Result<Vec<String>, String> {
    let mut out = Vec::new();
    let mut chars = line.chars().peekable();
    while let Some(&c) = chars.peek() {
        if c.is_whitespace() {
            chars.next();
            continue;
        }
        let mut tok = String::new();
        let mut quoted = false;
        while let Some(&c) = chars.peek() {
            if c == '"' {
                quoted = !quoted;
                chars.next();
                continue;
            }
            if c.is_whitespace() && !quoted {
                break;
            }
            tok.push(c);
            chars.next();
        }
        if quoted {
            return Err("unterminated quote".into());
        }
        out.push(tok);
    }
    if out.is_empty() {
        return Err("empty record".into());
    }
    Ok(out)
}
