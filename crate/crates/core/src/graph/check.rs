//! Diplomacy vocabulary and the domain checker.

use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};

use super::IntentGraph;

/// Action and relation concepts sanctioned for Diplomacy graphs.
const ACTIONS: &[&str] = &[
    "agree-01",
    "ally-01",
    "attack-01",
    "betray-01",
    "build-01",
    "defend-01",
    "demilitarize-01",
    "disband-01",
    "expect-01",
    "fear-01",
    "gain-02",
    "have-03",
    "hold-01",
    "lie-08",
    "lose-02",
    "move-01",
    "possible-01",
    "prevent-01",
    "propose-01",
    "retreat-01",
    "support-01",
    "tell-01",
    "threaten-01",
    "transport-01",
    "warn-01",
];

/// Entity and structural concepts.
const ENTITIES: &[&str] = &[
    "and",
    "army",
    "country",
    "date-entity",
    "fleet",
    "name",
    "or",
    "person",
    "province",
    "sea",
    "supply-center",
    "thing",
    "unit",
];

const ROLES: &[&str] = &[
    "ARG0",
    "ARG1",
    "ARG2",
    "ARG3",
    "ARG4",
    "coast",
    "condition",
    "destination",
    "domain",
    "location",
    "mod",
    "mode",
    "name",
    "polarity",
    "poss",
    "purpose",
    "quant",
    "season",
    "source",
    "time",
    "year",
];

const DAIDE: &[(&str, &str)] = &[
    ("ally-01", "ALY"),
    ("build-01", "BLD"),
    ("demilitarize-01", "DMZ"),
    ("disband-01", "DSB"),
    ("hold-01", "HLD"),
    ("move-01", "MTO"),
    ("retreat-01", "RTO"),
    ("support-01", "SUP"),
    ("transport-01", "CVY"),
];

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Vocabulary {
    pub concepts: BTreeSet<&'static str>,
    pub roles: BTreeSet<&'static str>,
    pub daide_equivalents: BTreeMap<&'static str, &'static str>,
}

impl Vocabulary {
    pub fn diplomacy() -> Vocabulary {
        Vocabulary {
            concepts: ACTIONS.iter().chain(ENTITIES).copied().collect(),
            roles: ROLES.iter().copied().collect(),
            daide_equivalents: DAIDE.iter().copied().collect(),
        }
    }

    pub fn knows_concept(&self, c: &str) -> bool {
        self.concepts.contains(c)
    }

    /// `opN` roles are always allowed, as are `-of` inverses of known roles.
    pub fn knows_role(&self, r: &str) -> bool {
        let base = r.strip_suffix("-of").unwrap_or(r);
        self.roles.contains(base)
            || base
                .strip_prefix("op")
                .is_some_and(|n| n.parse::<u32>().is_ok())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Slot {
    UnitKind,
    UnitLocation,
    UnitNationality,
    AgreementObject,
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Underspecification {
    pub missing: BTreeSet<Slot>,
}

impl Underspecification {
    pub fn is_empty(&self) -> bool {
        self.missing.is_empty()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Severity {
    Error,
    Warning,
    /// Not wrong, but resolvable only from the game state.
    Underspecified,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GraphDiagnostic {
    pub severity: Severity,
    pub rule: String,
    pub var: String,
    pub message: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub slot: Option<Slot>,
}

fn diag(
    severity: Severity,
    rule: &str,
    var: &str,
    message: String,
    slot: Option<Slot>,
) -> GraphDiagnostic {
    GraphDiagnostic {
        severity,
        rule: rule.to_string(),
        var: var.to_string(),
        message,
        slot,
    }
}

/// Unit-valued argument positions of the action concepts.
fn unit_args(concept: &str) -> &'static [&'static str] {
    match concept {
        "move-01" | "retreat-01" | "hold-01" | "build-01" | "disband-01" => &["ARG1"],
        "support-01" => &["ARG0", "ARG1"],
        "transport-01" => &["ARG0", "ARG1"],
        _ => &[],
    }
}

fn is_unit(concept: &str) -> bool {
    matches!(concept, "unit" | "army" | "fleet")
}

/// Vocabulary violations, the build-01 location rule, and one
/// underspecified-severity entry per missing unit or agreement slot.
pub fn check_diplomacy_graph(g: &IntentGraph) -> Vec<GraphDiagnostic> {
    let vocab = Vocabulary::diplomacy();
    let mut out = Vec::new();
    for (v, c) in g.nodes() {
        if !vocab.knows_concept(c) {
            out.push(diag(
                Severity::Error,
                "unknown-concept",
                v,
                format!("unknown concept {c}"),
                None,
            ));
        }
    }
    for e in g.edges() {
        if !vocab.knows_role(&e.role) {
            out.push(diag(
                Severity::Warning,
                "unknown-role",
                &e.source,
                format!("unknown role :{}", e.role),
                None,
            ));
        }
    }
    for (v, c) in g.nodes() {
        match c {
            "move-01" | "retreat-01" if g.get(v, "ARG2").is_none() => out.push(diag(
                Severity::Underspecified,
                "move-destination",
                v,
                format!("{c} has no :ARG2 destination"),
                None,
            )),
            "agree-01" if g.get(v, "ARG1").is_none() => out.push(diag(
                Severity::Underspecified,
                "agreement-object",
                v,
                "agreement without an object".into(),
                Some(Slot::AgreementObject),
            )),
            _ => {}
        }
        for role in unit_args(c) {
            let Some(u) = g.child(v, role) else { continue };
            if !g.concept(u).is_some_and(is_unit) {
                continue;
            }
            if c == "build-01" && g.get(u, "location").is_some() {
                out.push(diag(
                    Severity::Error,
                    "build-location",
                    u,
                    "location must attach to build-01".into(),
                    None,
                ));
            }
            if g.concept(u) == Some("unit") {
                out.push(diag(
                    Severity::Underspecified,
                    "unit-kind",
                    u,
                    "unit kind not given".into(),
                    Some(Slot::UnitKind),
                ));
            }
            let located = if c == "build-01" {
                g.get(v, "location").is_some() || g.get(u, "location").is_some()
            } else {
                g.get(u, "location").is_some()
            };
            if !located {
                out.push(diag(
                    Severity::Underspecified,
                    "unit-location",
                    u,
                    "unit location not given".into(),
                    Some(Slot::UnitLocation),
                ));
            }
            if g.get(u, "mod").is_none() && g.get(u, "poss").is_none() {
                out.push(diag(
                    Severity::Underspecified,
                    "unit-nationality",
                    u,
                    "unit nationality not given".into(),
                    Some(Slot::UnitNationality),
                ));
            }
        }
    }
    out
}

pub fn underspecification(g: &IntentGraph) -> Underspecification {
    Underspecification {
        missing: check_diplomacy_graph(g)
            .into_iter()
            .filter_map(|d| d.slot)
            .collect(),
    }
}
