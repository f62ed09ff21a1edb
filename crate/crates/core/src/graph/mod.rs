//! Diplomacy-AMR intent graphs.

mod check;
mod gen;
mod penman;
mod triples;

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use serde::{Deserialize, Serialize};

pub use check::{
    check_diplomacy_graph, underspecification, GraphDiagnostic, Severity, Slot, Underspecification,
    Vocabulary,
};
pub use gen::random_graph;
pub use penman::{parse_graph_text, parse_graphs, serialize_graph};
pub use triples::{to_triples, Triple};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum GraphError {
    #[error("unbalanced graph text at offset {0}")]
    UnbalancedText(usize),
    #[error("variable {0} declared twice")]
    DuplicateVariable(String),
    #[error("reference to undeclared variable {0}")]
    DanglingReference(String),
    #[error("malformed graph text at offset {pos}: {msg}")]
    Malformed { pos: usize, msg: String },
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Target {
    Var(String),
    /// Quoted string constant, e.g. a name.
    Str(String),
    /// Bare symbol constant: `-`, `+`, numbers, `imperative`.
    Sym(String),
}

impl Target {
    pub fn as_var(&self) -> Option<&str> {
        match self {
            Target::Var(v) => Some(v),
            _ => None,
        }
    }

    /// Text of a constant, without quotes.
    pub fn constant(&self) -> Option<&str> {
        match self {
            Target::Str(s) | Target::Sym(s) => Some(s),
            Target::Var(_) => None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Edge {
    pub source: String,
    /// Role label without the leading colon, e.g. `ARG1`.
    pub role: String,
    pub target: Target,
}

/// Rooted, labelled, directed graph. The empty graph has no root and no
/// nodes, and prints as `()`.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct IntentGraph {
    root: Option<String>,
    /// Declaration order is kept so output is stable.
    nodes: Vec<(String, String)>,
    edges: Vec<Edge>,
}

impl IntentGraph {
    pub fn empty() -> IntentGraph {
        IntentGraph::default()
    }

    pub fn new(root: &str, concept: &str) -> IntentGraph {
        IntentGraph {
            root: Some(root.to_string()),
            nodes: vec![(root.to_string(), concept.to_string())],
            edges: Vec::new(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.root.is_none()
    }

    pub fn root(&self) -> Option<&str> {
        self.root.as_deref()
    }

    pub fn root_concept(&self) -> Option<&str> {
        self.root.as_deref().and_then(|r| self.concept(r))
    }

    pub fn nodes(&self) -> impl Iterator<Item = (&str, &str)> {
        self.nodes.iter().map(|(v, c)| (v.as_str(), c.as_str()))
    }

    pub fn node_count(&self) -> usize {
        self.nodes.len()
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn concept(&self, var: &str) -> Option<&str> {
        self.nodes
            .iter()
            .find(|(v, _)| v == var)
            .map(|(_, c)| c.as_str())
    }

    pub fn has_var(&self, var: &str) -> bool {
        self.concept(var).is_some()
    }

    /// Outgoing edges of `var`, in insertion order.
    pub fn out(&self, var: &str) -> impl Iterator<Item = &Edge> {
        let var = var.to_string();
        self.edges.iter().filter(move |e| e.source == var)
    }

    /// First target reached from `var` over `role`.
    pub fn get(&self, var: &str, role: &str) -> Option<&Target> {
        self.out(var).find(|e| e.role == role).map(|e| &e.target)
    }

    /// Variable reached from `var` over `role`, if that target is a node.
    pub fn child(&self, var: &str, role: &str) -> Option<&str> {
        self.out(var)
            .find(|e| e.role == role && matches!(e.target, Target::Var(_)))
            .and_then(|e| e.target.as_var())
    }

    /// Declares a node. Panics on a duplicate variable; use the text parser
    /// for untrusted input.
    pub fn add_node(&mut self, var: &str, concept: &str) {
        assert!(!self.has_var(var), "duplicate variable {var}");
        if self.root.is_none() {
            self.root = Some(var.to_string());
        }
        self.nodes.push((var.to_string(), concept.to_string()));
    }

    /// Adds an edge; an identical edge already present is not duplicated.
    pub fn add_edge(&mut self, source: &str, role: &str, target: Target) {
        let e = Edge {
            source: source.to_string(),
            role: role.trim_start_matches(':').to_string(),
            target,
        };
        if !self.edges.contains(&e) {
            self.edges.push(e);
        }
    }

    /// Adds a new child node under `parent` and returns its variable.
    pub fn add_child(&mut self, parent: &str, role: &str, concept: &str) -> String {
        let v = self.fresh_var(concept);
        self.add_node(&v, concept);
        self.add_edge(parent, role, Target::Var(v.clone()));
        v
    }

    /// Unused variable named after the concept's first letter.
    pub fn fresh_var(&self, concept: &str) -> String {
        let c = concept
            .chars()
            .find(|c| c.is_ascii_alphabetic())
            .map(|c| c.to_ascii_lowercase())
            .unwrap_or('x');
        if !self.has_var(&c.to_string()) {
            return c.to_string();
        }
        (2..)
            .map(|i| format!("{c}{i}"))
            .find(|v| !self.has_var(v))
            .unwrap()
    }

    /// `name :op1 ...` constant below `var` (province and country names).
    pub fn name_of(&self, var: &str) -> Option<String> {
        let n = self.child(var, "name")?;
        let mut parts: Vec<(u32, &str)> = self
            .out(n)
            .filter_map(|e| {
                let k = e.role.strip_prefix("op")?.parse().ok()?;
                Some((k, e.target.constant()?))
            })
            .collect();
        parts.sort();
        (!parts.is_empty()).then(|| parts.iter().map(|(_, s)| *s).collect::<Vec<_>>().join(" "))
    }

    /// Checks the structural invariants: unique variables, edges between
    /// declared nodes, every node reachable from the root.
    pub fn validate(&self) -> Result<(), GraphError> {
        let mut seen = BTreeSet::new();
        for (v, _) in &self.nodes {
            if !seen.insert(v.as_str()) {
                return Err(GraphError::DuplicateVariable(v.clone()));
            }
        }
        for e in &self.edges {
            if !seen.contains(e.source.as_str()) {
                return Err(GraphError::DanglingReference(e.source.clone()));
            }
            if let Target::Var(t) = &e.target {
                if !seen.contains(t.as_str()) {
                    return Err(GraphError::DanglingReference(t.clone()));
                }
            }
        }
        if let Some(r) = &self.root {
            let reach = self.reachable(r);
            if let Some((v, _)) = self.nodes.iter().find(|(v, _)| !reach.contains(v.as_str())) {
                return Err(GraphError::Malformed {
                    pos: 0,
                    msg: format!("{v} is not reachable from the root"),
                });
            }
        }
        Ok(())
    }

    fn reachable<'a>(&'a self, from: &'a str) -> BTreeSet<&'a str> {
        let mut seen = BTreeSet::from([from]);
        let mut stack = vec![from];
        while let Some(v) = stack.pop() {
            for e in self.edges.iter().filter(|e| e.source == v) {
                if let Target::Var(t) = &e.target {
                    if seen.insert(t.as_str()) {
                        stack.push(t.as_str());
                    }
                }
            }
        }
        seen
    }

    /// Same graph with variables renamed by `f`.
    pub fn rename(&self, f: impl Fn(&str) -> String) -> IntentGraph {
        IntentGraph {
            root: self.root.as_deref().map(&f),
            nodes: self.nodes.iter().map(|(v, c)| (f(v), c.clone())).collect(),
            edges: self
                .edges
                .iter()
                .map(|e| Edge {
                    source: f(&e.source),
                    role: e.role.clone(),
                    target: match &e.target {
                        Target::Var(t) => Target::Var(f(t)),
                        t => t.clone(),
                    },
                })
                .collect(),
        }
    }
}

impl fmt::Display for IntentGraph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&serialize_graph(self))
    }
}

/// Whether some bijection between variables maps `a` onto `b` exactly
/// (same root concept position, concepts, edges and constants).
pub fn isomorphic(a: &IntentGraph, b: &IntentGraph) -> bool {
    if a.is_empty() || b.is_empty() {
        return a.is_empty() && b.is_empty();
    }
    if a.node_count() != b.node_count() || a.edges.len() != b.edges.len() {
        return false;
    }
    let ta = to_triples(a);
    let tb = to_triples(b);
    if ta.len() != tb.len() {
        return false;
    }
    let avars: Vec<&str> = a.nodes().map(|(v, _)| v).collect();
    let signature = |g: &IntentGraph, v: &str| {
        let out = g.out(v).count();
        let inc = g
            .edges
            .iter()
            .filter(|e| e.target.as_var() == Some(v))
            .count();
        (
            g.concept(v).unwrap().to_string(),
            out,
            inc,
            g.root() == Some(v),
        )
    };
    let cands: Vec<Vec<&str>> = avars
        .iter()
        .map(|&v| {
            let s = signature(a, v);
            b.nodes()
                .map(|(w, _)| w)
                .filter(|&w| signature(b, w) == s)
                .collect()
        })
        .collect();
    let mut map: BTreeMap<&str, &str> = BTreeMap::new();
    let mut used: BTreeSet<&str> = BTreeSet::new();
    fn go<'g>(
        k: usize,
        avars: &[&'g str],
        cands: &[Vec<&'g str>],
        map: &mut BTreeMap<&'g str, &'g str>,
        used: &mut BTreeSet<&'g str>,
        a: &IntentGraph,
        tb: &BTreeSet<Triple>,
    ) -> bool {
        if k == avars.len() {
            let renamed = a.rename(|v| map[v].to_string());
            return to_triples(&renamed) == *tb;
        }
        for &w in &cands[k] {
            if used.insert(w) {
                map.insert(avars[k], w);
                if go(k + 1, avars, cands, map, used, a, tb) {
                    return true;
                }
                map.remove(avars[k]);
                used.remove(w);
            }
        }
        false
    }
    go(0, &avars, &cands, &mut map, &mut used, a, &tb)
}

/// Serde adapter writing a graph as its text form.
pub mod text {
    use serde::{Deserialize, Deserializer, Serializer};

    use super::{parse_graph_text, serialize_graph, IntentGraph};

    pub fn serialize<S: Serializer>(g: &IntentGraph, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&serialize_graph(g))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<IntentGraph, D::Error> {
        let t = String::deserialize(d)?;
        parse_graph_text(&t).map_err(serde::de::Error::custom)
    }
}

/// [`text`] for optional graphs.
pub mod text_opt {
    use serde::{Deserialize, Deserializer, Serializer};

    use super::{parse_graph_text, serialize_graph, IntentGraph};

    pub fn serialize<S: Serializer>(g: &Option<IntentGraph>, s: S) -> Result<S::Ok, S::Error> {
        match g {
            Some(g) => s.serialize_some(&serialize_graph(g)),
            None => s.serialize_none(),
        }
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Option<IntentGraph>, D::Error> {
        match Option::<String>::deserialize(d)? {
            Some(t) => parse_graph_text(&t)
                .map(Some)
                .map_err(serde::de::Error::custom),
            None => Ok(None),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn builder_fresh_vars() {
        let mut g = IntentGraph::new("m", "move-01");
        let u = g.add_child("m", "ARG1", "unit");
        let p = g.add_child("m", "ARG2", "province");
        let p2 = g.add_child(&u, "location", "province");
        assert_eq!((u.as_str(), p.as_str(), p2.as_str()), ("u", "p", "p2"));
        assert!(g.validate().is_ok());
        assert_eq!(g.child("m", "ARG1"), Some("u"));
    }

    #[test]
    fn unreachable_node_rejected() {
        let mut g = IntentGraph::new("m", "move-01");
        g.add_node("x", "unit");
        assert!(g.validate().is_err());
    }

    #[test]
    fn empty_differs_from_one_node() {
        assert_ne!(IntentGraph::empty(), IntentGraph::new("h", "hold-01"));
        assert!(!isomorphic(
            &IntentGraph::empty(),
            &IntentGraph::new("h", "hold-01")
        ));
        assert!(isomorphic(&IntentGraph::empty(), &IntentGraph::empty()));
    }
}
