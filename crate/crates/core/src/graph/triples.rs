//! Triple view used by graph matching.

use std::collections::BTreeSet;

use serde::Serialize;

use super::{IntentGraph, Target};

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum Triple {
    /// `(var, instance, concept)`
    Instance { var: String, concept: String },
    /// `(root, TOP, concept)`
    Top { var: String, concept: String },
    /// `(var, role, constant)`
    Attribute {
        var: String,
        role: String,
        value: String,
    },
    /// `(source, role, target)`
    Relation {
        source: String,
        role: String,
        target: String,
    },
}

impl Triple {
    /// Variables the triple mentions.
    pub fn vars(&self) -> Vec<&str> {
        match self {
            Triple::Instance { var, .. }
            | Triple::Top { var, .. }
            | Triple::Attribute { var, .. } => vec![var],
            Triple::Relation { source, target, .. } => vec![source, target],
        }
    }
}

/// One instance triple per node, one triple per edge, plus the TOP triple.
/// The empty graph has no triples.
pub fn to_triples(g: &IntentGraph) -> BTreeSet<Triple> {
    let mut out = BTreeSet::new();
    let Some(root) = g.root() else { return out };
    for (v, c) in g.nodes() {
        out.insert(Triple::Instance {
            var: v.to_string(),
            concept: c.to_string(),
        });
    }
    out.insert(Triple::Top {
        var: root.to_string(),
        concept: g.concept(root).unwrap_or_default().to_string(),
    });
    for e in g.edges() {
        out.insert(match &e.target {
            Target::Var(t) => Triple::Relation {
                source: e.source.clone(),
                role: e.role.clone(),
                target: t.clone(),
            },
            Target::Str(s) | Target::Sym(s) => Triple::Attribute {
                var: e.source.clone(),
                role: e.role.clone(),
                value: s.clone(),
            },
        });
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::parse_graph_text;

    #[test]
    fn one_node() {
        let t = to_triples(&parse_graph_text("(h / hold-03)").unwrap());
        assert_eq!(t.len(), 2);
        assert!(t.contains(&Triple::Top {
            var: "h".into(),
            concept: "hold-03".into()
        }));
    }

    #[test]
    fn figure_a1_count() {
        let g = parse_graph_text(
            r#"(m / move-01 :ARG1 (u / unit :mod (c2 / country :name (n2 / name :op1 "Austria")))
                :ARG2 (p2 / province :name (n3 / name :op1 "Brest")))"#,
        )
        .unwrap();
        // six nodes, seven edges, one TOP
        assert_eq!(to_triples(&g).len(), 14);
        assert_eq!(to_triples(&g).len(), g.node_count() + g.edges().len() + 1);
    }

    #[test]
    fn empty_graph_has_none() {
        assert!(to_triples(&IntentGraph::empty()).is_empty());
    }
}
