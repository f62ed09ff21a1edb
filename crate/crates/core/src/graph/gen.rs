//! Seeded random graphs for property tests and benchmarks.

use rand::Rng;

use super::{IntentGraph, Target};

const CONCEPTS: &[&str] = &[
    "move-01",
    "unit",
    "province",
    "country",
    "name",
    "support-01",
];
const ROLES: &[&str] = &["ARG0", "ARG1", "ARG2", "location", "mod"];
const NAMES: &[&str] = &["Austria", "Brest", "Sweden", "Norway"];

/// A connected graph with 1..=`max_vars` nodes drawn from a small concept
/// pool (so alignments are ambiguous), a spanning tree from the root, the
/// odd re-entrant edge, and some constant attributes.
pub fn random_graph<R: Rng + ?Sized>(rng: &mut R, max_vars: usize) -> IntentGraph {
    let n = rng.random_range(1..=max_vars.max(1));
    let mut g = IntentGraph::empty();
    let mut vars: Vec<String> = Vec::with_capacity(n);
    for i in 0..n {
        let concept = CONCEPTS[rng.random_range(0..CONCEPTS.len())];
        let v = g.fresh_var(concept);
        g.add_node(&v, concept);
        if i > 0 {
            let parent = &vars[rng.random_range(0..i)];
            let role = ROLES[rng.random_range(0..ROLES.len())];
            g.add_edge(parent, role, Target::Var(v.clone()));
        }
        vars.push(v);
    }
    if n > 1 && rng.random_bool(0.3) {
        let a = rng.random_range(0..n);
        let b = (a + rng.random_range(1..n)) % n;
        let role = ROLES[rng.random_range(0..ROLES.len())];
        g.add_edge(&vars[a], role, Target::Var(vars[b].clone()));
    }
    for v in &vars {
        if rng.random_bool(0.35) {
            if rng.random_bool(0.8) {
                let name = NAMES[rng.random_range(0..NAMES.len())];
                g.add_edge(v, "op1", Target::Str(name.to_string()));
            } else {
                g.add_edge(v, "polarity", Target::Sym("-".to_string()));
            }
        }
    }
    g
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{isomorphic, parse_graph_text, serialize_graph, to_triples};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn generated_graphs_are_valid_and_round_trip() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..200 {
            let g = random_graph(&mut rng, 7);
            g.validate().unwrap();
            let text = serialize_graph(&g);
            let back = parse_graph_text(&text).unwrap();
            assert!(isomorphic(&g, &back), "{text}");
            assert_eq!(serialize_graph(&back), text);
            assert_eq!(to_triples(&g).len(), g.node_count() + g.edges().len() + 1);
        }
    }
}
