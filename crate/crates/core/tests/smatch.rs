use dipintent::graph::{parse_graph_text, random_graph, to_triples, IntentGraph, Target};
use dipintent::smatch::{corpus_smatch, exact_smatch, smatch_score_seeded, DEFAULT_RESTARTS};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn pair(seed: u64, max_vars: usize) -> (IntentGraph, IntentGraph) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (
        random_graph(&mut rng, max_vars),
        random_graph(&mut rng, max_vars),
    )
}

#[test]
fn hill_climbing_matches_exact_search() {
    let mut agree = 0;
    for seed in 0..100 {
        let (a, b) = pair(seed, 6);
        let hc = smatch_score_seeded(&a, &b, DEFAULT_RESTARTS, seed);
        let ex = exact_smatch(&a, &b).unwrap();
        assert!(hc.matched <= ex.matched, "seed {seed}");
        agree += usize::from(hc.matched == ex.matched);
    }
    assert!(agree >= 95, "{agree}/100");
}

#[test]
fn five_variable_pairs() {
    let mut agree = 0;
    for seed in 1000..1100 {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let a = loop {
            let g = random_graph(&mut rng, 5);
            if g.node_count() == 5 {
                break g;
            }
        };
        let b = loop {
            let g = random_graph(&mut rng, 5);
            if g.node_count() == 5 {
                break g;
            }
        };
        let hc = smatch_score_seeded(&a, &b, DEFAULT_RESTARTS, seed);
        let ex = exact_smatch(&a, &b).unwrap();
        assert!(hc.matched <= ex.matched);
        agree += usize::from(hc.matched == ex.matched);
    }
    assert!(agree >= 95, "{agree}/100");
}

#[test]
fn alignment_is_injective_and_bounded() {
    for seed in 0..50 {
        let (a, b) = pair(seed, 7);
        let s = smatch_score_seeded(&a, &b, 4, seed);
        let targets: std::collections::BTreeSet<_> = s.best.mapping.values().collect();
        assert_eq!(targets.len(), s.best.mapping.len());
        assert!(s.best.score <= to_triples(&a).len().min(to_triples(&b).len()));
    }
}

#[test]
fn identical_corpus_scores_one() {
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let gs: Vec<_> = (0..20).map(|_| random_graph(&mut rng, 7)).collect();
    let c = corpus_smatch(&gs, &gs, 4, 1).unwrap();
    assert_eq!(c.f1, 1.0);
}

#[test]
fn one_perfect_one_zero_pair() {
    let a = parse_graph_text("(m / move-01 :ARG1 (u / unit))").unwrap();
    let b = parse_graph_text("(x / ally-01 :ARG0 (c / country))").unwrap();
    let c = corpus_smatch(&[a.clone(), a.clone()], &[a, b], 4, 3).unwrap();
    assert!((c.f1 - 0.5).abs() < 1e-12);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn exact_matched_count_is_symmetric(seed in any::<u64>()) {
        let (a, b) = pair(seed, 6);
        prop_assert_eq!(exact_smatch(&a, &b).unwrap().matched, exact_smatch(&b, &a).unwrap().matched);
    }

    #[test]
    fn adding_a_shared_triple_never_lowers_the_optimum(seed in any::<u64>()) {
        let (a, b) = pair(seed, 5);
        let before = exact_smatch(&a, &b).unwrap().matched;
        let (mut a2, mut b2) = (a.clone(), b.clone());
        let ra = a.root().unwrap().to_string();
        let rb = b.root().unwrap().to_string();
        a2.add_edge(&ra, "quant", Target::Sym("7".into()));
        b2.add_edge(&rb, "quant", Target::Sym("7".into()));
        prop_assert!(exact_smatch(&a2, &b2).unwrap().matched >= before);
    }

    #[test]
    fn hill_climbing_is_a_lower_bound(seed in any::<u64>(), restarts in 1usize..6) {
        let (a, b) = pair(seed, 6);
        prop_assert!(smatch_score_seeded(&a, &b, restarts, seed).matched <= exact_smatch(&a, &b).unwrap().matched);
    }

    #[test]
    fn renaming_keeps_perfect_score(seed in any::<u64>()) {
        let (a, _) = pair(seed, 7);
        let b = a.rename(|v| format!("z{v}"));
        prop_assert_eq!(smatch_score_seeded(&a, &b, 4, seed).f1, 1.0);
    }
}
