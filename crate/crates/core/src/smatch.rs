//! Smatch: triple overlap between two graphs under the best variable
//! alignment, found by restarted hill climbing.

use std::collections::{BTreeMap, HashMap, HashSet};

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::graph::{to_triples, IntentGraph, Triple};

pub const DEFAULT_RESTARTS: usize = 4;
/// The exact search enumerates partial injections; beyond this many
/// variables per graph it is refused.
pub const EXACT_MAX_VARS: usize = 8;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum SmatchError {
    #[error("{pred} predicted graphs but {gold} gold graphs")]
    LengthMismatch { pred: usize, gold: usize },
    #[error("exact alignment limited to {EXACT_MAX_VARS} variables per graph, got {0}")]
    TooLarge(usize),
}

/// Partial injective map from variables of the first graph to variables of
/// the second, with the number of triples it matches.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct Alignment {
    pub mapping: BTreeMap<String, String>,
    pub score: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SmatchScore {
    pub precision: f64,
    pub recall: f64,
    pub f1: f64,
    pub matched: usize,
    pub pred_triples: usize,
    pub gold_triples: usize,
    pub best: Alignment,
}

fn prf(matched: usize, pred: usize, gold: usize) -> (f64, f64, f64) {
    if pred == 0 && gold == 0 {
        return (1.0, 1.0, 1.0);
    }
    let p = if pred == 0 {
        0.0
    } else {
        matched as f64 / pred as f64
    };
    let r = if gold == 0 {
        0.0
    } else {
        matched as f64 / gold as f64
    };
    let f = if p + r == 0.0 {
        0.0
    } else {
        2.0 * p * r / (p + r)
    };
    (p, r, f)
}

/// Triples with variables replaced by indices, for fast rescoring.
enum T {
    Inst(usize, String),
    Top(usize, String),
    Attr(usize, String, String),
    Rel(usize, String, usize),
}

struct Problem {
    a_vars: Vec<String>,
    b_vars: Vec<String>,
    a: Vec<T>,
    b: HashSet<(u8, usize, String, String)>,
    b_rel: HashSet<(usize, String, usize)>,
    a_concepts: Vec<String>,
    b_concepts: Vec<String>,
}

const NONE: usize = usize::MAX;

impl Problem {
    fn new(ga: &IntentGraph, gb: &IntentGraph) -> Problem {
        let a_vars: Vec<String> = ga.nodes().map(|(v, _)| v.to_string()).collect();
        let b_vars: Vec<String> = gb.nodes().map(|(v, _)| v.to_string()).collect();
        let ai: HashMap<&str, usize> = a_vars
            .iter()
            .enumerate()
            .map(|(i, v)| (v.as_str(), i))
            .collect();
        let bi: HashMap<&str, usize> = b_vars
            .iter()
            .enumerate()
            .map(|(i, v)| (v.as_str(), i))
            .collect();
        let a = to_triples(ga)
            .into_iter()
            .map(|t| match t {
                Triple::Instance { var, concept } => T::Inst(ai[var.as_str()], concept),
                Triple::Top { var, concept } => T::Top(ai[var.as_str()], concept),
                Triple::Attribute { var, role, value } => T::Attr(ai[var.as_str()], role, value),
                Triple::Relation {
                    source,
                    role,
                    target,
                } => T::Rel(ai[source.as_str()], role, ai[target.as_str()]),
            })
            .collect();
        let mut b = HashSet::new();
        let mut b_rel = HashSet::new();
        for t in to_triples(gb) {
            match t {
                Triple::Instance { var, concept } => {
                    b.insert((0, bi[var.as_str()], String::new(), concept));
                }
                Triple::Top { var, concept } => {
                    b.insert((1, bi[var.as_str()], String::new(), concept));
                }
                Triple::Attribute { var, role, value } => {
                    b.insert((2, bi[var.as_str()], role, value));
                }
                Triple::Relation {
                    source,
                    role,
                    target,
                } => {
                    b_rel.insert((bi[source.as_str()], role, bi[target.as_str()]));
                }
            }
        }
        Problem {
            a_vars,
            b_vars,
            a,
            b,
            b_rel,
            a_concepts: ga.nodes().map(|(_, c)| c.to_string()).collect(),
            b_concepts: gb.nodes().map(|(_, c)| c.to_string()).collect(),
        }
    }

    fn score(&self, m: &[usize]) -> usize {
        let mut n = 0;
        let mut key = (0u8, 0usize, String::new(), String::new());
        for t in &self.a {
            let hit = match t {
                T::Inst(v, c) | T::Top(v, c) => {
                    m[*v] != NONE && {
                        key.0 = if matches!(t, T::Inst(..)) { 0 } else { 1 };
                        key.1 = m[*v];
                        key.2.clear();
                        key.3.clone_from(c);
                        self.b.contains(&key)
                    }
                }
                T::Attr(v, r, val) => {
                    m[*v] != NONE && {
                        key.0 = 2;
                        key.1 = m[*v];
                        key.2.clone_from(r);
                        key.3.clone_from(val);
                        self.b.contains(&key)
                    }
                }
                T::Rel(s, r, d) => {
                    m[*s] != NONE
                        && m[*d] != NONE
                        && self.b_rel.contains(&(m[*s], r.clone(), m[*d]))
                }
            };
            n += usize::from(hit);
        }
        n
    }

    fn alignment(&self, m: &[usize], score: usize) -> Alignment {
        Alignment {
            mapping: m
                .iter()
                .enumerate()
                .filter(|(_, &j)| j != NONE)
                .map(|(i, &j)| (self.a_vars[i].clone(), self.b_vars[j].clone()))
                .collect(),
            score,
        }
    }

    fn greedy_init(&self) -> Vec<usize> {
        let mut used = vec![false; self.b_vars.len()];
        self.a_concepts
            .iter()
            .map(
                |c| match (0..self.b_vars.len()).find(|&j| !used[j] && &self.b_concepts[j] == c) {
                    Some(j) => {
                        used[j] = true;
                        j
                    }
                    None => NONE,
                },
            )
            .collect()
    }

    fn random_init<R: Rng + ?Sized>(&self, rng: &mut R) -> Vec<usize> {
        let mut m = vec![NONE; self.a_vars.len()];
        let mut free: Vec<usize> = (0..self.b_vars.len()).collect();
        free.shuffle(rng);
        let mut order: Vec<usize> = (0..self.a_vars.len()).collect();
        order.shuffle(rng);
        for i in order {
            // prefer a same-concept partner, as the greedy start does
            let same: Vec<usize> = free
                .iter()
                .copied()
                .filter(|&j| self.b_concepts[j] == self.a_concepts[i])
                .collect();
            let pick = if !same.is_empty() && rng.random_bool(0.5) {
                Some(same[rng.random_range(0..same.len())])
            } else if !free.is_empty() && rng.random_bool(0.8) {
                Some(free[rng.random_range(0..free.len())])
            } else {
                None
            };
            if let Some(j) = pick {
                free.retain(|&f| f != j);
                m[i] = j;
            }
        }
        m
    }

    /// Steepest ascent over single remaps (to a free target or to nothing)
    /// and pairwise swaps.
    fn climb(&self, mut m: Vec<usize>) -> (Vec<usize>, usize) {
        let mut best = self.score(&m);
        loop {
            let mut used = vec![false; self.b_vars.len()];
            for &j in m.iter().filter(|&&j| j != NONE) {
                used[j] = true;
            }
            let mut step: Option<(Vec<usize>, usize)> = None;
            let consider = |cand: Vec<usize>, step: &mut Option<(Vec<usize>, usize)>| {
                let s = self.score(&cand);
                if s > best && step.as_ref().is_none_or(|(_, b)| s > *b) {
                    *step = Some((cand, s));
                }
            };
            for i in 0..m.len() {
                for j in (0..self.b_vars.len()).filter(|&j| !used[j]).chain([NONE]) {
                    if m[i] != j {
                        let mut c = m.clone();
                        c[i] = j;
                        consider(c, &mut step);
                    }
                }
                for k in i + 1..m.len() {
                    if m[i] != m[k] {
                        let mut c = m.clone();
                        c.swap(i, k);
                        consider(c, &mut step);
                    }
                }
            }
            match step {
                Some((c, s)) => {
                    m = c;
                    best = s;
                }
                None => return (m, best),
            }
        }
    }
}

fn finish(
    p: &Problem,
    m: &[usize],
    matched: usize,
    ga: &IntentGraph,
    gb: &IntentGraph,
) -> SmatchScore {
    let (pt, gt) = (to_triples(ga).len(), to_triples(gb).len());
    let (precision, recall, f1) = prf(matched, pt, gt);
    SmatchScore {
        precision,
        recall,
        f1,
        matched,
        pred_triples: pt,
        gold_triples: gt,
        best: p.alignment(m, matched),
    }
}

/// Best of one concept-greedy start and `restarts` random starts.
pub fn smatch_score<R: Rng + ?Sized>(
    a: &IntentGraph,
    b: &IntentGraph,
    restarts: usize,
    rng: &mut R,
) -> SmatchScore {
    let p = Problem::new(a, b);
    let (mut best_m, mut best) = p.climb(p.greedy_init());
    for _ in 0..restarts {
        let (m, s) = p.climb(p.random_init(rng));
        if s > best {
            best = s;
            best_m = m;
        }
    }
    finish(&p, &best_m, best, a, b)
}

/// [`smatch_score`] with its own generator.
pub fn smatch_score_seeded(
    a: &IntentGraph,
    b: &IntentGraph,
    restarts: usize,
    seed: u64,
) -> SmatchScore {
    smatch_score(a, b, restarts, &mut ChaCha8Rng::seed_from_u64(seed))
}

/// Optimal alignment by enumerating every partial injection.
pub fn exact_smatch(a: &IntentGraph, b: &IntentGraph) -> Result<SmatchScore, SmatchError> {
    let n = a.node_count().max(b.node_count());
    if n > EXACT_MAX_VARS {
        return Err(SmatchError::TooLarge(n));
    }
    let p = Problem::new(a, b);
    let mut m = vec![NONE; p.a_vars.len()];
    let mut used = vec![false; p.b_vars.len()];
    let mut best = (p.score(&m), m.clone());
    fn go(
        p: &Problem,
        i: usize,
        m: &mut Vec<usize>,
        used: &mut Vec<bool>,
        best: &mut (usize, Vec<usize>),
    ) {
        if i == m.len() {
            let s = p.score(m);
            if s > best.0 {
                *best = (s, m.clone());
            }
            return;
        }
        m[i] = NONE;
        go(p, i + 1, m, used, best);
        for j in 0..used.len() {
            if !used[j] {
                used[j] = true;
                m[i] = j;
                go(p, i + 1, m, used, best);
                used[j] = false;
            }
        }
        m[i] = NONE;
    }
    go(&p, 0, &mut m, &mut used, &mut best);
    Ok(finish(&p, &best.1, best.0, a, b))
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CorpusScore {
    pub precision: f64,
    pub recall: f64,
    pub f1: f64,
    pub matched: usize,
    pub pred_triples: usize,
    pub gold_triples: usize,
    pub pairs: Vec<SmatchScore>,
}

/// Seed for pair `i`, independent of evaluation order.
pub fn pair_seed(root: u64, i: usize) -> u64 {
    let mut z = root
        ^ (i as u64)
            .wrapping_add(0x9e37_79b9_7f4a_7c15)
            .wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// Micro-averaged scores: matched and total triples are summed over pairs
/// before dividing. Pairs are scored in parallel.
pub fn corpus_smatch(
    pred: &[IntentGraph],
    gold: &[IntentGraph],
    restarts: usize,
    seed: u64,
) -> Result<CorpusScore, SmatchError> {
    if pred.len() != gold.len() {
        return Err(SmatchError::LengthMismatch {
            pred: pred.len(),
            gold: gold.len(),
        });
    }
    let pairs: Vec<SmatchScore> = pred
        .par_iter()
        .zip(gold.par_iter())
        .enumerate()
        .map(|(i, (p, g))| smatch_score_seeded(p, g, restarts, pair_seed(seed, i)))
        .collect();
    let matched = pairs.iter().map(|s| s.matched).sum();
    let pt = pairs.iter().map(|s| s.pred_triples).sum();
    let gt = pairs.iter().map(|s| s.gold_triples).sum();
    let (precision, recall, f1) = prf(matched, pt, gt);
    Ok(CorpusScore {
        precision,
        recall,
        f1,
        matched,
        pred_triples: pt,
        gold_triples: gt,
        pairs,
    })
}
