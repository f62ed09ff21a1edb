//! Messages from earlier games, replayed at the random-message level.

use rand::seq::IndexedRandom;
use rand::Rng;
use serde::{Deserialize, Serialize};

use super::SimError;
use crate::game::Power;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CorpusRecord {
    pub sender: Power,
    pub recipient: Power,
    pub year: u16,
    pub text: String,
}

/// How far the match had to be relaxed to find a record.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Widening {
    Exact,
    AnyYear,
    Any,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Sampled<'a> {
    pub record: &'a CorpusRecord,
    pub widening: Widening,
}

const BUNDLED: &str = include_str!("../../data/random_corpus.jsonl");

/// Small corpus shipped with the crate: chit-chat and some order talk for
/// every dyad and year 1901-1908.
pub fn bundled_corpus() -> Vec<CorpusRecord> {
    BUNDLED
        .lines()
        .filter(|l| !l.trim().is_empty())
        .map(|l| serde_json::from_str(l).expect("bundled corpus is valid"))
        .collect()
}

/// Uniform draw over records with the same sender, recipient and year,
/// widening to any year and then to any record.
pub fn sample_random_message<'a, R: Rng + ?Sized>(
    corpus: &'a [CorpusRecord],
    sender: Power,
    recipient: Power,
    year: u16,
    rng: &mut R,
) -> Result<Sampled<'a>, SimError> {
    if corpus.is_empty() {
        return Err(SimError::EmptyCorpus);
    }
    let dyad = |r: &&CorpusRecord| r.sender == sender && r.recipient == recipient;
    let exact: Vec<&CorpusRecord> = corpus
        .iter()
        .filter(dyad)
        .filter(|r| r.year == year)
        .collect();
    if let Some(r) = exact.choose(rng) {
        return Ok(Sampled {
            record: r,
            widening: Widening::Exact,
        });
    }
    let pair: Vec<&CorpusRecord> = corpus.iter().filter(dyad).collect();
    if let Some(r) = pair.choose(rng) {
        return Ok(Sampled {
            record: r,
            widening: Widening::AnyYear,
        });
    }
    Ok(Sampled {
        record: corpus.choose(rng).unwrap(),
        widening: Widening::Any,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn rec(s: Power, r: Power, year: u16, text: &str) -> CorpusRecord {
        CorpusRecord {
            sender: s,
            recipient: r,
            year,
            text: text.into(),
        }
    }

    #[test]
    fn widening_steps() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let c = vec![
            rec(Power::Eng, Power::Fra, 1901, "a"),
            rec(Power::Ger, Power::Rus, 1902, "b"),
        ];
        let s = sample_random_message(&c, Power::Eng, Power::Fra, 1901, &mut rng).unwrap();
        assert_eq!((s.record.text.as_str(), s.widening), ("a", Widening::Exact));
        let s = sample_random_message(&c, Power::Eng, Power::Fra, 1905, &mut rng).unwrap();
        assert_eq!(
            (s.record.text.as_str(), s.widening),
            ("a", Widening::AnyYear)
        );
        let s = sample_random_message(&c, Power::Tur, Power::Ita, 1901, &mut rng).unwrap();
        assert_eq!(s.widening, Widening::Any);
        assert_eq!(
            sample_random_message(&[], Power::Tur, Power::Ita, 1901, &mut rng),
            Err(SimError::EmptyCorpus)
        );
    }

    #[test]
    fn draws_are_uniform() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let c = vec![
            rec(Power::Eng, Power::Fra, 1901, "0"),
            rec(Power::Eng, Power::Fra, 1901, "1"),
            rec(Power::Eng, Power::Fra, 1901, "2"),
            rec(Power::Eng, Power::Fra, 1902, "x"),
        ];
        let n = 10_000;
        let mut counts = [0usize; 3];
        for _ in 0..n {
            let s = sample_random_message(&c, Power::Eng, Power::Fra, 1901, &mut rng).unwrap();
            counts[s.record.text.parse::<usize>().unwrap()] += 1;
        }
        // chi-square with 2 degrees of freedom, 99.9% point
        let e = n as f64 / 3.0;
        let chi2: f64 = counts.iter().map(|&k| (k as f64 - e).powi(2) / e).sum();
        assert!(chi2 < 13.82, "{counts:?}");
    }

    #[test]
    fn bundled_covers_every_dyad() {
        let c = bundled_corpus();
        for s in Power::ALL {
            for r in Power::ALL.into_iter().filter(|&r| r != s) {
                assert!(c.iter().any(|x| x.sender == s && x.recipient == r));
            }
        }
    }
}
