mod common;

use std::collections::BTreeMap;

use dipintent::analytics::{
    f_by_turn, ols_fit, parse_summaries_csv, regress, regression_design, report, summaries_csv,
    AnalyticsError, Class, GameRow, Guess, Rate, ReportInput, SeKind,
};
use dipintent::game::{Power, Season, Turn};
use dipintent::io::parse_csv;
use dipintent::sim::{run_batch, BatchConfig, CommLevel};
use nalgebra::{DMatrix, DVector};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};

fn names(p: usize) -> Vec<String> {
    (0..p).map(|j| format!("x{j}")).collect()
}

#[test]
fn noiseless_line_recovered() {
    let xs: Vec<f64> = (0..12).map(|i| f64::from(i) * 0.7 - 3.0).collect();
    let x = DMatrix::from_fn(xs.len(), 2, |i, j| if j == 0 { 1.0 } else { xs[i] });
    let y = DVector::from_iterator(xs.len(), xs.iter().map(|v| 2.0 * v - 1.0));
    let fit = ols_fit(&x, &y, &names(2), SeKind::Classical).unwrap();
    assert!((fit.coefficients[0].estimate + 1.0).abs() < 1e-9);
    assert!((fit.coefficients[1].estimate - 2.0).abs() < 1e-9);
    assert!(fit.coefficients.iter().all(|c| c.se < 1e-6));
}

#[test]
fn coverage_is_about_95_percent() {
    let beta = [1.5, -0.7, 3.0];
    let noise = Normal::new(0.0, 2.0).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(95);
    let mut covered = [0u32; 3];
    for _ in 0..100 {
        let n = 40;
        let x = DMatrix::from_fn(n, 3, |_, j| {
            if j == 0 {
                1.0
            } else {
                rng.random_range(-2.0..2.0)
            }
        });
        let y = DVector::from_fn(n, |i, _| {
            (0..3).map(|j| x[(i, j)] * beta[j]).sum::<f64>() + noise.sample(&mut rng)
        });
        let fit = ols_fit(&x, &y, &names(3), SeKind::Classical).unwrap();
        for j in 0..3 {
            covered[j] += u32::from(fit.coefficients[j].covers(beta[j]));
        }
    }
    // binomial(100, 0.95) has sd 2.18
    for c in covered {
        assert!((88..=100).contains(&c), "{covered:?}");
    }
}

#[test]
fn dependent_columns_rejected() {
    let x = DMatrix::from_fn(10, 3, |i, j| match j {
        0 => 1.0,
        1 => i as f64,
        _ => 2.0 * i as f64 + 1.0,
    });
    let y = DVector::from_fn(10, |i, _| i as f64);
    assert!(matches!(
        ols_fit(&x, &y, &names(3), SeKind::Classical),
        Err(AnalyticsError::RankDeficient { rank: 2, cols: 3 })
    ));
    let x = DMatrix::from_element(4, 3, 1.0);
    assert!(matches!(
        ols_fit(&x, &DVector::zeros(4), &names(3), SeKind::Classical),
        Err(AnalyticsError::TooFewRows { .. })
    ));
}

#[test]
fn robust_errors_widen_under_heteroskedasticity() {
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let n = 400;
    let x = DMatrix::from_fn(n, 2, |i, j| if j == 0 { 1.0 } else { i as f64 / n as f64 });
    let y = DVector::from_fn(n, |i, _| {
        let s = 0.1 + 4.0 * x[(i, 1)].powi(2);
        x[(i, 1)] + Normal::new(0.0, s).unwrap().sample(&mut rng)
    });
    let c = ols_fit(&x, &y, &names(2), SeKind::Classical).unwrap();
    let r = ols_fit(&x, &y, &names(2), SeKind::Robust).unwrap();
    assert_eq!(c.estimates(), r.estimates());
    assert!(r.coefficients[1].se > c.coefficients[1].se);
}

proptest! {
    #[test]
    fn residuals_orthogonal_to_columns(seed in any::<u64>(), n in 8usize..40, p in 1usize..5) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        prop_assume!(n >= p + 2);
        let x = DMatrix::from_fn(n, p, |_, j| if j == 0 { 1.0 } else { rng.random_range(-5.0..5.0) });
        let y = DVector::from_fn(n, |_, _| rng.random_range(-10.0..10.0));
        let fit = ols_fit(&x, &y, &names(p), SeKind::Classical).unwrap();
        let r = DVector::from_vec(fit.residuals.clone());
        for j in 0..p {
            prop_assert!(x.column(j).dot(&r).abs() < 1e-8);
        }
        for c in &fit.coefficients {
            prop_assert!(c.ci_low <= c.estimate && c.estimate <= c.ci_high);
        }
    }
}

fn fra_fixture() -> Vec<GameRow> {
    let text =
        std::fs::read_to_string(common::cases::fixtures_dir().join("summaries_fra.csv")).unwrap();
    parse_summaries_csv(&text).unwrap()
}

#[test]
fn injected_france_effect_recovered() {
    let games = fra_fixture();
    assert_eq!(games.len(), 180);
    let d = regression_design(&games);
    assert_eq!(d.x.shape(), (7 * 180, 6 + 3));
    let fit = regress(&games, SeKind::Classical).unwrap();
    let fra = fit.get("FRA").unwrap();
    assert!(fra.covers(2.8), "{fra:?}");
    assert!(fit.get("RUS").is_none() && fit.get("random_corpus").is_none());
    assert!(fit.get("natural_language").is_some() && fit.get("amr_only").is_some());
}

#[test]
fn summary_csv_round_trip() {
    let games = fra_fixture();
    assert_eq!(parse_summaries_csv(&summaries_csv(&games)).unwrap(), games);
}

#[test]
fn level_dummies_only_for_talkers() {
    let g = GameRow::from_summary(
        "g",
        CommLevel::AmrOnly,
        "AUS 3, ENG 4, FRA 5, GER 6, ITA 7, RUS 8, TUR 1. (ENG FRA)",
    )
    .unwrap();
    let d = regression_design(&[g]);
    let col = d.terms.iter().position(|t| t == "amr_only").unwrap();
    let on: Vec<Power> = d
        .rows
        .iter()
        .enumerate()
        .filter(|(i, _)| d.x[(*i, col)] == 1.0)
        .map(|(_, r)| r.1)
        .collect();
    assert_eq!(on, vec![Power::Eng, Power::Fra]);
}

#[test]
fn reported_rates() {
    let cases = [
        (1005, 6960, 14.4),
        (162, 2276, 7.1),
        (273, 7395, 3.7),
        (45, 7395, 0.6),
        (63, 5151, 1.2),
        (35, 2276, 1.5),
        (53, 6960, 0.76),
        (77, 13319, 0.57),
    ];
    for (a, b, pct) in cases {
        assert!((Rate::new(a, b).percent() - pct).abs() < 0.05, "{a}/{b}");
    }
}

fn guess(game: &str, annotator: Power, target: Power, turn: Turn, g: Class) -> Guess {
    Guess {
        game_id: game.into(),
        annotator,
        target,
        turn,
        guess: g,
    }
}

#[test]
fn identity_f_scores() {
    let truth: BTreeMap<(String, Power), Class> = Power::ALL
        .into_iter()
        .map(|p| {
            (
                ("g".to_string(), p),
                if p == Power::Fra {
                    Class::Agent
                } else {
                    Class::Human
                },
            )
        })
        .collect();
    let turns: Vec<Turn> = (0..6).map(Turn::from_movement_index).collect();
    let perfect: Vec<Guess> = turns
        .iter()
        .flat_map(|&t| {
            let truth = &truth;
            Power::ALL
                .into_iter()
                .filter(|&p| p != Power::Eng)
                .map(move |p| guess("g", Power::Eng, p, t, truth[&("g".to_string(), p)]))
        })
        .collect();
    assert!(f_by_turn(&perfect, &truth, None).iter().all(|s| s.f == 1.0));
    let human: Vec<Guess> = perfect
        .iter()
        .cloned()
        .map(|g| Guess {
            guess: Class::Human,
            ..g
        })
        .collect();
    let s = f_by_turn(&human, &truth, Some(0.75));
    assert!(s.iter().all(|s| s.f == 0.0 && s.smoothed == Some(0.0)));
    assert_eq!(s.len(), 6);
    assert_eq!(s[1].turn, Turn::movement(1901, Season::Fall));
}

#[test]
fn f_ignores_game_names() {
    let truth = BTreeMap::from([
        (("a".to_string(), Power::Tur), Class::Agent),
        (("a".to_string(), Power::Ita), Class::Human),
    ]);
    let g = vec![
        guess("a", Power::Aus, Power::Tur, Turn::FIRST, Class::Agent),
        guess("a", Power::Aus, Power::Ita, Turn::FIRST, Class::Agent),
    ];
    let renamed_truth: BTreeMap<_, _> = truth
        .iter()
        .map(|((_, p), c)| (("z".to_string(), *p), *c))
        .collect();
    let renamed: Vec<Guess> = g
        .iter()
        .map(|x| Guess {
            game_id: "z".into(),
            ..x.clone()
        })
        .collect();
    assert_eq!(
        f_by_turn(&g, &truth, None),
        f_by_turn(&renamed, &renamed_truth, None)
    );
}

#[test]
fn empty_batch_gives_headers_only() {
    let dir = tempfile::tempdir().unwrap();
    let s = report(
        &ReportInput {
            logs: &[],
            events: &[],
            fit: None,
        },
        dir.path(),
    )
    .unwrap();
    for f in s
        .files
        .iter()
        .filter(|f| f.extension().is_some_and(|e| e == "csv"))
    {
        let (header, rows) = parse_csv(&std::fs::read_to_string(f).unwrap()).unwrap();
        assert!(!header.is_empty() && rows.is_empty(), "{}", f.display());
    }
}

#[test]
fn report_is_deterministic_and_checked() {
    let cfg = BatchConfig {
        games_per_level: 2,
        turns: 3,
        ..BatchConfig::default()
    };
    let logs = run_batch(&cfg, 3).unwrap();
    let events: Vec<_> = logs
        .iter()
        .flat_map(|l| {
            l.events()
                .unwrap()
                .into_iter()
                .map(|event| dipintent::io::GameEvent {
                    game_id: l.game_id.clone(),
                    event,
                })
        })
        .collect();
    let rows: Vec<GameRow> = logs.iter().map(GameRow::from_log).collect();
    let fit = regress(&rows, SeKind::Classical).unwrap();
    let input = ReportInput {
        logs: &logs,
        events: &events,
        fit: Some(&fit),
    };
    let (a, b) = (tempfile::tempdir().unwrap(), tempfile::tempdir().unwrap());
    let sa = report(&input, a.path()).unwrap();
    report(&input, b.path()).unwrap();
    for f in &sa.files {
        let name = f.file_name().unwrap();
        assert_eq!(
            std::fs::read(f).unwrap(),
            std::fs::read(b.path().join(name)).unwrap()
        );
    }
    let (_, coef) =
        parse_csv(&std::fs::read_to_string(a.path().join("coefficients.csv")).unwrap()).unwrap();
    assert_eq!(coef.len(), 9);

    let mut bad = events.clone();
    if let Some(e) = bad.first_mut() {
        e.game_id = "nope".into();
        let r = report(
            &ReportInput {
                logs: &logs,
                events: &bad,
                fit: None,
            },
            a.path(),
        );
        assert!(matches!(r, Err(AnalyticsError::SchemaMismatch(_))));
    }
    let r = report(
        &ReportInput {
            logs: &logs[..1],
            events: &[],
            fit: Some(&fit),
        },
        a.path(),
    );
    assert!(matches!(r, Err(AnalyticsError::SchemaMismatch(_))));
}
