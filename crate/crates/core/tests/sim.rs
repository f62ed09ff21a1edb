use std::time::Instant;

use dipintent::detect::{scan_turn, EventKind};
use dipintent::game::Power;
use dipintent::message::ActKind;
use dipintent::sim::{
    run_batch, run_game, talk_counts, AgentConfig, BatchConfig, CommLevel, GameConfig, GameLog,
    DEFAULT_TURNS,
};

fn game(level: CommLevel, negotiator: AgentConfig) -> GameConfig {
    GameConfig::with_talkers(
        "t",
        &[Power::Eng, Power::Fra, Power::Ger],
        level,
        negotiator,
        AgentConfig::gunboat(),
    )
}

fn events(log: &GameLog) -> Vec<dipintent::detect::DetectionEvent> {
    let ledger = log.ledger();
    log.turns
        .iter()
        .flat_map(|t| {
            let acts: Vec<_> = t
                .messages
                .iter()
                .flat_map(|m| m.acts.iter().cloned())
                .collect();
            scan_turn(&acts, &ledger, t.turn).unwrap()
        })
        .collect()
}

#[test]
fn gunboat_game_is_silent() {
    let cfg = GameConfig::with_talkers(
        "g",
        &[],
        CommLevel::Gunboat,
        AgentConfig::negotiator(),
        AgentConfig::gunboat(),
    );
    let log = run_game(&cfg, 11).unwrap();
    assert_eq!(log.turns.len(), DEFAULT_TURNS as usize);
    for t in &log.turns {
        assert!(t.messages.is_empty());
        assert!(t.sc.values().sum::<usize>() <= 34);
    }
    assert!(log.summary.ends_with(". ()"));
}

#[test]
fn same_seed_same_log() {
    let cfg = game(CommLevel::NaturalLanguage, AgentConfig::negotiator());
    let a = serde_json::to_string(&run_game(&cfg, 5).unwrap()).unwrap();
    let b = serde_json::to_string(&run_game(&cfg, 5).unwrap()).unwrap();
    assert_eq!(a, b);
    let c = serde_json::to_string(&run_game(&cfg, 6).unwrap()).unwrap();
    assert_ne!(a, c);
}

#[test]
fn liars_break_every_grounded_commitment() {
    for level in [CommLevel::NaturalLanguage, CommLevel::AmrOnly] {
        let liar = AgentConfig {
            honesty: 0.0,
            persuadability: 1.0,
            ..AgentConfig::negotiator()
        };
        let log = run_game(&game(level, liar), 3).unwrap();
        let ev = events(&log);
        let bc: Vec<_> = ev
            .iter()
            .filter(|e| e.kind == EventKind::BrokenCommitment)
            .collect();
        assert!(bc.len() > 20, "{level}: {}", bc.len());
        assert!(bc.iter().all(|e| e.verdict), "{level}");
    }
}

#[test]
fn honest_agents_keep_their_word() {
    let saint = AgentConfig {
        honesty: 1.0,
        persuadability: 1.0,
        ..AgentConfig::negotiator()
    };
    let log = run_game(&game(CommLevel::NaturalLanguage, saint), 4).unwrap();
    let ev = events(&log);
    assert!(ev.iter().any(|e| e.kind == EventKind::BrokenCommitment));
    assert!(ev
        .iter()
        .filter(|e| e.kind == EventKind::BrokenCommitment)
        .all(|e| !e.verdict));
    // fully persuadable partners adopt what they are asked to do
    assert!(ev.iter().any(|e| e.kind == EventKind::PersuasionSuccess));
}

#[test]
fn every_talker_logs_intents_before_talking() {
    let log = run_game(&game(CommLevel::AmrOnly, AgentConfig::negotiator()), 9).unwrap();
    for t in &log.turns {
        for m in &t.messages {
            assert!(t.intents.contains_key(&m.message.sender));
            assert!(t.finals.contains_key(&m.message.sender));
        }
    }
    assert!(log.turns.iter().any(|t| t
        .messages
        .iter()
        .any(|m| m.acts.iter().any(|a| a.kind == ActKind::Proposal))));
}

#[test]
fn batch_shape_and_balance() {
    let cfg = BatchConfig {
        games_per_level: 7,
        levels: vec![CommLevel::RandomCorpus],
        turns: 2,
        ..BatchConfig::default()
    };
    let logs = run_batch(&cfg, 1).unwrap();
    assert_eq!(logs.len(), 7);
    assert!(talk_counts(&logs).values().all(|&n| n == 3));

    let cfg = BatchConfig {
        games_per_level: 2,
        turns: 2,
        ..BatchConfig::default()
    };
    let logs = run_batch(&cfg, 1).unwrap();
    assert_eq!(logs.len(), 6);
    for l in &logs {
        assert_eq!(l.talkers().len(), 3);
        assert!(CommLevel::TALKING.contains(&l.level()));
    }
}

#[test]
fn desk_scale_batch_is_quick() {
    let t = Instant::now();
    let logs = run_batch(&BatchConfig::default(), 2024).unwrap();
    let took = t.elapsed();
    assert_eq!(logs.len(), 30);
    let counts = talk_counts(&logs);
    let (lo, hi) = (
        counts.values().min().unwrap(),
        counts.values().max().unwrap(),
    );
    assert!(hi - lo <= 1, "{counts:?}");
    assert!(logs.iter().all(|l| l.turns.len() == DEFAULT_TURNS as usize));
    assert!(took.as_secs() < 300, "{took:?}");
}
