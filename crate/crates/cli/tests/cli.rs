use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;

fn fixtures() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../fixtures")
}

fn run(args: &[&str], env_out: Option<&Path>) -> Output {
    let mut c = Command::new(env!("CARGO_BIN_EXE_dipintent"));
    c.args(args).env_remove("DIPINTENT_OUT");
    if let Some(root) = env_out {
        c.env("DIPINTENT_OUT", root);
    }
    c.output().unwrap()
}

fn ok(args: &[&str]) -> String {
    let out = run(args, None);
    assert!(
        out.status.success(),
        "{args:?}: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    String::from_utf8(out.stdout).unwrap()
}

fn json_lines(text: &str) -> Vec<Value> {
    text.lines()
        .map(|l| serde_json::from_str(l).unwrap())
        .collect()
}

/// Exit status and the parsed single-line error.
fn failure(args: &[&str]) -> (i32, Value) {
    let out = run(args, None);
    assert!(!out.status.success(), "{args:?} succeeded");
    let err = String::from_utf8(out.stderr).unwrap();
    assert_eq!(err.lines().count(), 1, "{err}");
    (
        out.status.code().unwrap(),
        serde_json::from_str(&err).unwrap(),
    )
}

fn p(path: &Path) -> &str {
    path.to_str().unwrap()
}

#[test]
fn detect_skagerrak() {
    let f = fixtures().join("skagerrak.jsonl");
    let lines = json_lines(&ok(&["detect", "--in", p(&f)]));
    assert_eq!(lines[0]["kind"], "events");
    assert_eq!(lines[0]["schema_version"], "1.0");
    let hits = |kind: &str| {
        lines
            .iter()
            .filter(|e| e["kind"] == kind && e["verdict"] == true)
            .collect::<Vec<_>>()
    };
    let bc = hits("broken_commitment");
    assert_eq!(bc.len(), 1);
    assert_eq!(
        (&bc[0]["sender"], &bc[0]["recipient"]),
        (&Value::from("GER"), &Value::from("ENG"))
    );
    assert_eq!(bc[0]["evidence"]["final"], "F SKA - NWY");
    let won = hits("persuasion_success");
    assert_eq!(won.len(), 1);
    assert_eq!(won[0]["game_id"], "skagerrak-sweden");
}

#[test]
fn simulate_stats_report() {
    let dir = tempfile::tempdir().unwrap();
    let batch = dir.path().join("b");
    let stdout = ok(&[
        "simulate",
        "--seed",
        "3",
        "--games",
        "4",
        "--turns",
        "3",
        "--out",
        p(&batch),
    ]);
    assert_eq!(stdout.lines().count(), 12);
    for f in ["games.jsonl", "summaries.csv", "batch.json"] {
        assert!(batch.join(f).exists(), "{f}");
    }

    let stats = dir.path().join("s");
    ok(&[
        "stats",
        "--in",
        p(&batch),
        "--regression",
        "--out",
        p(&stats),
    ]);
    let coef = std::fs::read_to_string(stats.join("coefficients.csv")).unwrap();
    let mut lines = coef.lines();
    assert_eq!(lines.next(), Some("# schema_version=1.0"));
    assert_eq!(lines.next(), Some("term,estimate,se,ci_low,ci_high,df"));
    let terms: Vec<&str> = lines.map(|l| l.split(',').next().unwrap()).collect();
    assert_eq!(
        terms,
        [
            "intercept",
            "AUS",
            "ENG",
            "FRA",
            "GER",
            "ITA",
            "TUR",
            "natural_language",
            "amr_only"
        ]
    );

    // the summaries file alone gives the same fit
    let again = dir.path().join("s2");
    ok(&[
        "stats",
        "--in",
        p(&batch.join("summaries.csv")),
        "--regression",
        "--out",
        p(&again),
    ]);
    assert_eq!(
        coef,
        std::fs::read_to_string(again.join("coefficients.csv")).unwrap()
    );

    let events = dir.path().join("events.jsonl");
    ok(&["detect", "--in", p(&batch), "--out", p(&events)]);
    let rep = dir.path().join("r");
    let text = ok(&[
        "report",
        "--in",
        p(&batch),
        "--events",
        p(&events),
        "--out",
        p(&rep),
    ]);
    assert!(text.starts_with("schema_version: 1.0"));
    for f in [
        "sc.csv",
        "levels.csv",
        "events.csv",
        "rates.csv",
        "persuasion.csv",
        "coefficients.csv",
        "summary.txt",
    ] {
        assert!(rep.join(f).exists(), "{f}");
    }
    assert_eq!(
        coef,
        std::fs::read_to_string(rep.join("coefficients.csv")).unwrap()
    );
}

#[test]
fn same_seed_same_bytes() {
    let dir = tempfile::tempdir().unwrap();
    let (a, b) = (dir.path().join("a"), dir.path().join("b"));
    for d in [&a, &b] {
        ok(&[
            "simulate",
            "--seed",
            "11",
            "--games",
            "2",
            "--turns",
            "2",
            "--levels",
            "natural_language",
            "--out",
            p(d),
        ]);
    }
    for f in ["games.jsonl", "summaries.csv"] {
        assert_eq!(
            std::fs::read(a.join(f)).unwrap(),
            std::fs::read(b.join(f)).unwrap(),
            "{f}"
        );
    }
}

#[test]
fn output_root_from_environment() {
    let dir = tempfile::tempdir().unwrap();
    let out = run(
        &[
            "simulate", "--seed", "1", "--games", "1", "--turns", "1", "--levels", "gunboat",
            "--out", "rel",
        ],
        Some(dir.path()),
    );
    assert!(out.status.success());
    assert!(dir.path().join("rel/games.jsonl").exists());
    assert!(!Path::new("rel").exists());
}

#[test]
fn config_file_supplies_defaults() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("run.toml");
    std::fs::write(
        &cfg,
        "seed = 5\nout = \"batch\"\ngames_per_level = 1\nlevels = [\"amr_only\"]\nturns = 2\n",
    )
    .unwrap();
    let text = ok(&["--config", p(&cfg), "simulate"]);
    assert_eq!(text.lines().count(), 1);
    assert!(text.starts_with("amr_only-000\tamr_only\t"));
    assert!(dir.path().join("batch/games.jsonl").exists());
}

#[test]
fn config_corpora_feed_the_random_level() {
    let dir = tempfile::tempdir().unwrap();
    let corpus = dir.path().join("talk.jsonl");
    let mut lines = vec!["{\"schema_version\":\"1.0\",\"kind\":\"corpus\"}".to_string()];
    let powers = ["AUS", "ENG", "FRA", "GER", "ITA", "RUS", "TUR"];
    for (i, s) in powers.iter().enumerate() {
        for r in powers.iter().filter(|r| *r != s) {
            lines.push(format!(
                "{{\"type\":\"message\",\"id\":\"{s}{r}{i}\",\"game_id\":\"old\",\"turn\":\"S1901M\",\"sender\":\"{s}\",\"recipient\":\"{r}\",\"text\":\"zebra crossing\"}}"
            ));
        }
    }
    std::fs::write(&corpus, lines.join("\n")).unwrap();
    let cfg = dir.path().join("run.toml");
    std::fs::write(&cfg, "seed = 2\nout = \"b\"\ncorpora = [\"talk.jsonl\"]\ngames_per_level = 1\nlevels = [\"random_corpus\"]\nturns = 2\n").unwrap();
    ok(&["--config", p(&cfg), "simulate"]);
    let log = std::fs::read_to_string(dir.path().join("b/games.jsonl")).unwrap();
    let game: Value = serde_json::from_str(log.lines().nth(1).unwrap()).unwrap();
    let texts: Vec<&str> = game["turns"]
        .as_array()
        .unwrap()
        .iter()
        .flat_map(|t| t["messages"].as_array().unwrap())
        .map(|m| m["text"].as_str().unwrap())
        .collect();
    assert!(!texts.is_empty());
    assert!(texts.iter().all(|t| *t == "zebra crossing"), "{texts:?}");
}

#[test]
fn parse_leaves_orders_ungrounded() {
    let args = [
        "--text",
        "I will move A PAR - BUR",
        "--sender",
        "FRA",
        "--recipient",
        "GER",
    ];
    let parsed = json_lines(&ok(&[&["parse"], &args[..]].concat()));
    let grounded = json_lines(&ok(&[&["ground"], &args[..]].concat()));
    assert_eq!(parsed[0]["kind"], "acts");
    assert_eq!(parsed[1]["grounded"], Value::Array(vec![]));
    assert_eq!(
        grounded[1]["grounded"],
        Value::Array(vec!["A PAR - BUR".into()])
    );
    assert_eq!(parsed[1]["graph"], grounded[1]["graph"]);
}

#[test]
fn corpus_stats_tables() {
    let dir = tempfile::tempdir().unwrap();
    let f = fixtures().join("limitations.jsonl");
    let line = ok(&["stats", "--in", p(&f), "--out", p(dir.path())]);
    let v: Value = serde_json::from_str(line.trim()).unwrap();
    assert_eq!(v["messages"], 11);
    for t in [
        "rates.csv",
        "persuasion.csv",
        "confusion.csv",
        "f_by_turn.csv",
    ] {
        assert!(dir.path().join(t).exists(), "{t}");
    }
}

#[test]
fn smatch_identical_files() {
    let dir = tempfile::tempdir().unwrap();
    let g = dir.path().join("g.txt");
    std::fs::write(
        &g,
        "(m / move-01 :ARG1 (u / unit) :ARG2 (p / province :name (n / name :op1 \"Burgundy\")))\n",
    )
    .unwrap();
    let v: Value =
        serde_json::from_str(ok(&["smatch", "--pred", p(&g), "--gold", p(&g), "--exact"]).trim())
            .unwrap();
    assert_eq!(v["f1"], 1.0);
    assert_eq!(v["matched"], v["exact_matched"]);
}

#[test]
fn errors_are_one_json_line() {
    let (code, e) = failure(&["detect", "--in", "/no/such/file.jsonl"]);
    assert_eq!((code, e["error"].as_str()), (1, Some("io")));

    let (code, e) = failure(&["simulate"]);
    assert_eq!((code, e["error"].as_str()), (1, Some("usage")));

    let (code, e) = failure(&["frobnicate"]);
    assert_eq!((code, e["error"].as_str()), (2, Some("usage")));

    let dir = tempfile::tempdir().unwrap();
    let f = dir.path().join("future.jsonl");
    std::fs::write(&f, "{\"schema_version\":\"1.0\",\"kind\":\"corpus\"}\n{\"schema_version\":\"2.0\",\"kind\":\"corpus\"}\n").unwrap();
    let (_, e) = failure(&["detect", "--in", p(&f)]);
    assert_eq!(
        (e["error"].as_str(), e["line"].as_u64()),
        (Some("schema_version"), Some(2))
    );

    let (_, e) = failure(&["stats", "--in", p(&fixtures().join("summaries_fra.csv"))]);
    assert_eq!(e["error"], "usage");

    let bad = dir.path().join("bad.txt");
    std::fs::write(&bad, "(a / b :op1").unwrap();
    let (_, e) = failure(&["smatch", "--pred", p(&bad), "--gold", p(&bad)]);
    assert_eq!(e["error"], "graph");
}
