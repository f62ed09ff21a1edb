use std::collections::BTreeMap;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::sync::Arc;

use dipintent::analytics::{
    f_by_turn, parse_summaries_csv, persuasion_summary, rate_table, regress, report, summaries_csv,
    write_coefficients, write_f_by_turn, Class, Dyad, GameRow, OlsFit, PersuasionItem, RateItem,
    ReportInput, SeKind,
};
use dipintent::detect::{confusion, EventKind};
use dipintent::game::{GameState, Map, StateSnapshot};
use dipintent::graph::{parse_graphs, IntentGraph};
use dipintent::io::{
    csv_string, ingest_corpus, read_jsonl, read_text, write_jsonl, write_text, Corpus, GameEvent,
    IoError, PipelineConfig, SCHEMA_VERSION,
};
use dipintent::message::{parse_message, CommunicativeAct, Message, MessageContext};
use dipintent::sim::{run_batch, run_batch_with, GameLog};
use dipintent::smatch::{corpus_smatch, exact_smatch};
use serde::Serialize;
use serde_json::json;

use crate::{
    out_path, Cli, CliError, Cmd, DetectArgs, MessageArgs, ReportArgs, SimulateArgs, SmatchArgs,
    StatsArgs,
};

pub fn run(cli: Cli) -> Result<(), CliError> {
    let config = cli
        .config
        .as_deref()
        .map(PipelineConfig::load)
        .transpose()?;
    let map = match &config {
        Some(c) => c.load_map()?,
        None => Map::standard(),
    };
    match cli.cmd {
        Cmd::Simulate(a) => simulate(a, config.as_ref()),
        Cmd::Parse(a) => messages(a, &map, false),
        Cmd::Ground(a) => messages(a, &map, true),
        Cmd::Detect(a) => detect(a, &map),
        Cmd::Smatch(a) => smatch(a),
        Cmd::Stats(a) => stats(a, &map),
        Cmd::Report(a) => report_cmd(a),
    }
}

/// Writes to stdout; a closed pipe (`| head`) ends the process quietly.
fn say(text: impl std::fmt::Display) {
    if let Err(e) = writeln!(std::io::stdout().lock(), "{text}") {
        if e.kind() == std::io::ErrorKind::BrokenPipe {
            std::process::exit(0);
        }
        panic!("stdout: {e}");
    }
}

fn emit<T: Serialize>(out: Option<&Path>, kind: &str, items: &[T]) -> Result<(), CliError> {
    match out {
        Some(p) => write_jsonl(&out_path(p), kind, items)?,
        None => {
            say(json!({ "schema_version": SCHEMA_VERSION, "kind": kind }));
            for it in items {
                say(serde_json::to_string(it).expect("records serialize"));
            }
        }
    }
    Ok(())
}

fn warn_diagnostics(c: &Corpus) {
    for d in &c.diagnostics {
        eprintln!(
            "{}",
            json!({ "warning": "diagnostic", "line": d.line, "message": d.message })
        );
    }
}

fn simulate(a: SimulateArgs, config: Option<&PipelineConfig>) -> Result<(), CliError> {
    let seed = a.seed.or(config.map(|c| c.seed)).ok_or_else(|| {
        CliError::Usage("--seed is required; runs have no clock-based default".into())
    })?;
    let mut batch = config.map(PipelineConfig::batch).unwrap_or_default();
    if let Some(g) = a.games {
        batch.games_per_level = g;
    }
    if let Some(l) = a.levels {
        batch.levels = l;
    }
    if let Some(t) = a.turns {
        batch.turns = t;
    }
    if let Some(r) = a.rounds {
        batch.rounds = r;
    }
    let out = out_path(
        &a.out
            .or(config.map(|c| c.out.clone()))
            .unwrap_or_else(|| PathBuf::from("out")),
    );
    let corpora = config.map(|c| c.corpora.as_slice()).unwrap_or_default();
    let logs = if corpora.is_empty() {
        run_batch(&batch, seed)?
    } else {
        let mut records = Vec::new();
        for p in corpora {
            records.extend(ingest_corpus(p)?.replay_records());
        }
        run_batch_with(&batch, seed, &records)?
    };
    write_jsonl(&out.join("games.jsonl"), "game_log", &logs)?;
    let rows: Vec<GameRow> = logs.iter().map(GameRow::from_log).collect();
    write_text(&out.join("summaries.csv"), &summaries_csv(&rows))?;
    let settings = json!({ "schema_version": SCHEMA_VERSION, "seed": seed, "batch": batch, "corpora": corpora });
    write_text(&out.join("batch.json"), &format!("{settings}\n"))?;
    for l in &logs {
        say(format_args!("{}\t{}\t{}", l.game_id, l.level(), l.summary));
    }
    Ok(())
}

fn board(a: &MessageArgs, map: &Arc<Map>) -> Result<GameState, CliError> {
    match &a.board {
        None => Ok(GameState::initial(map.clone()).with_turn(a.turn)),
        Some(p) => {
            let snap: StateSnapshot =
                serde_json::from_str(&read_text(p)?).map_err(|e| IoError::Schema {
                    line: e.line(),
                    message: e.to_string(),
                })?;
            GameState::from_snapshot(map.clone(), &snap)
                .map_err(|e| CliError::Usage(format!("{}: {e}", p.display())))
        }
    }
}

fn messages(a: MessageArgs, map: &Arc<Map>, grounded: bool) -> Result<(), CliError> {
    let mut acts: Vec<CommunicativeAct> = match (&a.input, &a.text) {
        (Some(p), _) => {
            let c = ingest_corpus(p)?;
            warn_diagnostics(&c);
            c.acts(map)?.into_iter().flat_map(|(_, v)| v).collect()
        }
        (None, Some(text)) => {
            let (s, r) = (
                a.sender.expect("clap requires it"),
                a.recipient.expect("clap requires it"),
            );
            let ctx = MessageContext::new(s, r, board(&a, map)?)
                .map_err(|e| CliError::Usage(e.to_string()))?
                .with_id("cli");
            parse_message(text, &ctx)
        }
        (None, None) => return Err(CliError::Usage("give --in or --text".into())),
    };
    if !grounded {
        acts.iter_mut().for_each(|x| x.grounded.clear());
    }
    emit(
        a.out.as_deref(),
        if grounded { "grounded_acts" } else { "acts" },
        &acts,
    )
}

fn batch_logs(dir: &Path) -> Result<Vec<GameLog>, CliError> {
    Ok(read_jsonl(&dir.join("games.jsonl"))?)
}

fn batch_events(logs: &[GameLog]) -> Result<Vec<GameEvent>, CliError> {
    let mut out = Vec::new();
    for l in logs {
        out.extend(l.events()?.into_iter().map(|event| GameEvent {
            game_id: l.game_id.clone(),
            event,
        }));
    }
    Ok(out)
}

fn detect(a: DetectArgs, map: &Arc<Map>) -> Result<(), CliError> {
    let events = if a.input.is_dir() {
        batch_events(&batch_logs(&a.input)?)?
    } else {
        let c = ingest_corpus(&a.input)?;
        warn_diagnostics(&c);
        c.detect(map)?
    };
    emit(a.out.as_deref(), "events", &events)
}

fn read_graphs(path: &Path) -> Result<Vec<IntentGraph>, CliError> {
    parse_graphs(&read_text(path)?)
        .into_iter()
        .collect::<Result<_, _>>()
        .map_err(|source| CliError::Graph {
            path: path.to_path_buf(),
            source,
        })
}

fn smatch(a: SmatchArgs) -> Result<(), CliError> {
    let pred = read_graphs(&a.pred)?;
    let gold = read_graphs(&a.gold)?;
    let s = corpus_smatch(&pred, &gold, a.restarts, a.seed)?;
    let mut out = json!({
        "precision": s.precision,
        "recall": s.recall,
        "f1": s.f1,
        "matched": s.matched,
        "pred_triples": s.pred_triples,
        "gold_triples": s.gold_triples,
        "pairs": s.pairs.len(),
    });
    if a.exact {
        let mut matched = 0;
        for (p, g) in pred.iter().zip(&gold) {
            matched += exact_smatch(p, g)?.matched;
        }
        out["exact_matched"] = json!(matched);
    }
    say(out);
    Ok(())
}

fn game_rows(input: &Path) -> Result<Vec<GameRow>, CliError> {
    let summaries = if input.is_dir() {
        input.join("summaries.csv")
    } else {
        input.to_path_buf()
    };
    if summaries.extension().is_some_and(|e| e == "csv") && summaries.exists() {
        return Ok(parse_summaries_csv(&read_text(&summaries)?)?);
    }
    Ok(batch_logs(input)?.iter().map(GameRow::from_log).collect())
}

fn se_kind(robust: bool) -> SeKind {
    if robust {
        SeKind::Robust
    } else {
        SeKind::Classical
    }
}

fn print_fit(fit: &OlsFit) {
    say("term\testimate\tci_low\tci_high");
    for c in &fit.coefficients {
        say(format_args!(
            "{}\t{:.3}\t{:.3}\t{:.3}",
            c.term, c.estimate, c.ci_low, c.ci_high
        ));
    }
}

fn stats(a: StatsArgs, map: &Arc<Map>) -> Result<(), CliError> {
    let out = out_path(&a.out.clone().unwrap_or_else(|| PathBuf::from("out/stats")));
    let is_corpus = a.input.is_file() && a.input.extension().is_some_and(|e| e == "jsonl");
    if !is_corpus {
        if !a.regression {
            return Err(CliError::Usage(
                "batch stats need --regression; `report` writes the other tables".into(),
            ));
        }
        let fit = regress(&game_rows(&a.input)?, se_kind(a.robust))?;
        write_coefficients(&fit, &out.join("coefficients.csv"))?;
        print_fit(&fit);
        return Ok(());
    }
    if a.regression {
        return Err(CliError::Usage(
            "--regression needs a batch, not a corpus".into(),
        ));
    }
    let c = ingest_corpus(&a.input)?;
    warn_diagnostics(&c);
    corpus_stats(&c, map, a.span, &out)
}

/// Rates by sender/receiver class, persuasion, detector accuracy against
/// lie labels, and the identification curve.
fn corpus_stats(c: &Corpus, map: &Arc<Map>, span: f64, out: &Path) -> Result<(), CliError> {
    let events = c.detect(map)?;
    let flagged = |m: &Message, kind: EventKind| {
        events.iter().any(|e| {
            e.game_id == m.game_id
                && e.event.message_id == m.id
                && e.event.kind == kind
                && e.event.verdict
        })
    };
    let mut lies: BTreeMap<(&str, &str), (bool, bool)> = BTreeMap::new();
    for an in &c.annotations {
        if let Some(id) = &an.message_id {
            let e = lies.entry((&an.game_id, id)).or_default();
            e.0 |= an.outgoing_label == Some(dipintent::io::Outgoing::Lie);
            e.1 |= an.incoming_label == Some(dipintent::io::Incoming::Lie);
        }
    }
    let mut items: BTreeMap<&str, Vec<RateItem>> = BTreeMap::new();
    let mut pers = Vec::new();
    let mut unclassed = 0;
    for m in &c.messages {
        let class = |p| c.players.get(&(m.game_id.clone(), p)).copied();
        let (Some(s), Some(r)) = (class(m.sender), class(m.recipient)) else {
            unclassed += 1;
            continue;
        };
        let dyad = Dyad::new(s, r);
        let (lie, perceived) = lies
            .get(&(m.game_id.as_str(), m.id.as_str()))
            .copied()
            .unwrap_or_default();
        for (name, f) in [
            ("broken_commitment", flagged(m, EventKind::BrokenCommitment)),
            ("lie", lie),
            ("perceived_lie", perceived),
        ] {
            items.entry(name).or_default().push(RateItem {
                game_id: m.game_id.clone(),
                dyad,
                flagged: f,
            });
        }
        pers.push(PersuasionItem {
            dyad,
            attempt: flagged(m, EventKind::PersuasionAttempt),
            success: flagged(m, EventKind::PersuasionSuccess),
        });
    }
    let mut rows = Vec::new();
    for (name, v) in &items {
        for (d, cell) in rate_table(v) {
            rows.push(vec![
                name.to_string(),
                d.sender.to_string(),
                d.receiver.to_string(),
                cell.numerator.to_string(),
                cell.denominator.to_string(),
                cell.rate.to_string(),
                cell.std.to_string(),
            ]);
        }
    }
    write_text(
        &out.join("rates.csv"),
        &csv_string(
            &[
                "flag",
                "sender_class",
                "receiver_class",
                "numerator",
                "denominator",
                "rate",
                "std",
            ],
            &rows,
        ),
    )?;
    let rows: Vec<Vec<String>> = persuasion_summary(&pers)
        .into_iter()
        .map(|(d, p)| {
            vec![
                d.sender.to_string(),
                d.receiver.to_string(),
                p.messages.to_string(),
                p.attempts.to_string(),
                p.successes.to_string(),
                p.attempt_rate.to_string(),
                p.success_rate.to_string(),
            ]
        })
        .collect();
    write_text(
        &out.join("persuasion.csv"),
        &csv_string(
            &[
                "sender_class",
                "receiver_class",
                "messages",
                "attempts",
                "successes",
                "attempt_rate",
                "success_rate",
            ],
            &rows,
        ),
    )?;
    let events_only: Vec<_> = events.iter().map(|e| e.event.clone()).collect();
    let k = confusion(&events_only, &c.lie_labels());
    write_text(
        &out.join("confusion.csv"),
        &csv_string(
            &["flag", "tp", "fp", "fn", "tn", "precision", "recall"],
            &[vec![
                "broken_commitment".into(),
                k.tp.to_string(),
                k.fp.to_string(),
                k.fn_.to_string(),
                k.tn.to_string(),
                k.precision.to_string(),
                k.recall.to_string(),
            ]],
        ),
    )?;
    let truth: BTreeMap<_, Class> = c.players.clone();
    write_f_by_turn(
        &f_by_turn(&c.guesses(), &truth, Some(span)),
        &out.join("f_by_turn.csv"),
    )?;
    say(json!({
        "messages": c.messages.len(),
        "unclassed_messages": unclassed,
        "events": events.len(),
        "broken_commitment": { "tp": k.tp, "fp": k.fp, "fn": k.fn_, "tn": k.tn, "precision": k.precision, "recall": k.recall },
    }));
    Ok(())
}

fn report_cmd(a: ReportArgs) -> Result<(), CliError> {
    let logs = batch_logs(&a.input)?;
    let events = match &a.events {
        Some(p) => read_jsonl(p)?,
        None => batch_events(&logs)?,
    };
    let rows: Vec<GameRow> = logs.iter().map(GameRow::from_log).collect();
    let fit = if logs.is_empty() {
        None
    } else {
        match regress(&rows, se_kind(a.robust)) {
            Ok(f) => Some(f),
            Err(e) => {
                eprintln!(
                    "{}",
                    json!({ "warning": "regression_skipped", "message": e.to_string() })
                );
                None
            }
        }
    };
    let out = out_path(&a.out.unwrap_or_else(|| PathBuf::from("out/report")));
    let s = report(
        &ReportInput {
            logs: &logs,
            events: &events,
            fit: fit.as_ref(),
        },
        &out,
    )?;
    say(s.text.trim_end());
    Ok(())
}
