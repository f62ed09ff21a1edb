//! Self-play harness: seven scripted agents, some of them talking.

mod corpus;
mod policy;
mod render;

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;
use std::sync::OnceLock;

use rand::seq::{IndexedRandom, SliceRandom};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

pub use corpus::{bundled_corpus, sample_random_message, CorpusRecord, Sampled, Widening};
pub use policy::Policy;
pub use render::{order_sentence, read_message, render_message};

use crate::detect::{scan_turn, DetectError, DetectionEvent, IntentLedger};
use crate::game::{
    adjudicate, validate_for, Command, GameState, Map, Order, OrderKind, Phase, Power, Prov,
    ResolutionReport, StateSnapshot, Turn,
};
use crate::message::{ActKind, CommunicativeAct, Message, MessageContext};
use crate::smatch::pair_seed;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum SimError {
    #[error("invalid configuration: {0}")]
    ConfigInvalid(String),
    #[error("the message corpus is empty")]
    EmptyCorpus,
    #[error("cannot read summary line `{0}`")]
    BadSummary(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CommLevel {
    NaturalLanguage,
    AmrOnly,
    RandomCorpus,
    Gunboat,
}

impl CommLevel {
    pub const TALKING: [CommLevel; 3] = [
        CommLevel::NaturalLanguage,
        CommLevel::AmrOnly,
        CommLevel::RandomCorpus,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            CommLevel::NaturalLanguage => "natural_language",
            CommLevel::AmrOnly => "amr_only",
            CommLevel::RandomCorpus => "random_corpus",
            CommLevel::Gunboat => "gunboat",
        }
    }
}

impl fmt::Display for CommLevel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for CommLevel {
    type Err = SimError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        [
            CommLevel::NaturalLanguage,
            CommLevel::AmrOnly,
            CommLevel::RandomCorpus,
            CommLevel::Gunboat,
        ]
        .into_iter()
        .find(|l| l.as_str() == s)
        .ok_or_else(|| SimError::ConfigInvalid(format!("unknown communication level `{s}`")))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AgentConfig {
    pub policy: Policy,
    /// Chance of keeping each commitment it makes.
    pub honesty: f64,
    /// Chance of adopting a legal proposal.
    pub persuadability: f64,
    pub seed: u64,
}

impl AgentConfig {
    pub fn negotiator() -> AgentConfig {
        AgentConfig {
            policy: Policy::Negotiator,
            honesty: 0.8,
            persuadability: 0.5,
            seed: 0,
        }
    }

    pub fn gunboat() -> AgentConfig {
        AgentConfig {
            policy: Policy::Greedy,
            honesty: 1.0,
            persuadability: 0.0,
            seed: 0,
        }
    }

    fn check(&self) -> Result<(), SimError> {
        for (what, p) in [
            ("honesty", self.honesty),
            ("persuadability", self.persuadability),
        ] {
            if !(0.0..=1.0).contains(&p) {
                return Err(SimError::ConfigInvalid(format!(
                    "{what} {p} is not a probability"
                )));
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Assignment {
    pub agent: AgentConfig,
    pub level: CommLevel,
}

pub const DEFAULT_TURNS: u32 = 14;
pub const DEFAULT_ROUNDS: u32 = 3;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GameConfig {
    pub game_id: String,
    pub assignments: BTreeMap<Power, Assignment>,
    /// Movement turns to play.
    pub turns: u32,
    /// Negotiation rounds per movement turn; each ordered pair of talking
    /// powers exchanges at most one message per round. Rounds cycle through
    /// commit, propose and reply.
    pub rounds: u32,
}

impl GameConfig {
    /// Every power gunboat except `talkers`, who negotiate at `level`.
    pub fn with_talkers(
        game_id: impl Into<String>,
        talkers: &[Power],
        level: CommLevel,
        negotiator: AgentConfig,
        gunboat: AgentConfig,
    ) -> GameConfig {
        let assignments = Power::ALL
            .into_iter()
            .map(|p| {
                let a = if talkers.contains(&p) {
                    Assignment {
                        agent: negotiator,
                        level,
                    }
                } else {
                    Assignment {
                        agent: gunboat,
                        level: CommLevel::Gunboat,
                    }
                };
                (p, a)
            })
            .collect();
        GameConfig {
            game_id: game_id.into(),
            assignments,
            turns: DEFAULT_TURNS,
            rounds: DEFAULT_ROUNDS,
        }
    }

    fn check(&self) -> Result<(), SimError> {
        if self.assignments.len() != 7 {
            return Err(SimError::ConfigInvalid(format!(
                "{} powers assigned, need 7",
                self.assignments.len()
            )));
        }
        if self.turns == 0 {
            return Err(SimError::ConfigInvalid("at least one turn".into()));
        }
        for (p, a) in &self.assignments {
            a.agent.check()?;
            if a.level != CommLevel::Gunboat && a.agent.policy != Policy::Negotiator {
                return Err(SimError::ConfigInvalid(format!(
                    "{p} talks at {} but is not a negotiator",
                    a.level
                )));
            }
        }
        Ok(())
    }

    pub fn talkers(&self) -> Vec<Power> {
        self.assignments
            .iter()
            .filter(|(_, a)| a.level != CommLevel::Gunboat)
            .map(|(p, _)| *p)
            .collect()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LoggedMessage {
    #[serde(flatten)]
    pub message: Message,
    pub level: CommLevel,
    /// Set for corpus draws that had to relax the match.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub widening: Option<Widening>,
    /// The acts the recipient read from it.
    pub acts: Vec<CommunicativeAct>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PhaseLog {
    pub turn: Turn,
    pub orders: BTreeMap<Power, Vec<Order>>,
    pub report: ResolutionReport,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TurnLog {
    pub turn: Turn,
    pub state: StateSnapshot,
    pub intents: BTreeMap<Power, Vec<Order>>,
    pub messages: Vec<LoggedMessage>,
    pub finals: BTreeMap<Power, Vec<Order>>,
    pub report: ResolutionReport,
    /// Retreat and adjustment phases up to the next movement turn.
    pub followups: Vec<PhaseLog>,
    /// Centers held once the turn's phases are done.
    pub sc: BTreeMap<Power, usize>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GameLog {
    pub game_id: String,
    pub seed: u64,
    pub assignments: BTreeMap<Power, Assignment>,
    pub turns: Vec<TurnLog>,
    pub final_sc: BTreeMap<Power, usize>,
    pub summary: String,
}

impl GameLog {
    pub fn talkers(&self) -> Vec<Power> {
        self.assignments
            .iter()
            .filter(|(_, a)| a.level != CommLevel::Gunboat)
            .map(|(p, _)| *p)
            .collect()
    }

    /// Level shared by the talking powers; gunboat when nobody talks.
    pub fn level(&self) -> CommLevel {
        self.assignments
            .values()
            .map(|a| a.level)
            .find(|&l| l != CommLevel::Gunboat)
            .unwrap_or(CommLevel::Gunboat)
    }

    pub fn ledger(&self) -> IntentLedger {
        let mut l = IntentLedger::new();
        for t in &self.turns {
            for (p, o) in &t.intents {
                l.record_initial(*p, t.turn, o.iter().copied());
            }
            for (p, o) in &t.finals {
                l.record_final(*p, t.turn, o.iter().copied());
            }
        }
        l
    }

    /// Detector output over every turn's logged acts.
    pub fn events(&self) -> Result<Vec<DetectionEvent>, DetectError> {
        let ledger = self.ledger();
        let mut out = Vec::new();
        for t in &self.turns {
            let acts: Vec<CommunicativeAct> = t
                .messages
                .iter()
                .flat_map(|m| m.acts.iter().cloned())
                .collect();
            out.extend(scan_turn(&acts, &ledger, t.turn)?);
        }
        Ok(out)
    }

    pub fn state_at(&self, i: usize) -> GameState {
        GameState::from_snapshot(Map::standard(), &self.turns[i].state)
            .expect("logged states are valid")
    }
}

/// "AUS 0, ENG 0, FRA 4, GER 10, ITA 5, RUS 6, TUR 9. (FRA GER TUR)"
pub fn summary_line(sc: &BTreeMap<Power, usize>, talkers: &[Power]) -> String {
    let counts: Vec<String> = Power::ALL
        .iter()
        .map(|p| format!("{} {}", p.code(), sc.get(p).copied().unwrap_or(0)))
        .collect();
    let mut t: Vec<Power> = talkers.to_vec();
    t.sort();
    let names: Vec<&str> = t.iter().map(|p| p.code()).collect();
    format!("{}. ({})", counts.join(", "), names.join(" "))
}

/// Inverse of [`summary_line`].
pub fn parse_summary(line: &str) -> Result<(BTreeMap<Power, usize>, Vec<Power>), SimError> {
    let bad = || SimError::BadSummary(line.to_string());
    let line = line.trim();
    let (counts, rest) = line.split_once(". (").ok_or_else(bad)?;
    let talkers = rest.strip_suffix(')').ok_or_else(bad)?;
    let mut sc = BTreeMap::new();
    for part in counts.split(", ") {
        let (p, n) = part.split_once(' ').ok_or_else(bad)?;
        let p: Power = p.parse().map_err(|_| bad())?;
        sc.insert(p, n.parse().map_err(|_| bad())?);
    }
    if sc.len() != 7 {
        return Err(bad());
    }
    let talkers = talkers
        .split_whitespace()
        .map(|p| p.parse().map_err(|_| bad()))
        .collect::<Result<Vec<Power>, _>>()?;
    Ok((sc, talkers))
}

fn corpus() -> &'static [CorpusRecord] {
    static C: OnceLock<Vec<CorpusRecord>> = OnceLock::new();
    C.get_or_init(bundled_corpus)
}

/// Plays one game on the bundled corpus.
pub fn run_game(config: &GameConfig, root_seed: u64) -> Result<GameLog, SimError> {
    run_game_with(config, root_seed, corpus())
}

struct Agent {
    cfg: AgentConfig,
    level: CommLevel,
    rng: ChaCha8Rng,
}

pub fn run_game_with(
    config: &GameConfig,
    root_seed: u64,
    corpus: &[CorpusRecord],
) -> Result<GameLog, SimError> {
    config.check()?;
    let talkers = config.talkers();
    if talkers
        .iter()
        .any(|p| config.assignments[p].level == CommLevel::RandomCorpus)
        && corpus.is_empty()
    {
        return Err(SimError::EmptyCorpus);
    }
    let mut agents: BTreeMap<Power, Agent> = config
        .assignments
        .iter()
        .map(|(&p, a)| {
            let seed = pair_seed(pair_seed(root_seed, p.index()) ^ a.agent.seed, 7);
            (
                p,
                Agent {
                    cfg: a.agent,
                    level: a.level,
                    rng: ChaCha8Rng::seed_from_u64(seed),
                },
            )
        })
        .collect();
    let mut game_rng = ChaCha8Rng::seed_from_u64(root_seed);
    let mut state = GameState::initial(Map::standard());
    let mut turns = Vec::new();
    for _ in 0..config.turns {
        if !talkers.is_empty() && talkers.iter().all(|&p| state.is_eliminated(p)) {
            break;
        }
        let t = play_turn(config, &state, &mut agents, &mut game_rng, corpus);
        state =
            GameState::from_snapshot(Map::standard(), &t.1).expect("adjudicated states are valid");
        turns.push(t.0);
    }
    let sc: BTreeMap<Power, usize> = Power::ALL
        .into_iter()
        .map(|p| (p, state.supply_center_count(p)))
        .collect();
    Ok(GameLog {
        game_id: config.game_id.clone(),
        seed: root_seed,
        assignments: config.assignments.clone(),
        summary: summary_line(&sc, &talkers),
        turns,
        final_sc: sc,
    })
}

/// Per-turn negotiation bookkeeping.
struct Table {
    plan: BTreeMap<Power, BTreeMap<Prov, Order>>,
    /// Orders a power has promised or agreed to, by unit.
    bound: BTreeMap<Power, BTreeMap<Prov, Order>>,
    /// (replier, proposer) -> accepted order awaiting a "sure".
    replies: BTreeMap<(Power, Power), Order>,
}

fn relevant(state: &GameState, o: &Order, other: Power) -> bool {
    let map = state.map();
    let touches = |p: Prov| {
        state.unit_at(p).is_some_and(|u| u.owner == other)
            || map
                .neighbors(p)
                .into_iter()
                .any(|q| state.unit_at(q).is_some_and(|u| u.owner == other))
    };
    match o.command {
        Command::Move { dest } => touches(dest.prov),
        Command::SupportMove { target, dest } => touches(dest) || touches(target.loc.prov),
        Command::SupportHold { target } => touches(target.loc.prov),
        _ => touches(o.prov()),
    }
}

fn choose_commitment(
    state: &GameState,
    t: &Table,
    s: Power,
    r: Power,
    rng: &mut ChaCha8Rng,
) -> Option<Order> {
    let free: Vec<Order> = t.plan[&s]
        .iter()
        .filter(|(p, _)| !t.bound[&s].contains_key(p))
        .map(|(_, o)| *o)
        .collect();
    let near: Vec<Order> = free
        .iter()
        .filter(|o| relevant(state, o, r))
        .copied()
        .collect();
    near.choose(rng).or(free.choose(rng)).copied()
}

fn choose_proposal(
    state: &GameState,
    t: &Table,
    s: Power,
    r: Power,
    rng: &mut ChaCha8Rng,
) -> Option<Order> {
    let map = state.map();
    let free: Vec<_> = state
        .units_of(r)
        .filter(|u| !t.bound[&r].contains_key(&u.loc.prov))
        .copied()
        .collect();
    let mut supports = Vec::new();
    for m in t.plan[&s].values().filter(|o| o.kind() == OrderKind::Move) {
        let Command::Move { dest } = m.command else {
            continue;
        };
        for u in &free {
            if u.loc.prov != dest.prov && map.can_reach(u.kind, u.loc, dest.prov) {
                let o = Order::new(
                    u.order_unit(),
                    Command::SupportMove {
                        target: m.unit,
                        dest: dest.prov,
                    },
                );
                if validate_for(state, r, &o).is_ok() {
                    supports.push(o);
                }
            }
        }
    }
    if let Some(o) = supports.choose(rng) {
        return Some(*o);
    }
    // otherwise ask a neighbor to sit still
    let near: Vec<Order> = free
        .iter()
        .filter(|u| {
            map.neighbors(u.loc.prov)
                .into_iter()
                .any(|q| state.unit_at(q).is_some_and(|x| x.owner == s))
        })
        .map(|u| Order::hold(u.order_unit()))
        .collect();
    near.choose(rng).copied()
}

fn play_turn(
    config: &GameConfig,
    state: &GameState,
    agents: &mut BTreeMap<Power, Agent>,
    game_rng: &mut ChaCha8Rng,
    corpus: &[CorpusRecord],
) -> (TurnLog, StateSnapshot) {
    let turn = state.turn();
    debug_assert_eq!(turn.phase, Phase::Movement);
    let alive: Vec<Power> = Power::ALL
        .into_iter()
        .filter(|&p| state.units_of(p).next().is_some())
        .collect();
    let mut table = Table {
        plan: BTreeMap::new(),
        bound: Power::ALL
            .into_iter()
            .map(|p| (p, BTreeMap::new()))
            .collect(),
        replies: BTreeMap::new(),
    };
    for &p in &alive {
        let a = agents.get_mut(&p).unwrap();
        table
            .plan
            .insert(p, policy::plan_movement(state, p, a.cfg.policy, &mut a.rng));
    }
    let intents: BTreeMap<Power, Vec<Order>> = table
        .plan
        .iter()
        .map(|(p, m)| (*p, m.values().copied().collect()))
        .collect();

    let talkers: Vec<Power> = alive
        .iter()
        .copied()
        .filter(|p| agents[p].level != CommLevel::Gunboat)
        .collect();
    let mut messages: Vec<LoggedMessage> = Vec::new();
    for round in 0..config.rounds {
        for &s in &talkers {
            for &r in &talkers {
                if s == r {
                    continue;
                }
                let level = agents[&s].level;
                let pick = {
                    let rng = &mut agents.get_mut(&s).unwrap().rng;
                    match round % 3 {
                        0 => choose_commitment(state, &table, s, r, rng)
                            .map(|o| (ActKind::Commitment, o)),
                        1 => choose_proposal(state, &table, s, r, rng)
                            .map(|o| (ActKind::Proposal, o)),
                        _ => table
                            .replies
                            .remove(&(s, r))
                            .map(|o| (ActKind::Agreement, o)),
                    }
                };
                let Some((kind, order)) = pick else { continue };
                let id = format!("{}-{}-{}", config.game_id, turn, messages.len());
                let act = CommunicativeAct::for_order(state, kind, s, r, &order);
                let (text, widening) = match level {
                    CommLevel::RandomCorpus => {
                        let d = sample_random_message(corpus, s, r, turn.year, game_rng)
                            .expect("corpus checked non-empty");
                        (
                            d.record.text.clone(),
                            Some(d.widening).filter(|w| *w != Widening::Exact),
                        )
                    }
                    _ => (
                        render_message(&act, level, state).expect("talking levels render"),
                        None,
                    ),
                };
                if kind != ActKind::Proposal {
                    table.bound.get_mut(&s).unwrap().insert(order.prov(), order);
                }
                let history: Vec<CommunicativeAct> = messages
                    .iter()
                    .filter(|m| {
                        (m.message.sender, m.message.recipient) == (s, r)
                            || (m.message.sender, m.message.recipient) == (r, s)
                    })
                    .flat_map(|m| m.acts.iter().cloned())
                    .collect();
                let ctx = MessageContext::new(s, r, state.clone())
                    .unwrap()
                    .with_id(&id)
                    .with_history(history);
                let acts = read_message(&text, level, &ctx);
                // the recipient weighs proposals addressed to it
                for a in acts
                    .iter()
                    .filter(|a| a.kind == ActKind::Proposal && a.actor == r && !a.conditional)
                {
                    let Some(o) = a.grounded.first().copied() else {
                        continue;
                    };
                    if table.bound[&r].contains_key(&o.prov())
                        || table.replies.contains_key(&(r, s))
                    {
                        continue;
                    }
                    let agent = agents.get_mut(&r).unwrap();
                    if agent.rng.random_bool(agent.cfg.persuadability) {
                        table.plan.get_mut(&r).unwrap().insert(o.prov(), o);
                        table.bound.get_mut(&r).unwrap().insert(o.prov(), o);
                        table.replies.insert((r, s), o);
                    }
                }
                messages.push(LoggedMessage {
                    message: Message {
                        id,
                        game_id: config.game_id.clone(),
                        turn,
                        sender: s,
                        recipient: r,
                        text,
                        gold_graph: None,
                    },
                    level,
                    widening,
                    acts,
                });
            }
        }
    }

    // keep or break each promise
    for &p in &talkers {
        let agent = agents.get_mut(&p).unwrap();
        for (prov, promised) in table.bound[&p].clone() {
            let keep = agent.rng.random_bool(agent.cfg.honesty);
            let o = if keep {
                promised
            } else {
                let unit = *state.unit_at(prov).unwrap();
                let mut alts: Vec<Order> = policy::simple_options(state, &unit)
                    .into_iter()
                    .filter(|o| !o.same_action(&promised))
                    .collect();
                alts.shuffle(&mut agent.rng);
                alts.first().copied().unwrap_or(promised)
            };
            table.plan.get_mut(&p).unwrap().insert(prov, o);
        }
    }
    let finals: BTreeMap<Power, Vec<Order>> = table
        .plan
        .iter()
        .map(|(p, m)| (*p, m.values().copied().collect()))
        .collect();
    let (mut next, report) =
        adjudicate(state, &finals).expect("movement orders in a movement phase");
    let mut followups = Vec::new();
    while next.turn().phase != Phase::Movement {
        let mut orders = BTreeMap::new();
        for p in Power::ALL {
            let rng = &mut agents.get_mut(&p).unwrap().rng;
            let o = match next.turn().phase {
                Phase::Retreat => policy::plan_retreats(&next, p, rng),
                _ => policy::plan_adjustments(&next, p, rng),
            };
            if !o.is_empty() {
                orders.insert(p, o);
            }
        }
        let (after, rep) = adjudicate(&next, &orders).expect("orders match the phase");
        followups.push(PhaseLog {
            turn: next.turn(),
            orders,
            report: rep,
        });
        next = after;
    }
    let sc = Power::ALL
        .into_iter()
        .map(|p| (p, next.supply_center_count(p)))
        .collect();
    let log = TurnLog {
        turn,
        state: state.snapshot(),
        intents,
        messages,
        finals,
        report,
        followups,
        sc,
    };
    (log, next.snapshot())
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BatchConfig {
    pub games_per_level: usize,
    pub levels: Vec<CommLevel>,
    /// Talking powers per game; the rest play gunboat.
    pub talkers: usize,
    pub negotiator: AgentConfig,
    pub gunboat: AgentConfig,
    pub turns: u32,
    pub rounds: u32,
}

impl Default for BatchConfig {
    fn default() -> BatchConfig {
        BatchConfig {
            games_per_level: 10,
            levels: CommLevel::TALKING.to_vec(),
            talkers: 3,
            negotiator: AgentConfig::negotiator(),
            gunboat: AgentConfig::gunboat(),
            turns: DEFAULT_TURNS,
            rounds: DEFAULT_ROUNDS,
        }
    }
}

/// Game configs for a batch. Talking seats rotate through a seeded order
/// of the powers three at a time, so each power talks equally often (±1).
pub fn batch_configs(
    cfg: &BatchConfig,
    root_seed: u64,
) -> Result<Vec<(GameConfig, u64)>, SimError> {
    if cfg.games_per_level == 0 {
        return Err(SimError::ConfigInvalid(
            "games per level must be at least 1".into(),
        ));
    }
    if cfg.talkers > 7 {
        return Err(SimError::ConfigInvalid(format!(
            "{} talking powers",
            cfg.talkers
        )));
    }
    let mut order = Power::ALL;
    order.shuffle(&mut ChaCha8Rng::seed_from_u64(root_seed));
    let mut out = Vec::new();
    for (li, &level) in cfg.levels.iter().enumerate() {
        for j in 0..cfg.games_per_level {
            let g = li * cfg.games_per_level + j;
            let talkers: Vec<Power> = (0..cfg.talkers)
                .map(|k| order[(cfg.talkers * g + k) % 7])
                .collect();
            let mut gc = GameConfig::with_talkers(
                format!("{level}-{j:03}"),
                &talkers,
                level,
                cfg.negotiator,
                cfg.gunboat,
            );
            gc.turns = cfg.turns;
            gc.rounds = cfg.rounds;
            out.push((gc, pair_seed(root_seed, g)));
        }
    }
    Ok(out)
}

/// Plays a whole batch in parallel; the result does not depend on the
/// thread count.
pub fn run_batch(cfg: &BatchConfig, root_seed: u64) -> Result<Vec<GameLog>, SimError> {
    run_batch_with(cfg, root_seed, corpus())
}

/// `run_batch` replaying `corpus` at the random-message level.
pub fn run_batch_with(
    cfg: &BatchConfig,
    root_seed: u64,
    corpus: &[CorpusRecord],
) -> Result<Vec<GameLog>, SimError> {
    batch_configs(cfg, root_seed)?
        .par_iter()
        .map(|(gc, seed)| run_game_with(gc, *seed, corpus))
        .collect()
}

/// How often each power was given a talking seat.
pub fn talk_counts(logs: &[GameLog]) -> BTreeMap<Power, usize> {
    let mut out: BTreeMap<Power, usize> = Power::ALL.into_iter().map(|p| (p, 0)).collect();
    for l in logs {
        for p in l.talkers() {
            *out.get_mut(&p).unwrap() += 1;
        }
    }
    out
}
