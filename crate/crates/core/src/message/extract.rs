//! Pattern grammar from normalized English to communicative acts.
//!
//! Works clause by clause: find an action trigger, look back for its
//! subject, read arguments forward up to the next trigger or clause break.

use std::ops::Range;

use super::action::{Action, Place, UnitSpec};
use super::lexer::{tokenize, Tk, Tok};
use super::preprocess::preprocess;
use super::{ActKind, CommunicativeAct, MessageContext};
use crate::game::{Power, UnitKind};
use crate::graph::IntentGraph;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Trig {
    Move,
    /// "is in Sweden": being somewhere next turn means moving there.
    BeIn,
    Hold,
    Support,
    Convoy,
    Build,
    Disband,
    Retreat,
    Ally,
    Dmz,
    /// "do that": accepts the pending proposal.
    DoThat,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Subject {
    Power(Power),
    We,
}

const DETERMINERS: &[&str] = &[
    "a", "an", "the", "that", "this", "our", "his", "her", "their", "any", "some", "with", "of",
    "for",
];
const BREAKS: &[&str] = &[
    "and", "but", "because", "so", "while", "then", "if", "unless", "provided", "assuming",
    "although", "though", "or",
];
const NEGATIONS: &[&str] = &["not", "never", "cannot", "no", "neither", "nor"];
const AGREE: &[&str] = &[
    "sure",
    "yes",
    "yeah",
    "yep",
    "yup",
    "ok",
    "okay",
    "agreed",
    "agree",
    "deal",
    "absolutely",
    "definitely",
    "certainly",
    "fine",
    "alright",
];
const QUESTION_MODALS: &[&str] = &["can", "could", "would", "will", "shall"];
/// Adverbs allowed before an imperative verb.
const PRE_IMPERATIVE: &[&str] = &[
    "just", "please", "probably", "maybe", "perhaps", "also", "then", "so", "now",
];

fn is_break(t: &Tok) -> bool {
    matches!(t.tk, Tk::Punct(',' | ';' | ':' | '(' | ')'))
        || t.word().is_some_and(|w| BREAKS.contains(&w))
}

fn negated(w: &str) -> bool {
    NEGATIONS.contains(&w) || w.ends_with("n't")
}

fn word_at(toks: &[Tok], i: usize) -> Option<&str> {
    toks.get(i).and_then(|t| t.word())
}

/// Trigger at `i` and how many tokens it spans.
fn trigger_at(toks: &[Tok], i: usize) -> Option<(Trig, usize)> {
    let w = word_at(toks, i)?;
    let next = toks.get(i + 1);
    let next_w = word_at(toks, i + 1);
    let next_place = next.is_some_and(|t| t.place().is_some());
    let noun_use = i > 0
        && (word_at(toks, i - 1).is_some_and(|p| DETERMINERS.contains(&p))
            || matches!(
                toks[i - 1].tk,
                Tk::Power {
                    possessive: true,
                    ..
                }
            ));
    let t = match w {
        "move" | "moves" | "moving" | "moved" | "bump" | "bumping" | "bounce" | "bouncing"
        | "enter" | "entering" | "march" | "marching"
            if !noun_use =>
        {
            Trig::Move
        }
        "take" | "taking" | "steal" | "stealing" | "grab" | "grabbing" | "attack" | "attacking"
            if next_place || next_w.is_some_and(|n| ["into", "on", "it", "there"].contains(&n)) =>
        {
            Trig::Move
        }
        "get" | "getting" | "go" | "goes" | "going" | "head" | "heading"
            if next_place
                || next_w.is_some_and(|n| ["to", "into", "for", "it", "there"].contains(&n)) =>
        {
            // "going to <verb>" is a future marker, not a move
            if next_w == Some("to")
                && !toks
                    .get(i + 2)
                    .is_some_and(|t| t.place().is_some() || t.is("there"))
            {
                return None;
            }
            Trig::Move
        }
        "is" | "are" | "am" | "be"
            if next_w == Some("in") && toks.get(i + 2).is_some_and(|t| t.place().is_some()) =>
        {
            return Some((Trig::BeIn, 2));
        }
        "hold" | "holds" | "holding" | "stay" | "stays" | "staying" | "remain" | "remaining"
            if !noun_use =>
        {
            Trig::Hold
        }
        "support" | "supports" | "supporting" if !noun_use => Trig::Support,
        "convoy" | "convoys" | "convoying" | "transport" | "ferry" if !noun_use => Trig::Convoy,
        "build" | "builds" | "building" if !noun_use => Trig::Build,
        "disband" | "disbanding" => Trig::Disband,
        "retreat" | "retreats" | "retreating" if !noun_use => Trig::Retreat,
        "ally" | "allies" | "alliance" => Trig::Ally,
        "team" if next_w == Some("up") => return Some((Trig::Ally, 2)),
        "work" | "working" | "works" if next_w.is_some_and(|n| n == "together" || n == "with") => {
            return Some((Trig::Ally, 2))
        }
        "dmz" | "dmzing" | "demilitarize" | "demilitarise" | "demilitarizing" => Trig::Dmz,
        "keep"
            if next_place
                && word_at(toks, i + 2).is_some_and(|c| {
                    ["clear", "empty", "free", "open", "demilitarized"].contains(&c)
                }) =>
        {
            Trig::Dmz
        }
        "do" if next_w.is_some_and(|n| ["that", "it", "this"].contains(&n)) => {
            return Some((Trig::DoThat, 2))
        }
        _ => return None,
    };
    Some((t, 1))
}

struct Sentence {
    toks: Range<usize>,
    question: bool,
}

fn sentences(text: &str, toks: &[Tok]) -> Vec<Sentence> {
    let mut out = Vec::new();
    let mut start = 0;
    for (i, t) in toks.iter().enumerate() {
        let newline_after = toks
            .get(i + 1)
            .is_some_and(|n| text[t.span.end..n.span.start].contains('\n'));
        let end = matches!(t.tk, Tk::Punct('.' | '!' | '?' | ';'));
        if end || newline_after || i + 1 == toks.len() {
            if start <= i {
                out.push(Sentence {
                    toks: start..i + 1,
                    question: t.is_punct('?'),
                });
            }
            start = i + 1;
        }
    }
    out
}

/// Where the conditional clause of a sentence sits, if it has one.
fn condition_split(s: &[Tok]) -> Option<(Range<usize>, Range<usize>)> {
    let at = s.iter().enumerate().find_map(|(i, t)| match t.word() {
        Some("if" | "unless" | "provided" | "assuming") => Some((i, 1)),
        Some("as") if word_at(s, i + 1) == Some("long") && word_at(s, i + 2) == Some("as") => {
            Some((i, 3))
        }
        _ => None,
    })?;
    let (c, len) = at;
    let lead = s[..c].iter().all(|t| {
        t.word()
            .is_some_and(|w| AGREE.contains(&w) || w == "and" || w == "but")
            || t.is_punct(',')
    });
    if lead {
        // "If X, (then) Y"
        let end = (c + len..s.len())
            .find(|&j| s[j].is_punct(',') || s[j].is("then"))
            .unwrap_or(s.len());
        Some((c + len..end, end..s.len()))
    } else {
        Some((c + len..s.len(), 0..c))
    }
}

struct Found {
    trig: Trig,
    at: usize,
    len: usize,
}

struct Parser<'a> {
    ctx: &'a MessageContext,
    toks: &'a [Tok],
}

impl Parser<'_> {
    fn clause_start(&self, lo: usize, i: usize) -> usize {
        (lo..i)
            .rev()
            .find(|&j| is_break(&self.toks[j]))
            .map_or(lo, |j| j + 1)
    }

    fn subject(&self, lo: usize, at: usize) -> Option<Subject> {
        let start = self.clause_start(lo, at);
        (start..at).rev().find_map(|j| match &self.toks[j].tk {
            Tk::Power {
                power,
                possessive: false,
            } => Some(Subject::Power(*power)),
            Tk::Word(w) if w == "we" => Some(Subject::We),
            Tk::Word(w) if w == "let" && word_at(self.toks, j + 1) == Some("'s") => {
                Some(Subject::We)
            }
            _ => None,
        })
    }

    fn is_negated(&self, lo: usize, at: usize) -> bool {
        let start = self.clause_start(lo, at);
        (start..at).any(|j| self.toks[j].word().is_some_and(negated))
    }

    fn is_clause_initial(&self, lo: usize, at: usize) -> bool {
        let start = self.clause_start(lo, at);
        (start..at).all(|j| {
            self.toks[j]
                .word()
                .is_some_and(|w| PRE_IMPERATIVE.contains(&w) || AGREE.contains(&w))
        })
    }

    /// Last place mentioned before token `i`, falling back to the
    /// conversation so far.
    fn last_place(&self, i: usize) -> Option<Place> {
        self.toks[..i]
            .iter()
            .rev()
            .find_map(|t| match &t.tk {
                Tk::Place(l, s) => Some(Place::new(*l, s.clone())),
                _ => None,
            })
            .or_else(|| {
                self.ctx
                    .history
                    .iter()
                    .rev()
                    .find_map(|a| match a.action(self.ctx.state.map()) {
                        Some(
                            Action::Move { dest, .. }
                            | Action::Retreat { dest, .. }
                            | Action::Support { dest, .. }
                            | Action::Convoy { dest, .. },
                        ) => dest,
                        _ => None,
                    })
            })
    }

    /// Optional determiner, power, unit kind, and "in/at <place>".
    fn unit_phrase(&self, mut j: usize, end: usize) -> (UnitSpec, usize) {
        let mut u = UnitSpec::default();
        while j < end {
            match &self.toks[j].tk {
                Tk::Word(w) if ["the", "a", "an", "our"].contains(&w.as_str()) => {}
                Tk::Power { power, .. } if u.nation.is_none() && u.kind.is_none() => {
                    u.nation = Some(*power)
                }
                Tk::Word(w) if u.kind.is_none() && (w == "army" || w == "fleet") => {
                    u.kind = UnitKind::parse(w)
                }
                Tk::Word(w) if w == "unit" || w == "move" || w == "'s" => {}
                Tk::Word(w) if (w == "in" || w == "at") && u.place.is_none() => {
                    match self.toks.get(j + 1).map(|t| &t.tk) {
                        Some(Tk::Place(l, s)) if j + 1 < end => {
                            u.place = Some(Place::new(*l, s.clone()));
                            j += 1;
                        }
                        _ => break,
                    }
                }
                _ => break,
            }
            j += 1;
        }
        (u, j)
    }

    fn prep_before(&self, j: usize, lo: usize) -> Option<&str> {
        let mut k = j;
        while k > lo {
            k -= 1;
            match &self.toks[k].tk {
                Tk::Word(w) if w == "the" => continue,
                Tk::Word(w) if w == "of" && k > lo && self.toks[k - 1].is("out") => {
                    return Some("from")
                }
                Tk::Word(w) => return Some(w),
                Tk::Arrow => return Some("to"),
                _ => return None,
            }
        }
        None
    }

    fn args_end(&self, from: usize, hi: usize, next_trigger: usize) -> usize {
        (from..hi.min(next_trigger))
            .find(|&j| {
                let t = &self.toks[j];
                (t.is_punct(',') && !word_at(self.toks, j + 1).is_some_and(|w| w == "with"))
                    || matches!(t.tk, Tk::Punct(';' | ':'))
                    || t.word().is_some_and(|w| BREAKS.contains(&w) && w != "then")
            })
            .unwrap_or(hi.min(next_trigger))
    }

    fn move_args(&self, trig: Trig, from: usize, end: usize) -> (UnitSpec, Option<Place>) {
        let mut unit = UnitSpec::default();
        let (mut loc, mut dest, mut bare): (Option<Place>, Option<Place>, Vec<Place>) =
            (None, None, Vec::new());
        if trig == Trig::BeIn {
            if let Some(Tk::Place(l, s)) = self.toks.get(from.saturating_sub(0)).map(|t| &t.tk) {
                dest = Some(Place::new(*l, s.clone()));
            }
        }
        for j in from..end {
            match &self.toks[j].tk {
                Tk::Power { power, .. } if unit.nation.is_none() => {
                    let p = self.prep_before(j, from);
                    if !matches!(p, Some("from" | "against" | "with" | "of" | "for" | "by")) {
                        unit.nation = Some(*power);
                    }
                }
                Tk::Word(w) if (w == "army" || w == "fleet") && unit.kind.is_none() => {
                    unit.kind = UnitKind::parse(w)
                }
                Tk::Word(w) if (w == "there" || w == "it") && dest.is_none() => {
                    dest = self.last_place(from.saturating_sub(1))
                }
                Tk::Place(l, s) => {
                    let p = Place::new(*l, s.clone());
                    match self.prep_before(j, from) {
                        Some("in" | "at" | "from") if loc.is_none() => loc = Some(p),
                        Some("to" | "into" | "towards" | "toward" | "on" | "onto" | "for")
                            if dest.is_none() =>
                        {
                            dest = Some(p)
                        }
                        _ if j == from && trig == Trig::BeIn => {}
                        _ => bare.push(p),
                    }
                }
                _ => {}
            }
        }
        let mut bare = bare.into_iter();
        if dest.is_none() {
            dest = bare.next();
        }
        if loc.is_none() {
            loc = bare.next();
        }
        if loc.as_ref().map(|l| l.loc.prov) == dest.as_ref().map(|d| d.loc.prov) {
            loc = None;
        }
        unit.place = loc;
        (unit, dest)
    }

    fn support_args(&self, from: usize, end: usize) -> (UnitSpec, UnitSpec, Option<Place>) {
        let (target, mut j) = self.unit_phrase(from, end);
        let mut supporter = UnitSpec::default();
        let mut dest = None;
        while j < end {
            match &self.toks[j].tk {
                Tk::Word(w) if w == "with" => {
                    let (s, k) = self.unit_phrase(j + 1, end);
                    supporter = s;
                    j = k;
                    continue;
                }
                Tk::Word(w) if (w == "there" || w == "it") && dest.is_none() => {
                    dest = self.last_place(from)
                }
                Tk::Place(l, s) => {
                    let p = Place::new(*l, s.clone());
                    match self.prep_before(j, from) {
                        Some("from" | "in" | "at") if supporter.place.is_none() => {
                            supporter.place = Some(p)
                        }
                        _ if dest.is_none() => dest = Some(p),
                        _ => {}
                    }
                }
                _ => {}
            }
            j += 1;
        }
        (supporter, target, dest)
    }

    fn first_place(&self, from: usize, end: usize) -> Option<Place> {
        self.toks[from..end].iter().find_map(|t| match &t.tk {
            Tk::Place(l, s) => Some(Place::new(*l, s.clone())),
            _ => None,
        })
    }

    fn action(&self, f: &Found, subject: Option<Subject>, end: usize) -> Option<Action> {
        let from = f.at + f.len;
        let nation = match subject {
            Some(Subject::Power(p)) => Some(p),
            Some(Subject::We) => Some(self.ctx.sender),
            None => None,
        };
        let with_nation = |mut u: UnitSpec| {
            if u.nation.is_none() {
                u.nation = nation;
            }
            u
        };
        Some(match f.trig {
            Trig::Move | Trig::BeIn | Trig::Retreat => {
                let start = if f.trig == Trig::BeIn { f.at + 2 } else { from };
                let (unit, dest) = self.move_args(f.trig, start, end);
                let unit = with_nation(unit);
                if f.trig == Trig::Retreat {
                    Action::Retreat { unit, dest }
                } else {
                    Action::Move { unit, dest }
                }
            }
            Trig::Hold => {
                let (mut unit, _) = self.unit_phrase(from, end);
                if unit.place.is_none() {
                    unit.place = self.first_place(from, end);
                }
                Action::Hold {
                    unit: with_nation(unit),
                }
            }
            Trig::Support => {
                let (s, target, dest) = self.support_args(from, end);
                Action::Support {
                    supporter: with_nation(s),
                    target,
                    dest,
                }
            }
            Trig::Convoy => {
                let (fleet, mut army, dest) = self.support_args(from, end);
                if army.kind.is_none() {
                    army.kind = Some(UnitKind::Army);
                }
                let mut fleet = with_nation(fleet);
                fleet.kind.get_or_insert(UnitKind::Fleet);
                Action::Convoy { fleet, army, dest }
            }
            Trig::Build => {
                let kind = self.toks[from..end].iter().find_map(|t| {
                    t.word()
                        .filter(|w| *w == "army" || *w == "fleet")
                        .and_then(UnitKind::parse)
                });
                Action::Build {
                    nation,
                    kind,
                    at: self.first_place(from, end),
                }
            }
            Trig::Disband => {
                let (unit, _) = self.unit_phrase(from, end);
                Action::Disband {
                    unit: with_nation(unit),
                }
            }
            Trig::Ally => {
                let partner = (from..end).find_map(|j| match self.toks[j].tk {
                    Tk::Power { power, .. }
                        if Some(power) != nation
                            && self.prep_before(j, from) != Some("against") =>
                    {
                        Some(power)
                    }
                    _ => None,
                });
                let partner = partner.or(if nation == Some(self.ctx.sender) {
                    Some(self.ctx.recipient)
                } else if nation == Some(self.ctx.recipient) {
                    Some(self.ctx.sender)
                } else {
                    None
                });
                Action::Ally { nation, partner }
            }
            Trig::Dmz => Action::Demilitarize {
                place: self.first_place(from, end),
            },
            Trig::DoThat => return None,
        })
    }

    fn pending_proposal<'b>(
        &'b self,
        earlier: &'b [CommunicativeAct],
    ) -> Option<&'b CommunicativeAct> {
        self.ctx.history.iter().chain(earlier).rev().find(|a| {
            a.kind == ActKind::Proposal
                && a.sender == self.ctx.recipient
                && a.actor == self.ctx.sender
        })
    }
}

/// Grafts `sub` under `parent` with fresh variable names.
pub(crate) fn attach(g: &mut IntentGraph, parent: &str, role: &str, sub: &IntentGraph) {
    let Some(root) = sub.root() else { return };
    let mut names = std::collections::BTreeMap::new();
    for (v, c) in sub.nodes() {
        let fresh = g.fresh_var(c);
        g.add_node(&fresh, c);
        names.insert(v.to_string(), fresh);
    }
    for e in sub.edges() {
        let target = match &e.target {
            crate::graph::Target::Var(t) => crate::graph::Target::Var(names[t].clone()),
            t => t.clone(),
        };
        g.add_edge(&names[&e.source], &e.role, target);
    }
    g.add_edge(parent, role, crate::graph::Target::Var(names[root].clone()));
}

fn kind_for(subject: Option<Subject>, ctx: &MessageContext) -> (ActKind, Power) {
    match subject {
        Some(Subject::We) => (ActKind::Commitment, ctx.sender),
        Some(Subject::Power(p)) if p == ctx.sender => (ActKind::Commitment, ctx.sender),
        Some(Subject::Power(p)) if p == ctx.recipient => (ActKind::Proposal, ctx.recipient),
        Some(Subject::Power(p)) => (ActKind::ThirdPartyReport, p),
        None => (ActKind::Commitment, ctx.sender),
    }
}

/// Acts in one message, in text order, ungrounded. Non-strategic chat
/// yields nothing.
pub fn extract_acts(text: &str, ctx: &MessageContext) -> Vec<CommunicativeAct> {
    let pre = preprocess(text, ctx);
    let toks = tokenize(&pre.text, ctx.state.map());
    let p = Parser { ctx, toks: &toks };
    let mut acts: Vec<CommunicativeAct> = Vec::new();
    let mut agreed = false;
    for s in sentences(&pre.text, &toks) {
        let lo = s.toks.start;
        let hi = s.toks.end;
        let sent = &toks[s.toks.clone()];
        let span = pre.to_original(sent[0].span.start..sent[sent.len() - 1].span.end);
        let make =
            |kind: ActKind, actor: Power, graph: IntentGraph, conditional: bool| CommunicativeAct {
                message_id: ctx.message_id.clone(),
                kind,
                sender: ctx.sender,
                recipient: ctx.recipient,
                actor,
                graph,
                conditional,
                span: span.clone(),
                grounded: Default::default(),
            };
        let (cond, main) = match condition_split(sent) {
            Some((c, m)) => (Some(c.start + lo..c.end + lo), m.start + lo..m.end + lo),
            None => (None, lo..hi),
        };
        let mut found = Vec::new();
        let mut i = lo;
        while i < hi {
            if let Some((trig, len)) = trigger_at(&toks, i) {
                found.push(Found { trig, at: i, len });
                i += len;
            } else {
                i += 1;
            }
        }
        let first_word = sent.iter().find_map(|t| t.word());
        let lead_word = sent
            .iter()
            .filter_map(|t| t.word())
            .find(|w| !PRE_IMPERATIVE.contains(w));
        let modal_question = s.question && lead_word.is_some_and(|w| QUESTION_MODALS.contains(&w));
        if found.is_empty() {
            let agreeing = first_word.is_some_and(|w| AGREE.contains(&w))
                || (first_word == Some("of") && word_at(sent, 1) == Some("course"))
                || (first_word == Some("sounds") && word_at(sent, 1) == Some("good"))
                || (first_word == Some("will") && word_at(sent, 1) == Some("do"));
            if agreeing && !agreed && !s.question {
                if let Some(prop) = p.pending_proposal(&acts) {
                    let a = make(
                        ActKind::Agreement,
                        ctx.sender,
                        prop.graph.clone(),
                        prop.conditional,
                    );
                    acts.push(a);
                    agreed = true;
                }
            }
            continue;
        }
        let mut cond_graph: Option<IntentGraph> = None;
        let mut cond_acts = Vec::new();
        let mut main_acts = Vec::new();
        let mut prev_subject: Option<Subject> = None;
        let mut prev_explicit: Option<Subject> = None;
        for (k, f) in found.iter().enumerate() {
            let in_cond = cond.as_ref().is_some_and(|c| c.contains(&f.at));
            let region = if in_cond {
                cond.clone().unwrap()
            } else {
                main.clone()
            };
            if !region.contains(&f.at) {
                continue;
            }
            if p.is_negated(region.start, f.at) {
                continue;
            }
            let explicit = p.subject(region.start, f.at).or(prev_explicit);
            prev_explicit = explicit;
            let subject = explicit.or(prev_subject).or_else(|| {
                let w = toks[f.at].word().unwrap_or("");
                if !w.ends_with("ing") && p.is_clause_initial(region.start, f.at) {
                    Some(Subject::Power(ctx.recipient))
                } else {
                    None
                }
            });
            prev_subject = subject;
            let (mut kind, mut actor) = kind_for(subject, ctx);
            if s.question {
                if modal_question && matches!(subject, Some(Subject::We)) {
                    (kind, actor) = (ActKind::Proposal, ctx.recipient);
                } else if !(modal_question && kind == ActKind::Proposal) {
                    continue;
                }
            }
            if f.trig == Trig::DoThat {
                if let Some(prop) = p.pending_proposal(&acts) {
                    let g = prop.graph.clone();
                    if in_cond {
                        cond_graph.get_or_insert(g);
                    } else {
                        main_acts.push((ActKind::Agreement, ctx.sender, g));
                        agreed = true;
                    }
                }
                continue;
            }
            let next_trigger = found.get(k + 1).map_or(hi, |n| n.at);
            let end = p.args_end(f.at + f.len, region.end, next_trigger);
            // an inferred subject carries no nationality
            let Some(action) = p.action(f, explicit, end) else {
                continue;
            };
            let g = action.to_graph();
            if in_cond {
                cond_graph.get_or_insert_with(|| g.clone());
                if kind == ActKind::Proposal {
                    cond_acts.push((kind, actor, g));
                }
            } else {
                main_acts.push((kind, actor, g));
            }
        }
        let conditional = cond.is_some();
        let mut out: Vec<(usize, CommunicativeAct)> = Vec::new();
        for (kind, actor, mut g) in main_acts {
            if conditional {
                let root = g.root().unwrap().to_string();
                match &cond_graph {
                    Some(cg) => attach(&mut g, &root, "condition", cg),
                    None => {
                        g.add_child(&root, "condition", "thing");
                    }
                }
            }
            out.push((main.start, make(kind, actor, g, conditional)));
        }
        for (kind, actor, g) in cond_acts {
            out.push((cond.as_ref().unwrap().start, make(kind, actor, g, false)));
        }
        out.sort_by_key(|(at, _)| *at);
        acts.extend(out.into_iter().map(|(_, a)| a));
    }
    acts
}
