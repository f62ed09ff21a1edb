//! Pronoun and abbreviation rewriting with offset tracking.

use std::ops::Range;

use serde::{Deserialize, Serialize};

use super::MessageContext;
use crate::game::{Coast, Map, Power, Prov};

/// One replaced span: `orig` in the input, `norm` in the output.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Edit {
    pub orig: Range<usize>,
    pub norm: Range<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Preprocessed {
    pub original: String,
    pub text: String,
    pub edits: Vec<Edit>,
}

impl Preprocessed {
    /// Maps a byte range of the normalized text back onto the input.
    /// Ranges that start or end inside a replacement widen to cover it.
    pub fn to_original(&self, r: Range<usize>) -> Range<usize> {
        self.map_pos(r.start, false)..self.map_pos(r.end, true)
    }

    fn map_pos(&self, p: usize, end: bool) -> usize {
        let mut shift: isize = 0;
        for e in &self.edits {
            if p < e.norm.start || (end && p == e.norm.start) {
                break;
            }
            if p < e.norm.end || (end && p == e.norm.end) {
                return if end { e.orig.end } else { e.orig.start };
            }
            shift = e.orig.end as isize - e.norm.end as isize;
        }
        (p as isize + shift) as usize
    }
}

/// Title-case 3-letter words that are province codes but also plain English.
const CODE_STOPLIST: &[&str] = &[
    "War", "Con", "Gas", "Den", "Par", "Spa", "Pie", "Fin", "Gal", "Bel",
];

fn is_word_char(c: char) -> bool {
    c.is_alphanumeric() || c == '\'' || c == '\u{2019}'
}

/// Word spans of `text`, apostrophes kept inside words.
pub(crate) fn words(text: &str) -> Vec<Range<usize>> {
    let mut out = Vec::new();
    let mut start = None;
    for (i, c) in text.char_indices() {
        match (is_word_char(c), start) {
            (true, None) => start = Some(i),
            (false, Some(s)) => {
                out.push(s..i);
                start = None;
            }
            _ => {}
        }
    }
    if let Some(s) = start {
        out.push(s..text.len());
    }
    out
}

fn pronoun(word: &str, next: Option<&str>, s: Power, r: Power) -> Option<(String, bool)> {
    let w = word.to_lowercase().replace('\u{2019}', "'");
    let (sn, rn) = (s.name(), r.name());
    // the bool says whether the following word was consumed too
    Some(match (w.as_str(), next.map(str::to_lowercase).as_deref()) {
        ("i", Some("am")) => (format!("{sn} is"), true),
        ("you", Some("are")) => (format!("{rn} is"), true),
        ("i'm" | "im", _) => (format!("{sn} is"), false),
        ("i'll", _) => (format!("{sn} will"), false),
        ("i've", _) => (format!("{sn} has"), false),
        ("i'd", _) => (format!("{sn} would"), false),
        ("i" | "me" | "myself", _) => (sn.to_string(), false),
        ("my" | "mine", _) => (format!("{sn}'s"), false),
        ("you're", _) => (format!("{rn} is"), false),
        ("you'll", _) => (format!("{rn} will"), false),
        ("you've", _) => (format!("{rn} has"), false),
        ("you'd", _) => (format!("{rn} would"), false),
        ("you" | "yourself" | "ya", _) => (rn.to_string(), false),
        ("your" | "yours", _) => (format!("{rn}'s"), false),
        _ => return None,
    })
}

/// An alias with two or more capitals is an abbreviation (`StP`, `EC`).
fn abbreviation(map: &Map, word: &str) -> Option<Prov> {
    if word.chars().filter(|c| c.is_uppercase()).count() < 2
        && !(word.len() == 3 && is_titlecase(word))
    {
        return None;
    }
    if word.len() == 3 && word.chars().all(|c| c.is_ascii_alphabetic()) {
        let upper = word.chars().all(|c| c.is_ascii_uppercase());
        if upper || (is_titlecase(word) && !CODE_STOPLIST.contains(&word)) {
            if let Some(p) = Prov::new(word).filter(|p| map.contains(*p)) {
                return Some(p);
            }
        }
    }
    if word.chars().filter(|c| c.is_uppercase()).count() >= 2
        && word.chars().all(|c| c.is_ascii_alphabetic())
    {
        return map
            .resolve_name(word)
            .filter(|p| map.get(*p).aliases.iter().any(|a| a == word));
    }
    None
}

fn is_titlecase(w: &str) -> bool {
    let mut cs = w.chars();
    cs.next().is_some_and(|c| c.is_ascii_uppercase()) && cs.all(|c| c.is_ascii_lowercase())
}

fn power_code(word: &str) -> Option<Power> {
    // ENG is read as the English Channel
    match word {
        "AUS" => Some(Power::Aus),
        "FRA" => Some(Power::Fra),
        "GER" => Some(Power::Ger),
        "ITA" => Some(Power::Ita),
        "RUS" => Some(Power::Rus),
        "TUR" => Some(Power::Tur),
        _ => None,
    }
}

/// Rewrites first and second person pronouns as the sender and recipient
/// names, and province codes and abbreviations as full names. Idempotent.
pub fn preprocess(text: &str, ctx: &MessageContext) -> Preprocessed {
    let map = ctx.state.map();
    let ws = words(text);
    let mut out = String::with_capacity(text.len() + 16);
    let mut edits = Vec::new();
    let mut last = 0;
    let mut i = 0;
    while i < ws.len() {
        let w = &text[ws[i].clone()];
        let next = ws
            .get(i + 1)
            .filter(|n| text[ws[i].end..n.start].trim().is_empty())
            .map(|n| &text[n.clone()]);
        let mut span = ws[i].clone();
        let replacement =
            if let Some((rep, took_next)) = pronoun(w, next, ctx.sender, ctx.recipient) {
                if took_next {
                    span.end = ws[i + 1].end;
                    i += 1;
                }
                Some(rep)
            } else if let Some(p) = abbreviation(map, w) {
                let mut name = map.get(p).name.clone();
                // coast suffix in code form: STP/NC
                let rest = &text[span.end..];
                if let Some(c) = rest.strip_prefix('/').and_then(|r| {
                    let code: String = r.chars().take_while(|c| c.is_ascii_alphabetic()).collect();
                    Coast::parse(&code)
                        .filter(|_| code.len() == 2)
                        .map(|c| (c, code.len()))
                }) {
                    name = format!("{name} ({})", c.0.words());
                    span.end += 1 + c.1;
                    while ws.get(i + 1).is_some_and(|n| n.start < span.end) {
                        i += 1;
                    }
                }
                Some(name)
            } else {
                power_code(w).map(|p| p.name().to_string())
            };
        if let Some(rep) = replacement {
            out.push_str(&text[last..span.start]);
            let start = out.len();
            out.push_str(&rep);
            edits.push(Edit {
                orig: span.clone(),
                norm: start..out.len(),
            });
            last = span.end;
        }
        i += 1;
    }
    out.push_str(&text[last..]);
    Preprocessed {
        original: text.to_string(),
        text: out,
        edits,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::game::GameState;

    fn ctx(s: Power, r: Power) -> MessageContext {
        MessageContext::new(s, r, GameState::initial(Map::standard())).unwrap()
    }

    #[test]
    fn pronouns_become_powers() {
        let p = preprocess("I will support you there", &ctx(Power::Eng, Power::Ger));
        assert_eq!(p.text, "England will support Germany there");
    }

    #[test]
    fn codes_become_names() {
        let c = ctx(Power::Eng, Power::Ger);
        assert_eq!(preprocess("SWE", &c).text, "Sweden");
        assert_eq!(
            preprocess("take StP and Hel", &c).text,
            "take St Petersburg and Helgoland Bight"
        );
        assert_eq!(
            preprocess("F STP/SC - BOT", &c).text,
            "F St Petersburg (south coast) - Gulf of Bothnia"
        );
        assert_eq!(preprocess("War is coming", &c).text, "War is coming");
    }

    #[test]
    fn plain_text_unchanged() {
        let c = ctx(Power::Fra, Power::Ger);
        let p = preprocess("How are things in Burgundy today?", &c);
        assert_eq!(p.text, "How are things in Burgundy today?");
        assert!(p.edits.is_empty());
    }

    #[test]
    fn offsets_map_back() {
        let c = ctx(Power::Eng, Power::Ger);
        let t = "You can steal STP from Russia if you're in SWE next turn.";
        let p = preprocess(t, &c);
        let at = p.text.find("Sweden").unwrap();
        let r = p.to_original(at..at + "Sweden".len());
        assert_eq!(&t[r], "SWE");
        let at = p.text.find("from").unwrap();
        assert_eq!(&t[p.to_original(at..at + 4)], "from");
    }

    #[test]
    fn idempotent_on_examples() {
        let c = ctx(Power::Tur, Power::Ita);
        for t in [
            "I'm in, you're great",
            "If you retreat from SER into BUD, then I'm in",
            "my StP fleet",
        ] {
            let once = preprocess(t, &c).text;
            assert_eq!(preprocess(&once, &c).text, once);
        }
    }
}
