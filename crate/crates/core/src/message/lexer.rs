//! Tokens over normalized message text, with provinces and powers tagged.

use std::ops::Range;

use crate::game::{Coast, Loc, Map, Power, Prov};

#[derive(Debug, Clone, PartialEq, Eq)]
pub(crate) enum Tk {
    /// Lower-cased word.
    Word(String),
    /// Province (with coast if given) and its surface form.
    Place(Loc, String),
    Power {
        power: Power,
        possessive: bool,
    },
    /// `->`, `-` or `→` between places.
    Arrow,
    Punct(char),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub(crate) struct Tok {
    pub tk: Tk,
    pub span: Range<usize>,
}

impl Tok {
    pub fn word(&self) -> Option<&str> {
        match &self.tk {
            Tk::Word(w) => Some(w),
            _ => None,
        }
    }

    pub fn is(&self, w: &str) -> bool {
        self.word() == Some(w)
    }

    pub fn place(&self) -> Option<Loc> {
        match &self.tk {
            Tk::Place(l, _) => Some(*l),
            _ => None,
        }
    }

    pub fn is_punct(&self, c: char) -> bool {
        self.tk == Tk::Punct(c)
    }
}

/// Raw lexemes: words (apostrophes and inner hyphens kept, `st.` kept
/// whole), arrows and single punctuation characters.
fn lex(text: &str) -> Vec<(String, Range<usize>)> {
    let cs: Vec<(usize, char)> = text.char_indices().collect();
    let end_of = |k: usize| cs.get(k).map_or(text.len(), |(i, _)| *i);
    let mut out = Vec::new();
    let mut k = 0;
    while k < cs.len() {
        let (i, c) = cs[k];
        if c.is_whitespace() {
            k += 1;
        } else if c.is_alphanumeric() {
            let mut j = k;
            while j < cs.len() {
                let d = cs[j].1;
                let inner = |j: usize| cs.get(j + 1).is_some_and(|(_, n)| n.is_alphanumeric());
                if d.is_alphanumeric() || ((d == '\'' || d == '\u{2019}' || d == '-') && inner(j)) {
                    j += 1;
                } else {
                    break;
                }
            }
            let mut w = text[i..end_of(j)].to_lowercase().replace('\u{2019}', "'");
            if w == "st" && cs.get(j).is_some_and(|(_, d)| *d == '.') {
                w.push('.');
                j += 1;
            }
            out.push((w, i..end_of(j)));
            k = j;
        } else if c == '-' && cs.get(k + 1).is_some_and(|(_, d)| *d == '>') {
            out.push(("->".into(), i..end_of(k + 2)));
            k += 2;
        } else {
            let s = if c == '-' || c == '\u{2192}' {
                "->".to_string()
            } else {
                c.to_string()
            };
            out.push((s, i..end_of(k + 1)));
            k += 1;
        }
    }
    out
}

fn power_word(w: &str) -> Option<Power> {
    if w.len() <= 3 {
        return None;
    }
    Power::from_name(w)
}

/// Lexes and tags `text`. Province names (and aliases) are matched
/// longest first, then country names and adjectives.
pub(crate) fn tokenize(text: &str, map: &Map) -> Vec<Tok> {
    let lexemes = lex(text);
    // split possessives: "germany's" -> "germany", "'s"
    let mut lx: Vec<(String, Range<usize>)> = Vec::with_capacity(lexemes.len());
    for (w, r) in lexemes {
        match w.strip_suffix("'s") {
            Some(base) if !base.is_empty() => {
                let cut = r.start
                    + text[r.clone()]
                        .char_indices()
                        .nth(base.chars().count())
                        .map_or(0, |(i, _)| i);
                lx.push((base.to_string(), r.start..cut));
                lx.push(("'s".into(), cut..r.end));
            }
            _ => lx.push((w, r)),
        }
    }
    let names: Vec<(Vec<String>, Prov)> = map
        .names()
        .iter()
        .map(|(n, p)| (lex(n).into_iter().map(|(w, _)| w).collect(), *p))
        .collect();
    let mut out: Vec<Tok> = Vec::new();
    let mut i = 0;
    while i < lx.len() {
        let best = names
            .iter()
            .filter(|(ws, _)| {
                ws.len() <= lx.len() - i && ws.iter().zip(&lx[i..]).all(|(a, (b, _))| a == b)
            })
            .max_by_key(|(ws, _)| ws.len());
        if let Some((ws, p)) = best {
            let span = lx[i].1.start..lx[i + ws.len() - 1].1.end;
            i += ws.len();
            let mut loc = Loc::new(*p);
            // "(north coast)"
            let w = |k: usize| lx.get(k).map(|(w, _)| w.as_str());
            if w(i) == Some("(") && w(i + 2) == Some("coast") && w(i + 3) == Some(")") {
                if let Some(c) = w(i + 1).and_then(Coast::parse) {
                    if map.get(*p).coasts.contains(&c) {
                        loc = Loc::with_coast(*p, c);
                        i += 4;
                    }
                }
            }
            out.push(Tok {
                tk: Tk::Place(loc, text[span.clone()].to_string()),
                span,
            });
            continue;
        }
        let (w, r) = &lx[i];
        let tk = if let Some(power) = power_word(w) {
            let possessive = lx.get(i + 1).is_some_and(|(n, _)| n == "'s");
            if possessive {
                i += 1;
            }
            Tk::Power { power, possessive }
        } else if w == "->" {
            Tk::Arrow
        } else if w.chars().count() == 1 && !w.chars().next().unwrap().is_alphanumeric() {
            Tk::Punct(w.chars().next().unwrap())
        } else {
            Tk::Word(w.clone())
        };
        let end = if matches!(
            tk,
            Tk::Power {
                possessive: true,
                ..
            }
        ) {
            lx[i].1.end
        } else {
            r.end
        };
        out.push(Tok {
            tk,
            span: r.start..end,
        });
        i += 1;
    }
    out
}
