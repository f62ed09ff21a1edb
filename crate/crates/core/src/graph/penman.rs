//! PENMAN text form: `(m / move-01 :ARG1 (u / unit) :ARG2 (p / province))`.

use std::cmp::Ordering;
use std::collections::BTreeSet;

use super::{GraphError, IntentGraph, Target};

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Open,
    Close,
    Slash,
    Role(String),
    Str(String),
    Sym(String),
}

fn tokenize(text: &str) -> Result<Vec<(usize, Tok)>, GraphError> {
    let mut out = Vec::new();
    let bytes: Vec<(usize, char)> = text.char_indices().collect();
    let mut i = 0;
    while i < bytes.len() {
        let (pos, c) = bytes[i];
        match c {
            c if c.is_whitespace() => i += 1,
            '#' if bytes[..i]
                .iter()
                .rev()
                .take_while(|(_, c)| *c != '\n')
                .all(|(_, c)| c.is_whitespace()) =>
            {
                // metadata comment line
                while i < bytes.len() && bytes[i].1 != '\n' {
                    i += 1;
                }
            }
            '(' => {
                out.push((pos, Tok::Open));
                i += 1;
            }
            ')' => {
                out.push((pos, Tok::Close));
                i += 1;
            }
            '/' => {
                out.push((pos, Tok::Slash));
                i += 1;
            }
            '"' => {
                let mut s = String::new();
                i += 1;
                loop {
                    match bytes.get(i) {
                        None => return Err(GraphError::UnbalancedText(pos)),
                        Some((_, '"')) => break,
                        Some((_, '\\')) => {
                            if let Some((_, n)) = bytes.get(i + 1) {
                                s.push(*n);
                            }
                            i += 2;
                        }
                        Some((_, ch)) => {
                            s.push(*ch);
                            i += 1;
                        }
                    }
                }
                i += 1;
                out.push((pos, Tok::Str(s)));
            }
            _ => {
                let start = i;
                while i < bytes.len()
                    && !bytes[i].1.is_whitespace()
                    && !"()\"/".contains(bytes[i].1)
                {
                    i += 1;
                }
                let word: String = bytes[start..i].iter().map(|(_, c)| c).collect();
                match word.strip_prefix(':') {
                    Some(role) if !role.is_empty() => out.push((pos, Tok::Role(role.to_string()))),
                    Some(_) => {
                        return Err(GraphError::Malformed {
                            pos,
                            msg: "empty role".into(),
                        })
                    }
                    None => out.push((pos, Tok::Sym(word))),
                }
            }
        }
    }
    Ok(out)
}

/// Symbols shaped like AMR variables (`m`, `n2`, `ab3`); anything else is a
/// constant.
fn looks_like_var(s: &str) -> bool {
    let letters = s.chars().take_while(|c| c.is_ascii_lowercase()).count();
    (1..=2).contains(&letters) && s[letters..].chars().all(|c| c.is_ascii_digit())
}

struct Parser {
    toks: Vec<(usize, Tok)>,
    pos: usize,
    end: usize,
    g: IntentGraph,
}

impl Parser {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|(_, t)| t)
    }

    fn offset(&self) -> usize {
        self.toks.get(self.pos).map(|(p, _)| *p).unwrap_or(self.end)
    }

    fn bump(&mut self) -> Option<Tok> {
        let t = self.toks.get(self.pos).map(|(_, t)| t.clone());
        self.pos += 1;
        t
    }

    fn malformed(&self, msg: &str) -> GraphError {
        GraphError::Malformed {
            pos: self.offset(),
            msg: msg.to_string(),
        }
    }

    /// Parses `( var / concept role* )` after the opening paren was seen.
    fn node(&mut self, open_at: usize) -> Result<String, GraphError> {
        let var = match self.bump() {
            Some(Tok::Sym(v)) => v,
            None => return Err(GraphError::UnbalancedText(open_at)),
            _ => return Err(self.malformed("expected a variable")),
        };
        if self.bump() != Some(Tok::Slash) {
            return Err(self.malformed("expected '/'"));
        }
        let concept = match self.bump() {
            Some(Tok::Sym(c)) => c,
            Some(Tok::Str(c)) => c,
            None => return Err(GraphError::UnbalancedText(open_at)),
            _ => return Err(self.malformed("expected a concept")),
        };
        if self.g.has_var(&var) {
            return Err(GraphError::DuplicateVariable(var));
        }
        self.g.add_node(&var, &concept);
        loop {
            match self.peek() {
                None => return Err(GraphError::UnbalancedText(open_at)),
                Some(Tok::Close) => {
                    self.pos += 1;
                    return Ok(var);
                }
                Some(Tok::Role(_)) => {
                    let Some(Tok::Role(role)) = self.bump() else {
                        unreachable!()
                    };
                    let at = self.offset();
                    match self.bump() {
                        Some(Tok::Open) => {
                            let child = self.node(at)?;
                            self.g.add_edge(&var, &role, Target::Var(child));
                        }
                        Some(Tok::Str(s)) => self.g.add_edge(&var, &role, Target::Str(s)),
                        // resolved once every declaration has been seen
                        Some(Tok::Sym(s)) => self.g.add_edge(&var, &role, Target::Sym(s)),
                        None => return Err(GraphError::UnbalancedText(open_at)),
                        _ => return Err(self.malformed("expected a role value")),
                    }
                }
                _ => return Err(self.malformed("expected a role or ')'")),
            }
        }
    }
}

/// Parses one graph. `()` is the empty graph.
pub fn parse_graph_text(text: &str) -> Result<IntentGraph, GraphError> {
    let toks = tokenize(text)?;
    if toks
        .iter()
        .map(|(_, t)| t)
        .eq([Tok::Open, Tok::Close].iter())
    {
        return Ok(IntentGraph::empty());
    }
    let mut p = Parser {
        toks,
        pos: 0,
        end: text.len(),
        g: IntentGraph::empty(),
    };
    match p.bump() {
        Some(Tok::Open) => {}
        None => return Err(p.malformed("no graph")),
        Some(Tok::Close) => return Err(GraphError::UnbalancedText(0)),
        _ => return Err(p.malformed("expected '('")),
    }
    let start = p.toks[0].0;
    p.node(start)?;
    if p.pos < p.toks.len() {
        return Err(match p.peek() {
            Some(Tok::Close) => GraphError::UnbalancedText(p.offset()),
            _ => p.malformed("text after the graph"),
        });
    }
    // Bare symbols naming a declared variable are re-entrant edges; other
    // variable-shaped symbols dangle.
    let declared: BTreeSet<String> = p.g.nodes().map(|(v, _)| v.to_string()).collect();
    let mut g = p.g;
    let mut edges = g.edges.clone();
    for e in edges.iter_mut() {
        if let Target::Sym(s) = &e.target {
            if declared.contains(s) {
                e.target = Target::Var(s.clone());
            } else if looks_like_var(s) {
                return Err(GraphError::DanglingReference(s.clone()));
            }
        }
    }
    g.edges = edges;
    Ok(g)
}

/// Parses blank-line separated graphs, one result per block.
pub fn parse_graphs(text: &str) -> Vec<Result<IntentGraph, GraphError>> {
    let mut blocks = Vec::new();
    let mut cur = String::new();
    for line in text.lines() {
        if line.trim().is_empty() {
            if !cur.trim().is_empty() {
                blocks.push(std::mem::take(&mut cur));
            }
            cur.clear();
        } else {
            cur.push_str(line);
            cur.push('\n');
        }
    }
    if !cur.trim().is_empty() {
        blocks.push(cur);
    }
    blocks.iter().map(|b| parse_graph_text(b)).collect()
}

/// ARG0..ARGn first, then the other roles alphabetically (numeric suffixes
/// compared as numbers, so `op2` < `op10`).
pub(crate) fn role_order(a: &str, b: &str) -> Ordering {
    fn key(r: &str) -> (u8, &str, u64, &str) {
        let digits = r.len() - r.trim_end_matches(|c: char| c.is_ascii_digit()).len();
        let (stem, num) = r.split_at(r.len() - digits);
        let n = num.parse().unwrap_or(0);
        if stem == "ARG" && digits > 0 {
            (0, "", n, r)
        } else {
            (1, stem, n, r)
        }
    }
    key(a).cmp(&key(b))
}

fn quote(s: &str) -> String {
    format!("\"{}\"", s.replace('\\', "\\\\").replace('"', "\\\""))
}

fn write_node(
    g: &IntentGraph,
    var: &str,
    level: usize,
    printed: &mut BTreeSet<String>,
    out: &mut String,
) {
    printed.insert(var.to_string());
    out.push('(');
    out.push_str(var);
    out.push_str(" / ");
    out.push_str(g.concept(var).unwrap_or("thing"));
    let mut edges: Vec<_> = g.out(var).collect();
    edges.sort_by(|a, b| role_order(&a.role, &b.role));
    let inline = edges.iter().all(|e| e.target.as_var().is_none());
    for e in edges {
        if inline {
            out.push(' ');
        } else {
            out.push('\n');
            out.push_str(&" ".repeat(4 * (level + 1)));
        }
        out.push(':');
        out.push_str(&e.role);
        out.push(' ');
        match &e.target {
            Target::Var(t) if printed.contains(t) => out.push_str(t),
            Target::Var(t) => write_node(g, t, level + 1, printed, out),
            Target::Str(s) => out.push_str(&quote(s)),
            Target::Sym(s) => out.push_str(s),
        }
    }
    out.push(')');
}

/// Deterministic PENMAN rendering; the empty graph renders as `()`.
pub fn serialize_graph(g: &IntentGraph) -> String {
    let Some(root) = g.root() else {
        return "()".to_string();
    };
    let mut out = String::new();
    write_node(g, root, 0, &mut BTreeSet::new(), &mut out);
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    const FIG_A1: &str = r#"(m / move-01
    :ARG1 (u / unit
        :mod (c2 / country
            :name (n2 / name :op1 "Austria")))
    :ARG2 (p2 / province
        :name (n3 / name :op1 "Brest")))"#;

    const FIG_A2: &str = r#"(m / move-01
    :ARG1 (u / unit
        :location (p2 / province
            :name (n / name :op1 "Romania")))
    :ARG2 (p3 / province
        :name (n3 / name :op1 "Bulgaria")))"#;

    #[test]
    fn figure_a1_parses() {
        let g = parse_graph_text(FIG_A1).unwrap();
        assert_eq!(g.root_concept(), Some("move-01"));
        let u = g.child("m", "ARG1").unwrap();
        let c = g.child(u, "mod").unwrap();
        assert_eq!(g.name_of(c).as_deref(), Some("Austria"));
        let p = g.child("m", "ARG2").unwrap();
        assert_eq!(g.name_of(p).as_deref(), Some("Brest"));
    }

    #[test]
    fn figures_serialize_as_printed() {
        for text in [FIG_A1, FIG_A2] {
            assert_eq!(serialize_graph(&parse_graph_text(text).unwrap()), text);
        }
        let a2 = serialize_graph(&parse_graph_text(FIG_A2).unwrap());
        assert!(a2.find(":location").unwrap() < a2.find(":ARG2").unwrap());
    }

    #[test]
    fn single_node_and_empty() {
        let g = parse_graph_text("(h / hold-03)").unwrap();
        assert_eq!(g.root(), Some("h"));
        assert_eq!(g.node_count(), 1);
        assert_eq!(serialize_graph(&g), "(h / hold-03)");
        assert!(parse_graph_text("  ( ) ").unwrap().is_empty());
        assert_eq!(serialize_graph(&IntentGraph::empty()), "()");
    }

    #[test]
    fn errors() {
        assert!(matches!(
            parse_graph_text("(m / move-01 :ARG1 (u / unit)"),
            Err(GraphError::UnbalancedText(_))
        ));
        assert!(matches!(
            parse_graph_text("(m / move-01))"),
            Err(GraphError::UnbalancedText(_))
        ));
        assert!(matches!(
            parse_graph_text("(m / move-01 :ARG1 (m / unit))"),
            Err(GraphError::DuplicateVariable(v)) if v == "m"
        ));
        assert!(matches!(
            parse_graph_text("(m / move-01 :ARG1 u2)"),
            Err(GraphError::DanglingReference(v)) if v == "u2"
        ));
    }

    #[test]
    fn reentrancy_and_constants() {
        let g = parse_graph_text(
            "(s / support-01 :ARG0 (u / unit) :ARG1 (m / move-01 :ARG1 u) :polarity -)",
        )
        .unwrap();
        assert_eq!(g.edges().len(), 4);
        assert_eq!(g.get("m", "ARG1"), Some(&Target::Var("u".into())));
        assert_eq!(g.get("s", "polarity"), Some(&Target::Sym("-".into())));
        let again = parse_graph_text(&serialize_graph(&g)).unwrap();
        assert_eq!(again, g);
    }

    #[test]
    fn role_ordering() {
        let mut roles = vec!["mod", "ARG2", "op10", "location", "ARG0", "op2", "ARG10"];
        roles.sort_by(|a, b| role_order(a, b));
        assert_eq!(
            roles,
            ["ARG0", "ARG2", "ARG10", "location", "mod", "op2", "op10"]
        );
    }

    #[test]
    fn blocks() {
        let text = format!("{FIG_A1}\n\n# ::id 2\n{FIG_A2}\n\n()\n");
        let gs = parse_graphs(&text);
        assert_eq!(gs.len(), 3);
        assert!(gs.iter().all(Result::is_ok));
    }
}
