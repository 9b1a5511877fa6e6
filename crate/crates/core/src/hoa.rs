//! Reading and writing Rabin automata in HOA v1 text and a native JSON form.

use std::collections::BTreeSet;
use std::fmt::Write as _;
use std::path::Path;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::dra::{Dra, DraError, Guard, RabinPair};

#[derive(Debug, Error)]
pub enum HoaError {
    #[error("line {line}: {msg}")]
    Syntax { line: usize, msg: String },
    #[error("unsupported acceptance condition: {0}")]
    UnsupportedAcceptance(String),
    #[error("transition-based acceptance marks are not supported (line {0})")]
    TransitionAcceptance(usize),
    #[error("unsupported HOA feature: {0}")]
    Unsupported(String),
    #[error(transparent)]
    Automaton(#[from] DraError),
    #[error("invalid JSON automaton: {0}")]
    Json(#[from] serde_json::Error),
    #[error("cannot infer automaton format from {0:?} (expected .hoa or .json)")]
    UnknownFormat(String),
}

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Header(String),
    Ident(String),
    Int(usize),
    Str(String),
    Punct(u8),
    Body,
    End,
}

#[derive(Debug, Clone)]
struct Token {
    tok: Tok,
    start: usize,
    end: usize,
}

struct Lexer<'a> {
    src: &'a str,
}

impl<'a> Lexer<'a> {
    fn line_of(&self, pos: usize) -> usize {
        self.src[..pos.min(self.src.len())].matches('\n').count() + 1
    }

    fn syntax(&self, pos: usize, msg: impl Into<String>) -> HoaError {
        HoaError::Syntax {
            line: self.line_of(pos),
            msg: msg.into(),
        }
    }

    fn tokenize(&self) -> Result<Vec<Token>, HoaError> {
        let b = self.src.as_bytes();
        let mut out = Vec::new();
        let mut i = 0;
        while i < b.len() {
            let c = b[i];
            if c.is_ascii_whitespace() {
                i += 1;
            } else if b[i..].starts_with(b"/*") {
                let mut depth = 0;
                let start = i;
                loop {
                    if i >= b.len() {
                        return Err(self.syntax(start, "unterminated comment"));
                    }
                    if b[i..].starts_with(b"/*") {
                        depth += 1;
                        i += 2;
                    } else if b[i..].starts_with(b"*/") {
                        depth -= 1;
                        i += 2;
                        if depth == 0 {
                            break;
                        }
                    } else {
                        i += 1;
                    }
                }
            } else if c == b'"' {
                let start = i;
                i += 1;
                let mut s = String::new();
                loop {
                    match b.get(i) {
                        None => return Err(self.syntax(start, "unterminated string")),
                        Some(b'"') => {
                            i += 1;
                            break;
                        }
                        Some(b'\\') if i + 1 < b.len() => {
                            s.push(b[i + 1] as char);
                            i += 2;
                        }
                        Some(_) => {
                            let ch = self.src[i..].chars().next().unwrap();
                            s.push(ch);
                            i += ch.len_utf8();
                        }
                    }
                }
                out.push(Token { tok: Tok::Str(s), start, end: i });
            } else if b[i..].starts_with(b"--") {
                let start = i;
                let rest = &self.src[i..];
                let tok = if rest.starts_with("--BODY--") {
                    Tok::Body
                } else if rest.starts_with("--END--") {
                    Tok::End
                } else if rest.starts_with("--ABORT--") {
                    return Err(self.syntax(i, "automaton aborted"));
                } else {
                    return Err(self.syntax(i, "unknown separator"));
                };
                i += if tok == Tok::Body { 8 } else { 7 };
                out.push(Token { tok, start, end: i });
            } else if c.is_ascii_digit() {
                let start = i;
                while i < b.len() && b[i].is_ascii_digit() {
                    i += 1;
                }
                let n = self.src[start..i]
                    .parse()
                    .map_err(|_| self.syntax(start, "integer too large"))?;
                out.push(Token { tok: Tok::Int(n), start, end: i });
            } else if c.is_ascii_alphabetic() || c == b'_' {
                let start = i;
                while i < b.len() && (b[i].is_ascii_alphanumeric() || b[i] == b'_' || b[i] == b'-') {
                    i += 1;
                }
                let word = self.src[start..i].to_string();
                if b.get(i) == Some(&b':') {
                    i += 1;
                    out.push(Token { tok: Tok::Header(word), start, end: i });
                } else {
                    out.push(Token { tok: Tok::Ident(word), start, end: i });
                }
            } else if b"[]{}()!&|@".contains(&c) {
                out.push(Token { tok: Tok::Punct(c), start: i, end: i + 1 });
                i += 1;
            } else {
                return Err(self.syntax(i, format!("unexpected character {:?}", c as char)));
            }
        }
        Ok(out)
    }
}

#[derive(Debug, Clone)]
enum AccExpr {
    True,
    False,
    Fin(usize),
    Inf(usize),
    And(Box<AccExpr>, Box<AccExpr>),
    Or(Box<AccExpr>, Box<AccExpr>),
}

struct AccParser<'t> {
    toks: &'t [Token],
    pos: usize,
}

impl AccParser<'_> {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|t| &t.tok)
    }

    fn expect(&mut self, p: u8) -> Result<(), HoaError> {
        if self.peek() == Some(&Tok::Punct(p)) {
            self.pos += 1;
            Ok(())
        } else {
            Err(HoaError::UnsupportedAcceptance(format!("expected '{}'", p as char)))
        }
    }

    fn or(&mut self) -> Result<AccExpr, HoaError> {
        let mut lhs = self.and()?;
        while self.peek() == Some(&Tok::Punct(b'|')) {
            self.pos += 1;
            lhs = AccExpr::Or(Box::new(lhs), Box::new(self.and()?));
        }
        Ok(lhs)
    }

    fn and(&mut self) -> Result<AccExpr, HoaError> {
        let mut lhs = self.atom()?;
        while self.peek() == Some(&Tok::Punct(b'&')) {
            self.pos += 1;
            lhs = AccExpr::And(Box::new(lhs), Box::new(self.atom()?));
        }
        Ok(lhs)
    }

    fn atom(&mut self) -> Result<AccExpr, HoaError> {
        let tok = self.peek().cloned();
        self.pos += 1;
        match tok {
            Some(Tok::Punct(b'(')) => {
                let e = self.or()?;
                self.expect(b')')?;
                Ok(e)
            }
            Some(Tok::Ident(w)) if w == "t" => Ok(AccExpr::True),
            Some(Tok::Ident(w)) if w == "f" => Ok(AccExpr::False),
            Some(Tok::Ident(w)) if w == "Fin" || w == "Inf" => {
                self.expect(b'(')?;
                if self.peek() == Some(&Tok::Punct(b'!')) {
                    return Err(HoaError::UnsupportedAcceptance(format!(
                        "negated set in {w}(...)"
                    )));
                }
                let set = match self.peek() {
                    Some(Tok::Int(n)) => *n,
                    _ => return Err(HoaError::UnsupportedAcceptance("expected set index".into())),
                };
                self.pos += 1;
                self.expect(b')')?;
                Ok(if w == "Fin" {
                    AccExpr::Fin(set)
                } else {
                    AccExpr::Inf(set)
                })
            }
            other => Err(HoaError::UnsupportedAcceptance(format!(
                "unexpected token {other:?}"
            ))),
        }
    }
}

#[derive(Debug, Clone, Default)]
struct Conj {
    fin: BTreeSet<usize>,
    inf: BTreeSet<usize>,
}

fn to_dnf(e: &AccExpr) -> Vec<Conj> {
    match e {
        AccExpr::True => vec![Conj::default()],
        AccExpr::False => vec![],
        AccExpr::Fin(s) => vec![Conj {
            fin: [*s].into(),
            inf: BTreeSet::new(),
        }],
        AccExpr::Inf(s) => vec![Conj {
            fin: BTreeSet::new(),
            inf: [*s].into(),
        }],
        AccExpr::Or(a, b) => {
            let mut v = to_dnf(a);
            v.extend(to_dnf(b));
            v
        }
        AccExpr::And(a, b) => {
            let (l, r) = (to_dnf(a), to_dnf(b));
            let mut v = Vec::new();
            for x in &l {
                for y in &r {
                    v.push(Conj {
                        fin: x.fin.union(&y.fin).copied().collect(),
                        inf: x.inf.union(&y.inf).copied().collect(),
                    });
                }
            }
            v
        }
    }
}

/// Parses a state-based Rabin automaton from HOA v1 text.
pub fn parse_hoa(text: &str) -> Result<Dra, HoaError> {
    let lex = Lexer { src: text };
    let toks = lex.tokenize()?;
    let mut pos = match (toks.first().map(|t| &t.tok), toks.get(1).map(|t| &t.tok)) {
        (Some(Tok::Header(h)), Some(Tok::Ident(v))) if h == "HOA" && v == "v1" => 2,
        _ => return Err(lex.syntax(0, "expected 'HOA: v1'")),
    };

    let mut n_states: Option<usize> = None;
    let mut start: Option<usize> = None;
    let mut aps: Option<Vec<String>> = None;
    let mut acceptance: Option<(usize, Vec<Conj>)> = None;

    while pos < toks.len() && toks[pos].tok != Tok::Body {
        let Tok::Header(name) = &toks[pos].tok else {
            return Err(lex.syntax(toks[pos].start, "expected a header name"));
        };
        let hpos = toks[pos].start;
        pos += 1;
        let vstart = pos;
        while pos < toks.len() && !matches!(toks[pos].tok, Tok::Header(_) | Tok::Body) {
            pos += 1;
        }
        let vals = &toks[vstart..pos];
        match name.as_str() {
            "States" => match vals {
                [Token { tok: Tok::Int(n), .. }] => n_states = Some(*n),
                _ => return Err(lex.syntax(hpos, "States: expects one integer")),
            },
            "Start" => {
                if start.is_some() {
                    return Err(HoaError::Unsupported("multiple initial states".into()));
                }
                match vals {
                    [Token { tok: Tok::Int(n), .. }] => start = Some(*n),
                    _ => {
                        return Err(HoaError::Unsupported(
                            "initial state conjunctions (alternation)".into(),
                        ))
                    }
                }
            }
            "AP" => {
                let Some(Token { tok: Tok::Int(k), .. }) = vals.first() else {
                    return Err(lex.syntax(hpos, "AP: expects a count"));
                };
                let names: Vec<String> = vals[1..]
                    .iter()
                    .map(|t| match &t.tok {
                        Tok::Str(s) => Ok(s.clone()),
                        _ => Err(lex.syntax(t.start, "AP names must be strings")),
                    })
                    .collect::<Result<_, _>>()?;
                if names.len() != *k {
                    return Err(lex.syntax(hpos, format!("AP: declares {k} names, found {}", names.len())));
                }
                aps = Some(names);
            }
            "Acceptance" => {
                let Some(Token { tok: Tok::Int(k), .. }) = vals.first() else {
                    return Err(lex.syntax(hpos, "Acceptance: expects a set count"));
                };
                let mut p = AccParser { toks: &vals[1..], pos: 0 };
                let expr = p.or()?;
                if p.pos != vals.len() - 1 {
                    return Err(HoaError::UnsupportedAcceptance("trailing tokens".into()));
                }
                acceptance = Some((*k, to_dnf(&expr)));
            }
            "Alias" => return Err(HoaError::Unsupported("aliases".into())),
            _ => {}
        }
    }
    if pos >= toks.len() {
        return Err(lex.syntax(text.len(), "missing --BODY--"));
    }
    pos += 1;

    let start = start.ok_or_else(|| lex.syntax(0, "missing Start:"))?;
    let aps = aps.unwrap_or_default();
    let (n_sets, conjs) = acceptance.ok_or_else(|| lex.syntax(0, "missing Acceptance:"))?;
    for c in &conjs {
        if let Some(&s) = c.fin.iter().chain(&c.inf).find(|&&s| s >= n_sets) {
            return Err(HoaError::UnsupportedAcceptance(format!(
                "set {s} exceeds declared count {n_sets}"
            )));
        }
        if c.inf.len() > 1 {
            return Err(HoaError::UnsupportedAcceptance(
                "conjunction of several Inf terms is not a Rabin pair".into(),
            ));
        }
    }

    let mut edges: Vec<Vec<(Guard, usize)>> = Vec::new();
    let mut state_sets: Vec<BTreeSet<usize>> = Vec::new();
    let mut seen: BTreeSet<usize> = BTreeSet::new();
    let mut current: Option<usize> = None;

    let bracket = |pos: usize| -> Result<(Guard, usize), HoaError> {
        let open = &toks[pos];
        let mut k = pos + 1;
        while k < toks.len() && toks[k].tok != Tok::Punct(b']') {
            k += 1;
        }
        if k >= toks.len() {
            return Err(lex.syntax(open.start, "unterminated label"));
        }
        let g = Guard::parse(&text[open.end..toks[k].start], None).map_err(|e| {
            lex.syntax(open.start, e.to_string())
        })?;
        Ok((g, k + 1))
    };
    let set_list = |pos: usize| -> Result<(BTreeSet<usize>, usize), HoaError> {
        let mut k = pos + 1;
        let mut s = BTreeSet::new();
        loop {
            match toks.get(k).map(|t| &t.tok) {
                Some(Tok::Int(n)) => {
                    s.insert(*n);
                    k += 1;
                }
                Some(Tok::Punct(b'}')) => return Ok((s, k + 1)),
                _ => return Err(lex.syntax(toks[pos].start, "malformed acceptance set list")),
            }
        }
    };

    loop {
        let Some(t) = toks.get(pos) else {
            return Err(lex.syntax(text.len(), "missing --END--"));
        };
        match &t.tok {
            Tok::End => break,
            Tok::Header(h) if h == "State" => {
                pos += 1;
                if toks.get(pos).map(|t| &t.tok) == Some(&Tok::Punct(b'[')) {
                    return Err(HoaError::Unsupported("state labels".into()));
                }
                let Some(Tok::Int(s)) = toks.get(pos).map(|t| &t.tok) else {
                    return Err(lex.syntax(t.start, "State: expects a state number"));
                };
                let s = *s;
                pos += 1;
                if !seen.insert(s) {
                    return Err(lex.syntax(t.start, format!("state {s} declared twice")));
                }
                if let Some(Tok::Str(_)) = toks.get(pos).map(|t| &t.tok) {
                    pos += 1;
                }
                let mut sets = BTreeSet::new();
                if toks.get(pos).map(|t| &t.tok) == Some(&Tok::Punct(b'{')) {
                    let (s2, next) = set_list(pos)?;
                    sets = s2;
                    pos = next;
                }
                if edges.len() <= s {
                    edges.resize(s + 1, Vec::new());
                    state_sets.resize(s + 1, BTreeSet::new());
                }
                state_sets[s] = sets;
                current = Some(s);
            }
            Tok::Punct(b'[') => {
                let s = current.ok_or_else(|| lex.syntax(t.start, "edge outside a state"))?;
                let (g, next) = bracket(pos)?;
                pos = next;
                let Some(Tok::Int(target)) = toks.get(pos).map(|t| &t.tok) else {
                    return Err(lex.syntax(t.start, "edge without target"));
                };
                let target = *target;
                pos += 1;
                if toks.get(pos).map(|t| &t.tok) == Some(&Tok::Punct(b'&')) {
                    return Err(HoaError::Unsupported("universal branching".into()));
                }
                if toks.get(pos).map(|t| &t.tok) == Some(&Tok::Punct(b'{')) {
                    return Err(HoaError::TransitionAcceptance(lex.line_of(toks[pos].start)));
                }
                edges[s].push((g, target));
            }
            Tok::Int(_) => {
                return Err(HoaError::Unsupported("implicit (unlabeled) edges".into()));
            }
            _ => return Err(lex.syntax(t.start, "unexpected token in body")),
        }
    }

    let n = n_states.unwrap_or(edges.len()).max(edges.len());
    if let Some(declared) = n_states {
        if declared < edges.len() {
            return Err(lex.syntax(0, "state number exceeds States: count"));
        }
    }
    edges.resize(n, Vec::new());
    state_sets.resize(n, BTreeSet::new());

    let members = |set: usize| -> BTreeSet<usize> {
        (0..n).filter(|&s| state_sets[s].contains(&set)).collect()
    };
    let all: BTreeSet<usize> = (0..n).collect();
    let mut pairs: Vec<RabinPair> = conjs
        .iter()
        .map(|c| RabinPair {
            fin: c.fin.iter().flat_map(|&k| members(k)).collect(),
            inf: match c.inf.iter().next() {
                Some(&k) => members(k),
                None => all.clone(),
            },
        })
        .collect();
    if pairs.is_empty() {
        // acceptance `f`: a pair that can never be satisfied
        pairs.push(RabinPair::default());
    }
    Ok(Dra::new(aps, start, edges, pairs)?)
}

fn quote(s: &str) -> String {
    let mut out = String::with_capacity(s.len() + 2);
    out.push('"');
    for c in s.chars() {
        if c == '"' || c == '\\' {
            out.push('\\');
        }
        out.push(c);
    }
    out.push('"');
    out
}

/// Prints the automaton as HOA v1 with one Fin/Inf set pair per Rabin pair.
pub fn print_hoa(dra: &Dra) -> String {
    let mut s = String::new();
    let k = dra.pairs().len();
    writeln!(s, "HOA: v1").unwrap();
    writeln!(s, "States: {}", dra.n_states()).unwrap();
    writeln!(s, "Start: {}", dra.initial()).unwrap();
    let names: Vec<String> = dra.ap_names().iter().map(|a| quote(a)).collect();
    if names.is_empty() {
        writeln!(s, "AP: 0").unwrap();
    } else {
        writeln!(s, "AP: {} {}", names.len(), names.join(" ")).unwrap();
    }
    writeln!(s, "acc-name: Rabin {k}").unwrap();
    let terms: Vec<String> = (0..k)
        .map(|i| format!("(Fin({}) & Inf({}))", 2 * i, 2 * i + 1))
        .collect();
    writeln!(s, "Acceptance: {} {}", 2 * k, terms.join(" | ")).unwrap();
    writeln!(s, "properties: trans-labels explicit-labels state-acc deterministic complete").unwrap();
    writeln!(s, "--BODY--").unwrap();
    for q in 0..dra.n_states() {
        let sets: Vec<String> = dra
            .pairs()
            .iter()
            .enumerate()
            .flat_map(|(i, p)| {
                let mut v = Vec::new();
                if p.fin.contains(&q) {
                    v.push((2 * i).to_string());
                }
                if p.inf.contains(&q) {
                    v.push((2 * i + 1).to_string());
                }
                v
            })
            .collect();
        if sets.is_empty() {
            writeln!(s, "State: {q}").unwrap();
        } else {
            writeln!(s, "State: {q} {{{}}}", sets.join(" ")).unwrap();
        }
        for (g, t) in dra.edges(q) {
            writeln!(s, "[{g}] {t}").unwrap();
        }
    }
    writeln!(s, "--END--").unwrap();
    s
}

#[derive(Debug, Serialize, Deserialize)]
struct JsonEdge {
    guard: String,
    to: usize,
}

#[derive(Debug, Serialize, Deserialize)]
struct JsonPair {
    #[serde(default)]
    fin: Vec<usize>,
    #[serde(default)]
    inf: Vec<usize>,
}

#[derive(Debug, Serialize, Deserialize)]
struct JsonDra {
    #[serde(default)]
    aps: Vec<String>,
    initial: usize,
    states: Vec<Vec<JsonEdge>>,
    pairs: Vec<JsonPair>,
}

/// Parses the native JSON automaton format; guards may use AP names or indices.
pub fn parse_dra_json(text: &str) -> Result<Dra, HoaError> {
    let raw: JsonDra = serde_json::from_str(text)?;
    let edges = raw
        .states
        .iter()
        .map(|out| {
            out.iter()
                .map(|e| Ok((Guard::parse(&e.guard, Some(&raw.aps))?, e.to)))
                .collect::<Result<Vec<_>, DraError>>()
        })
        .collect::<Result<Vec<_>, _>>()?;
    let pairs = raw
        .pairs
        .iter()
        .map(|p| RabinPair {
            fin: p.fin.iter().copied().collect(),
            inf: p.inf.iter().copied().collect(),
        })
        .collect();
    Ok(Dra::new(raw.aps, raw.initial, edges, pairs)?)
}

pub fn print_dra_json(dra: &Dra) -> String {
    let raw = JsonDra {
        aps: dra.ap_names().to_vec(),
        initial: dra.initial(),
        states: (0..dra.n_states())
            .map(|q| {
                dra.edges(q)
                    .iter()
                    .map(|(g, t)| JsonEdge {
                        guard: g.to_string(),
                        to: *t,
                    })
                    .collect()
            })
            .collect(),
        pairs: dra
            .pairs()
            .iter()
            .map(|p| JsonPair {
                fin: p.fin.iter().copied().collect(),
                inf: p.inf.iter().copied().collect(),
            })
            .collect(),
    };
    serde_json::to_string_pretty(&raw).expect("automaton serializes")
}

/// Chooses the parser from the file extension (`.hoa` or `.json`).
pub fn parse_dra_for_path(path: &Path, text: &str) -> Result<Dra, HoaError> {
    match path.extension().and_then(|e| e.to_str()) {
        Some("hoa") => parse_hoa(text),
        Some("json") => parse_dra_json(text),
        _ => Err(HoaError::UnknownFormat(path.display().to_string())),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const ACCEPT_ALL: &str = r#"HOA: v1
States: 1
Start: 0
AP: 1 "A"
acc-name: Rabin 1
Acceptance: 2 Fin(0)&Inf(1)
--BODY--
State: 0 {1}
[t] 0
--END--
"#;

    const EVENTUALLY_ALWAYS: &str = r#"HOA: v1
name: "FG A"
States: 3
Start: 0
AP: 1 "A"
acc-name: Rabin 1
Acceptance: 2 Fin(0) & Inf(1)
properties: trans-labels explicit-labels state-acc deterministic complete
--BODY--
State: 0 /* start */
[!0] 1
[0] 2
State: 1 {0}
[!0] 1
[0] 2
State: 2 {1}
[!0] 1
[0] 2
--END--
"#;

    #[test]
    fn accept_all_automaton() {
        let d = parse_hoa(ACCEPT_ALL).unwrap();
        assert_eq!(d.n_states(), 1);
        assert_eq!(d.pairs().len(), 1);
        assert!(d.pairs()[0].fin.is_empty());
        assert_eq!(d.pairs()[0].inf, [0].into());
        assert_eq!(d.step(0, 1), 0);
    }

    #[test]
    fn incomplete_is_rejected() {
        let text = ACCEPT_ALL.replace("[t] 0", "[!0] 0");
        assert!(matches!(
            parse_hoa(&text),
            Err(HoaError::Automaton(DraError::Incomplete { .. }))
        ));
    }

    #[test]
    fn nondeterminism_is_rejected() {
        let text = ACCEPT_ALL.replace("[t] 0", "[t] 0\n[0] 0");
        assert!(matches!(
            parse_hoa(&text),
            Err(HoaError::Automaton(DraError::Nondeterministic { .. }))
        ));
    }

    #[test]
    fn non_rabin_acceptance_rejected() {
        let text = ACCEPT_ALL.replace("Fin(0)&Inf(1)", "Inf(0)&Inf(1)");
        assert!(matches!(parse_hoa(&text), Err(HoaError::UnsupportedAcceptance(_))));
        let text = ACCEPT_ALL.replace("Fin(0)&Inf(1)", "Fin(!0)&Inf(1)");
        assert!(matches!(parse_hoa(&text), Err(HoaError::UnsupportedAcceptance(_))));
    }

    #[test]
    fn transition_marks_rejected() {
        let text = ACCEPT_ALL.replace("[t] 0", "[t] 0 {1}");
        assert!(matches!(parse_hoa(&text), Err(HoaError::TransitionAcceptance(_))));
    }

    #[test]
    fn missing_version_or_start() {
        assert!(parse_hoa(&ACCEPT_ALL.replace("v1", "v2")).is_err());
        assert!(parse_hoa(&ACCEPT_ALL.replace("Start: 0\n", "")).is_err());
        let twice = ACCEPT_ALL.replace("Start: 0\n", "Start: 0\nStart: 0\n");
        assert!(matches!(parse_hoa(&twice), Err(HoaError::Unsupported(_))));
    }

    #[test]
    fn eventually_always_roundtrip() {
        let d = parse_hoa(EVENTUALLY_ALWAYS).unwrap();
        assert_eq!(d.n_states(), 3);
        assert_eq!(d.pairs()[0].fin, [1].into());
        assert_eq!(d.pairs()[0].inf, [2].into());
        let again = parse_hoa(&print_hoa(&d)).unwrap();
        assert_eq!(again, d);
        let json = parse_dra_json(&print_dra_json(&d)).unwrap();
        assert_eq!(json, d);
    }

    #[test]
    fn acceptance_shapes() {
        let bare_inf = ACCEPT_ALL.replace("Acceptance: 2 Fin(0)&Inf(1)", "Acceptance: 2 Inf(1)");
        let d = parse_hoa(&bare_inf).unwrap();
        assert!(d.pairs()[0].fin.is_empty());
        let truth = ACCEPT_ALL.replace("Acceptance: 2 Fin(0)&Inf(1)", "Acceptance: 0 t");
        assert!(parse_hoa(&truth).unwrap().accepts_set([0]));
        let never = ACCEPT_ALL.replace("Acceptance: 2 Fin(0)&Inf(1)", "Acceptance: 0 f");
        assert!(!parse_hoa(&never).unwrap().accepts_set([0]));
        let two = ACCEPT_ALL.replace(
            "Acceptance: 2 Fin(0)&Inf(1)",
            "Acceptance: 4 (Fin(0)&Inf(1)) | (Fin(2) & Inf(3))",
        );
        assert_eq!(parse_hoa(&two).unwrap().pairs().len(), 2);
    }

    #[test]
    fn json_with_names() {
        let text = r#"{"aps": ["A"], "initial": 0,
            "states": [[{"guard": "A", "to": 0}, {"guard": "!A", "to": 1}],
                       [{"guard": "t", "to": 1}]],
            "pairs": [{"fin": [1], "inf": [0]}]}"#;
        let d = parse_dra_json(text).unwrap();
        assert_eq!(d.step(0, 0), 1);
        assert_eq!(d.step(0, 1), 0);
        assert!(parse_dra_for_path(Path::new("x.txt"), text).is_err());
        assert!(parse_dra_for_path(Path::new("x.json"), text).is_ok());
    }
}
