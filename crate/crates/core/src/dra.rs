//! Deterministic Rabin automata over valuations of atomic propositions.

use std::collections::BTreeSet;
use std::fmt;

use thiserror::Error;

use crate::geometry::PropSet;

pub const MAX_APS: usize = 16;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum DraError {
    #[error("automaton has no states")]
    NoStates,
    #[error("initial state {0} out of range")]
    BadInitial(usize),
    #[error("state {state}: edge target {target} out of range")]
    BadTarget { state: usize, target: usize },
    #[error("too many atomic propositions ({0}, at most {MAX_APS})")]
    TooManyAps(usize),
    #[error("guard refers to proposition index {0}, only {1} declared")]
    BadApIndex(usize, usize),
    #[error("acceptance condition has no Rabin pairs")]
    NoPairs,
    #[error("Rabin pair {pair} refers to state {state} out of range")]
    BadPairState { pair: usize, state: usize },
    #[error("nondeterminism: state {state} has several enabled edges for valuation {valuation:#b}")]
    Nondeterministic { state: usize, valuation: u32 },
    #[error("incomplete: state {state} has no enabled edge for valuation {valuation:#b}")]
    Incomplete { state: usize, valuation: u32 },
    #[error("guard syntax error at byte {pos}: {msg}")]
    GuardSyntax { pos: usize, msg: String },
    #[error("proposition {0:?} is not declared by the automaton")]
    UnknownProp(String),
}

/// Boolean formula over proposition indices.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Guard {
    True,
    False,
    Ap(usize),
    Not(Box<Guard>),
    And(Box<Guard>, Box<Guard>),
    Or(Box<Guard>, Box<Guard>),
}

impl Guard {
    /// Bit `i` of `valuation` is the truth value of proposition `i`.
    pub fn eval(&self, valuation: u32) -> bool {
        match self {
            Guard::True => true,
            Guard::False => false,
            Guard::Ap(i) => valuation >> i & 1 == 1,
            Guard::Not(g) => !g.eval(valuation),
            Guard::And(a, b) => a.eval(valuation) && b.eval(valuation),
            Guard::Or(a, b) => a.eval(valuation) || b.eval(valuation),
        }
    }

    pub fn max_ap(&self) -> Option<usize> {
        match self {
            Guard::True | Guard::False => None,
            Guard::Ap(i) => Some(*i),
            Guard::Not(g) => g.max_ap(),
            Guard::And(a, b) | Guard::Or(a, b) => a.max_ap().max(b.max_ap()),
        }
    }

    /// Parses `t`, `f`, integers, `!`, `&`, `|` and parentheses. Bare
    /// identifiers are looked up in `names` when given.
    pub fn parse(text: &str, names: Option<&[String]>) -> Result<Guard, DraError> {
        let mut p = GuardParser {
            src: text.as_bytes(),
            pos: 0,
            names,
        };
        let g = p.or()?;
        p.skip_ws();
        if p.pos != p.src.len() {
            return Err(p.err("trailing input"));
        }
        Ok(g)
    }

    fn fmt_child(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Guard::And(..) | Guard::Or(..) => write!(f, "({self})"),
            _ => write!(f, "{self}"),
        }
    }
}

impl fmt::Display for Guard {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Guard::True => write!(f, "t"),
            Guard::False => write!(f, "f"),
            Guard::Ap(i) => write!(f, "{i}"),
            Guard::Not(g) => {
                write!(f, "!")?;
                g.fmt_child(f)
            }
            Guard::And(a, b) => {
                a.fmt_child(f)?;
                write!(f, " & ")?;
                b.fmt_child(f)
            }
            Guard::Or(a, b) => {
                a.fmt_child(f)?;
                write!(f, " | ")?;
                b.fmt_child(f)
            }
        }
    }
}

struct GuardParser<'a> {
    src: &'a [u8],
    pos: usize,
    names: Option<&'a [String]>,
}

impl GuardParser<'_> {
    fn err(&self, msg: &str) -> DraError {
        DraError::GuardSyntax {
            pos: self.pos,
            msg: msg.to_string(),
        }
    }

    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.src.get(self.pos).copied()
    }

    fn or(&mut self) -> Result<Guard, DraError> {
        let mut lhs = self.and()?;
        while self.peek() == Some(b'|') {
            self.pos += 1;
            let rhs = self.and()?;
            lhs = Guard::Or(Box::new(lhs), Box::new(rhs));
        }
        Ok(lhs)
    }

    fn and(&mut self) -> Result<Guard, DraError> {
        let mut lhs = self.unary()?;
        while self.peek() == Some(b'&') {
            self.pos += 1;
            let rhs = self.unary()?;
            lhs = Guard::And(Box::new(lhs), Box::new(rhs));
        }
        Ok(lhs)
    }

    fn unary(&mut self) -> Result<Guard, DraError> {
        match self.peek() {
            Some(b'!') => {
                self.pos += 1;
                Ok(Guard::Not(Box::new(self.unary()?)))
            }
            Some(b'(') => {
                self.pos += 1;
                let g = self.or()?;
                if self.peek() != Some(b')') {
                    return Err(self.err("expected ')'"));
                }
                self.pos += 1;
                Ok(g)
            }
            Some(c) if c.is_ascii_digit() => {
                let start = self.pos;
                while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
                    self.pos += 1;
                }
                let s = std::str::from_utf8(&self.src[start..self.pos]).unwrap();
                s.parse::<usize>()
                    .map(Guard::Ap)
                    .map_err(|_| self.err("bad proposition index"))
            }
            Some(c) if c.is_ascii_alphabetic() || c == b'_' => {
                let start = self.pos;
                while self.pos < self.src.len()
                    && (self.src[self.pos].is_ascii_alphanumeric() || self.src[self.pos] == b'_')
                {
                    self.pos += 1;
                }
                let word = std::str::from_utf8(&self.src[start..self.pos]).unwrap();
                if let Some(i) = self.names.and_then(|n| n.iter().position(|x| x == word)) {
                    return Ok(Guard::Ap(i));
                }
                match word {
                    "t" => Ok(Guard::True),
                    "f" => Ok(Guard::False),
                    _ => {
                        self.pos = start;
                        Err(self.err(&format!("unknown identifier {word:?}")))
                    }
                }
            }
            Some(_) => Err(self.err("unexpected character")),
            None => Err(self.err("unexpected end of guard")),
        }
    }
}

/// Acceptance pair: accept if `inf` is visited infinitely often and `fin` finitely often.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct RabinPair {
    pub fin: BTreeSet<usize>,
    pub inf: BTreeSet<usize>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Dra {
    ap_names: Vec<String>,
    initial: usize,
    edges: Vec<Vec<(Guard, usize)>>,
    pairs: Vec<RabinPair>,
    table: Vec<Vec<usize>>,
}

impl Dra {
    /// Validates the automaton and tabulates its transition function.
    pub fn new(
        ap_names: Vec<String>,
        initial: usize,
        edges: Vec<Vec<(Guard, usize)>>,
        pairs: Vec<RabinPair>,
    ) -> Result<Self, DraError> {
        let n = edges.len();
        if n == 0 {
            return Err(DraError::NoStates);
        }
        if initial >= n {
            return Err(DraError::BadInitial(initial));
        }
        if ap_names.len() > MAX_APS {
            return Err(DraError::TooManyAps(ap_names.len()));
        }
        if pairs.is_empty() {
            return Err(DraError::NoPairs);
        }
        for (k, p) in pairs.iter().enumerate() {
            if let Some(&s) = p.fin.iter().chain(&p.inf).find(|&&s| s >= n) {
                return Err(DraError::BadPairState { pair: k, state: s });
            }
        }
        for (s, out) in edges.iter().enumerate() {
            for (g, t) in out {
                if *t >= n {
                    return Err(DraError::BadTarget { state: s, target: *t });
                }
                if let Some(i) = g.max_ap() {
                    if i >= ap_names.len() {
                        return Err(DraError::BadApIndex(i, ap_names.len()));
                    }
                }
            }
        }
        let n_vals = 1u32 << ap_names.len();
        let mut table = Vec::with_capacity(n);
        for (s, out) in edges.iter().enumerate() {
            let mut row = Vec::with_capacity(n_vals as usize);
            for v in 0..n_vals {
                let mut hit = None;
                for (g, t) in out {
                    if g.eval(v) {
                        if hit.is_some() {
                            return Err(DraError::Nondeterministic { state: s, valuation: v });
                        }
                        hit = Some(*t);
                    }
                }
                row.push(hit.ok_or(DraError::Incomplete { state: s, valuation: v })?);
            }
            table.push(row);
        }
        Ok(Self {
            ap_names,
            initial,
            edges,
            pairs,
            table,
        })
    }

    pub fn n_states(&self) -> usize {
        self.edges.len()
    }

    pub fn ap_names(&self) -> &[String] {
        &self.ap_names
    }

    pub fn initial(&self) -> usize {
        self.initial
    }

    pub fn edges(&self, s: usize) -> &[(Guard, usize)] {
        &self.edges[s]
    }

    pub fn pairs(&self) -> &[RabinPair] {
        &self.pairs
    }

    pub fn step(&self, s: usize, valuation: u32) -> usize {
        self.table[s][valuation as usize]
    }

    /// Bit-encodes a proposition set; names not declared by the automaton are an error.
    pub fn valuation(&self, props: &PropSet) -> Result<u32, DraError> {
        let mut v = 0u32;
        for p in props {
            let i = self
                .ap_names
                .iter()
                .position(|a| a == p)
                .ok_or_else(|| DraError::UnknownProp(p.clone()))?;
            v |= 1 << i;
        }
        Ok(v)
    }

    pub fn step_props(&self, s: usize, props: &PropSet) -> Result<usize, DraError> {
        Ok(self.step(s, self.valuation(props)?))
    }

    /// Rabin acceptance of a set of states visited infinitely often.
    pub fn accepts_set(&self, states: impl IntoIterator<Item = usize> + Clone) -> bool {
        self.pairs.iter().any(|p| {
            states.clone().into_iter().any(|s| p.inf.contains(&s))
                && !states.clone().into_iter().any(|s| p.fin.contains(&s))
        })
    }
}
