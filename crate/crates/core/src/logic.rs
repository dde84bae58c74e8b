//! Relevance-logic formulas, finite matrices and validity checking.
//!
//! Grammar, loosest to tightest: `->` (right-associative), `v`, `&`,
//! `o` (fusion), prefix `~`. Variables match `[a-z][a-zA-Z0-9_]*`, except
//! that the bare words `v` and `o` are operators.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::ops::RangeInclusive;
use std::sync::atomic::{AtomicU64, Ordering};

use crate::error::{Error, Result};
use crate::models;
use crate::ra_core::Relation;
use crate::sugihara::{enumerate_chain, IndexSet, SymElement};

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Formula {
    Var(String),
    Neg(Box<Formula>),
    And(Box<Formula>, Box<Formula>),
    Or(Box<Formula>, Box<Formula>),
    Implies(Box<Formula>, Box<Formula>),
    Fusion(Box<Formula>, Box<Formula>),
}

impl Formula {
    pub fn var(name: &str) -> Formula {
        Formula::Var(name.to_string())
    }

    pub fn neg(f: Formula) -> Formula {
        Formula::Neg(Box::new(f))
    }

    pub fn and(a: Formula, b: Formula) -> Formula {
        Formula::And(Box::new(a), Box::new(b))
    }

    pub fn or(a: Formula, b: Formula) -> Formula {
        Formula::Or(Box::new(a), Box::new(b))
    }

    pub fn implies(a: Formula, b: Formula) -> Formula {
        Formula::Implies(Box::new(a), Box::new(b))
    }

    pub fn fusion(a: Formula, b: Formula) -> Formula {
        Formula::Fusion(Box::new(a), Box::new(b))
    }

    pub fn vars(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        self.collect_vars(&mut out);
        out
    }

    fn collect_vars(&self, out: &mut BTreeSet<String>) {
        match self {
            Formula::Var(v) => {
                out.insert(v.clone());
            }
            Formula::Neg(a) => a.collect_vars(out),
            Formula::And(a, b) | Formula::Or(a, b) | Formula::Implies(a, b) | Formula::Fusion(a, b) => {
                a.collect_vars(out);
                b.collect_vars(out);
            }
        }
    }

    /// Subformulas in post-order, each listed once per occurrence.
    pub fn subformulas(&self) -> Vec<&Formula> {
        let mut out = Vec::new();
        self.collect_subformulas(&mut out);
        out
    }

    fn collect_subformulas<'a>(&'a self, out: &mut Vec<&'a Formula>) {
        match self {
            Formula::Var(_) => {}
            Formula::Neg(a) => a.collect_subformulas(out),
            Formula::And(a, b) | Formula::Or(a, b) | Formula::Implies(a, b) | Formula::Fusion(a, b) => {
                a.collect_subformulas(out);
                b.collect_subformulas(out);
            }
        }
        out.push(self);
    }

    fn prec(&self) -> u8 {
        match self {
            Formula::Implies(..) => 0,
            Formula::Or(..) => 1,
            Formula::And(..) => 2,
            Formula::Fusion(..) => 3,
            Formula::Neg(_) | Formula::Var(_) => 4,
        }
    }

    fn write_prec(&self, f: &mut fmt::Formatter<'_>, min: u8) -> fmt::Result {
        let p = self.prec();
        if p < min {
            f.write_str("(")?;
        }
        match self {
            Formula::Var(v) => f.write_str(v)?,
            Formula::Neg(a) => {
                f.write_str("~")?;
                a.write_prec(f, 4)?;
            }
            Formula::Implies(a, b) => {
                a.write_prec(f, 1)?;
                f.write_str(" -> ")?;
                b.write_prec(f, 0)?;
            }
            Formula::Or(a, b) | Formula::And(a, b) | Formula::Fusion(a, b) => {
                let op = match self {
                    Formula::Or(..) => " v ",
                    Formula::And(..) => " & ",
                    _ => " o ",
                };
                a.write_prec(f, p)?;
                f.write_str(op)?;
                b.write_prec(f, p + 1)?;
            }
        }
        if p < min {
            f.write_str(")")?;
        }
        Ok(())
    }
}

impl fmt::Display for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.write_prec(f, 0)
    }
}

impl std::str::FromStr for Formula {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        parse(s)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum Tok {
    Var(String),
    Neg,
    Fusion,
    And,
    Or,
    Arrow,
    LParen,
    RParen,
}

fn tokenize(s: &str) -> Result<Vec<(usize, Tok)>> {
    let bytes = s.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i];
        match c {
            b' ' | b'\t' | b'\n' | b'\r' => i += 1,
            b'~' => {
                out.push((i, Tok::Neg));
                i += 1;
            }
            b'&' => {
                out.push((i, Tok::And));
                i += 1;
            }
            b'(' => {
                out.push((i, Tok::LParen));
                i += 1;
            }
            b')' => {
                out.push((i, Tok::RParen));
                i += 1;
            }
            b'-' if bytes.get(i + 1) == Some(&b'>') => {
                out.push((i, Tok::Arrow));
                i += 2;
            }
            b'a'..=b'z' => {
                let start = i;
                while i < bytes.len() && (bytes[i].is_ascii_alphanumeric() || bytes[i] == b'_') {
                    i += 1;
                }
                let word = &s[start..i];
                let tok = match word {
                    "v" => Tok::Or,
                    "o" => Tok::Fusion,
                    w => Tok::Var(w.to_string()),
                };
                out.push((start, tok));
            }
            _ => {
                let ch = s[i..].chars().next().unwrap_or('?');
                return Err(Error::Syntax {
                    position: i,
                    message: format!("unexpected character '{ch}'"),
                });
            }
        }
    }
    Ok(out)
}

struct Parser {
    toks: Vec<(usize, Tok)>,
    pos: usize,
    end: usize,
}

impl Parser {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|(_, t)| t)
    }

    fn here(&self) -> usize {
        self.toks.get(self.pos).map_or(self.end, |(p, _)| *p)
    }

    fn err<T>(&self, message: &str) -> Result<T> {
        Err(Error::Syntax {
            position: self.here(),
            message: message.to_string(),
        })
    }

    fn implication(&mut self) -> Result<Formula> {
        let lhs = self.binary(1)?;
        if self.peek() == Some(&Tok::Arrow) {
            self.pos += 1;
            let rhs = self.implication()?;
            return Ok(Formula::implies(lhs, rhs));
        }
        Ok(lhs)
    }

    /// Left-associative levels: 1 = `v`, 2 = `&`, 3 = `o`.
    fn binary(&mut self, level: u8) -> Result<Formula> {
        if level > 3 {
            return self.unary();
        }
        let (tok, build): (Tok, fn(Formula, Formula) -> Formula) = match level {
            1 => (Tok::Or, Formula::or),
            2 => (Tok::And, Formula::and),
            _ => (Tok::Fusion, Formula::fusion),
        };
        let mut lhs = self.binary(level + 1)?;
        while self.peek() == Some(&tok) {
            self.pos += 1;
            let rhs = self.binary(level + 1)?;
            lhs = build(lhs, rhs);
        }
        Ok(lhs)
    }

    fn unary(&mut self) -> Result<Formula> {
        match self.peek().cloned() {
            Some(Tok::Neg) => {
                self.pos += 1;
                Ok(Formula::neg(self.unary()?))
            }
            Some(Tok::Var(v)) => {
                self.pos += 1;
                Ok(Formula::Var(v))
            }
            Some(Tok::LParen) => {
                self.pos += 1;
                let f = self.implication()?;
                if self.peek() != Some(&Tok::RParen) {
                    return self.err("expected ')'");
                }
                self.pos += 1;
                Ok(f)
            }
            Some(_) => self.err("expected a variable, '~' or '('"),
            None => self.err("unexpected end of input"),
        }
    }
}

/// Parses a formula; errors carry the byte offset of the offending token.
pub fn parse(text: &str) -> Result<Formula> {
    let toks = tokenize(text)?;
    let mut p = Parser {
        toks,
        pos: 0,
        end: text.len(),
    };
    let f = p.implication()?;
    if p.pos != p.toks.len() {
        return p.err("unexpected trailing input");
    }
    Ok(f)
}

/// How the relational connectives are read.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Method {
    /// `∪, ∩, →, ~`
    First,
    /// `∪, ∩, →', ~'`
    Second,
}

/// How a relational matrix picks its designated elements.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Designation {
    /// Elements containing the identity relation.
    ContainsIdentity,
    /// Elements `a` with `neg(a) ⊆ a`.
    SelfNegationBelow,
    /// The listed carrier positions.
    Explicit(Vec<usize>),
}

/// A finite matrix: carrier labels, operation tables and designated set.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Matrix {
    name: String,
    labels: Vec<String>,
    join: Vec<usize>,
    meet: Vec<usize>,
    arrow: Vec<usize>,
    neg: Vec<usize>,
    designated: Vec<bool>,
}

impl Matrix {
    /// Binary tables are row-major `n × n`; every entry must index the carrier.
    pub fn from_tables(
        name: impl Into<String>,
        labels: Vec<String>,
        join: Vec<usize>,
        meet: Vec<usize>,
        arrow: Vec<usize>,
        neg: Vec<usize>,
        designated: Vec<bool>,
    ) -> Result<Self> {
        let n = labels.len();
        let ok = join.len() == n * n
            && meet.len() == n * n
            && arrow.len() == n * n
            && neg.len() == n
            && designated.len() == n
            && join.iter().chain(&meet).chain(&arrow).chain(&neg).all(|&x| x < n);
        if !ok {
            return Err(Error::InvalidStructure("matrix tables have the wrong shape".into()));
        }
        Ok(Matrix {
            name: name.into(),
            labels,
            join,
            meet,
            arrow,
            neg,
            designated,
        })
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn size(&self) -> usize {
        self.labels.len()
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn label(&self, x: usize) -> &str {
        &self.labels[x]
    }

    pub fn find(&self, label: &str) -> Option<usize> {
        self.labels.iter().position(|l| l == label)
    }

    pub fn join(&self, a: usize, b: usize) -> usize {
        self.join[a * self.size() + b]
    }

    pub fn meet(&self, a: usize, b: usize) -> usize {
        self.meet[a * self.size() + b]
    }

    pub fn arrow(&self, a: usize, b: usize) -> usize {
        self.arrow[a * self.size() + b]
    }

    pub fn neg(&self, a: usize) -> usize {
        self.neg[a]
    }

    pub fn fusion(&self, a: usize, b: usize) -> usize {
        self.neg(self.arrow(b, self.neg(a)))
    }

    pub fn is_designated(&self, a: usize) -> bool {
        self.designated[a]
    }

    pub fn designated(&self) -> Vec<usize> {
        (0..self.size()).filter(|&a| self.designated[a]).collect()
    }

    /// `a ≤ b` in the lattice order read off `meet`.
    pub fn leq(&self, a: usize, b: usize) -> bool {
        self.meet(a, b) == a
    }

    /// Sugihara lattice check: the order is a chain, `neg` is an
    /// order-reversing involution, the arrow is the Sugihara arrow and
    /// designation is `neg(a) ≤ a`.
    pub fn is_sugihara_lattice(&self) -> bool {
        let n = self.size();
        for a in 0..n {
            if self.neg(self.neg(a)) != a {
                return false;
            }
            if self.designated[a] != self.leq(self.neg(a), a) {
                return false;
            }
            for b in 0..n {
                if !self.leq(a, b) && !self.leq(b, a) {
                    return false;
                }
                if self.leq(a, b) && !self.leq(self.neg(b), self.neg(a)) {
                    return false;
                }
                let expect = if self.leq(a, b) {
                    self.join(self.neg(a), b)
                } else {
                    self.meet(self.neg(a), b)
                };
                if self.arrow(a, b) != expect {
                    return false;
                }
            }
        }
        true
    }

    /// A printable table of one binary operation.
    pub fn render_binary(&self, title: &str, op: impl Fn(usize, usize) -> usize) -> String {
        let n = self.size();
        let width = self.labels.iter().map(String::len).max().unwrap_or(1).max(title.len());
        let mut out = format!("{title:>width$} |");
        for b in 0..n {
            out.push_str(&format!(" {:>width$}", self.labels[b]));
        }
        out.push('\n');
        for a in 0..n {
            out.push_str(&format!("{:>width$} |", self.labels[a]));
            for b in 0..n {
                out.push_str(&format!(" {:>width$}", self.labels[op(a, b)]));
            }
            out.push('\n');
        }
        out
    }
}

/// A [`Matrix`] built from concrete elements, which it keeps.
#[derive(Debug, Clone)]
pub struct RelMatrix<E> {
    pub matrix: Matrix,
    pub elements: Vec<E>,
    pub method: Method,
}

impl<E: Relation> RelMatrix<E> {
    /// Reads the operation tables off the elements; fails unless the
    /// carrier is closed under the method's four operations.
    pub fn new(
        name: impl Into<String>,
        elements: Vec<E>,
        labels: Vec<String>,
        method: Method,
        designation: Designation,
    ) -> Result<Self> {
        let n = elements.len();
        if labels.len() != n {
            return Err(Error::InvalidStructure("one label per element required".into()));
        }
        for w in elements.windows(2) {
            w[0].ensure(&w[1])?;
        }
        let find = |e: &E, what: &str| -> Result<usize> {
            elements
                .iter()
                .position(|x| x == e)
                .ok_or_else(|| Error::NotClosed(format!("{what} = {e:?}")))
        };
        let mut join = Vec::with_capacity(n * n);
        let mut meet = Vec::with_capacity(n * n);
        let mut arrow = Vec::with_capacity(n * n);
        for (i, a) in elements.iter().enumerate() {
            for (j, b) in elements.iter().enumerate() {
                let ctx = |op: &str| format!("{}{op}{}", labels[i], labels[j]);
                join.push(find(&a.raw_union(b), &ctx(" v "))?);
                meet.push(find(&a.raw_intersect(b), &ctx(" & "))?);
                let r = match method {
                    Method::First => a.residual(b)?,
                    Method::Second => a.rel_residual(b)?,
                };
                arrow.push(find(&r, &ctx(" -> "))?);
            }
        }
        let mut neg = Vec::with_capacity(n);
        for (i, a) in elements.iter().enumerate() {
            let r = match method {
                Method::First => a.conv_complement(),
                Method::Second => a.rel_conv_complement(),
            };
            neg.push(find(&r, &format!("~{}", labels[i]))?);
        }
        let designated = match &designation {
            Designation::ContainsIdentity => elements.iter().map(|a| a.identity().raw_subset(a)).collect(),
            Designation::SelfNegationBelow => (0..n).map(|i| elements[neg[i]].raw_subset(&elements[i])).collect(),
            Designation::Explicit(list) => {
                if list.iter().any(|&i| i >= n) {
                    return Err(Error::InvalidStructure("designated index out of range".into()));
                }
                (0..n).map(|i| list.contains(&i)).collect()
            }
        };
        Ok(RelMatrix {
            matrix: Matrix::from_tables(name, labels, join, meet, arrow, neg, designated)?,
            elements,
            method,
        })
    }

    pub fn index_of(&self, e: &E) -> Option<usize> {
        self.elements.iter().position(|x| x == e)
    }
}

/// Variable assignment into matrix carrier positions.
pub type Valuation = BTreeMap<String, usize>;

pub fn evaluate(f: &Formula, m: &Matrix, v: &Valuation) -> Result<usize> {
    Ok(match f {
        Formula::Var(x) => *v.get(x).ok_or_else(|| Error::MissingBinding(x.clone()))?,
        Formula::Neg(a) => m.neg(evaluate(a, m, v)?),
        Formula::And(a, b) => m.meet(evaluate(a, m, v)?, evaluate(b, m, v)?),
        Formula::Or(a, b) => m.join(evaluate(a, m, v)?, evaluate(b, m, v)?),
        Formula::Implies(a, b) => m.arrow(evaluate(a, m, v)?, evaluate(b, m, v)?),
        Formula::Fusion(a, b) => m.fusion(evaluate(a, m, v)?, evaluate(b, m, v)?),
    })
}

#[derive(Debug, Clone, Copy)]
enum Op {
    Var(usize),
    Neg,
    And,
    Or,
    Implies,
    Fusion,
}

/// A formula flattened to postfix over numbered variables.
struct Program {
    ops: Vec<Op>,
}

impl Program {
    fn new(f: &Formula, vars: &[String]) -> Program {
        let mut ops = Vec::new();
        fn walk(f: &Formula, vars: &[String], ops: &mut Vec<Op>) {
            match f {
                Formula::Var(x) => ops.push(Op::Var(vars.iter().position(|v| v == x).unwrap())),
                Formula::Neg(a) => {
                    walk(a, vars, ops);
                    ops.push(Op::Neg);
                }
                Formula::And(a, b) | Formula::Or(a, b) | Formula::Implies(a, b) | Formula::Fusion(a, b) => {
                    walk(a, vars, ops);
                    walk(b, vars, ops);
                    ops.push(match f {
                        Formula::And(..) => Op::And,
                        Formula::Or(..) => Op::Or,
                        Formula::Implies(..) => Op::Implies,
                        _ => Op::Fusion,
                    });
                }
            }
        }
        walk(f, vars, &mut ops);
        Program { ops }
    }

    fn run(&self, m: &Matrix, values: &[usize], stack: &mut Vec<usize>) -> usize {
        stack.clear();
        for op in &self.ops {
            let v = match *op {
                Op::Var(i) => values[i],
                Op::Neg => {
                    let a = stack.pop().unwrap();
                    m.neg(a)
                }
                _ => {
                    let b = stack.pop().unwrap();
                    let a = stack.pop().unwrap();
                    match op {
                        Op::And => m.meet(a, b),
                        Op::Or => m.join(a, b),
                        Op::Implies => m.arrow(a, b),
                        _ => m.fusion(a, b),
                    }
                }
            };
            stack.push(v);
        }
        stack.pop().unwrap()
    }
}

/// Largest valuation count [`is_valid`] will enumerate.
pub const VALUATION_BOUND: u128 = 100_000_000;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Verdict {
    Valid,
    Countermodel { valuation: Valuation, value: usize },
}

impl Verdict {
    pub fn is_valid(&self) -> bool {
        matches!(self, Verdict::Valid)
    }

    /// `VALID`, or `COUNTERMODEL v: p=..., q=...; value=...; designated set=...`.
    pub fn render(&self, m: &Matrix) -> String {
        match self {
            Verdict::Valid => "VALID".into(),
            Verdict::Countermodel { valuation, value } => {
                let vs: Vec<String> = valuation
                    .iter()
                    .map(|(k, &x)| format!("{k}={}", m.label(x)))
                    .collect();
                let ds: Vec<&str> = m.designated().into_iter().map(|d| m.label(d)).collect();
                format!(
                    "COUNTERMODEL v: {}; value={}; designated set={{{}}}",
                    vs.join(", "),
                    m.label(*value),
                    ds.join(", ")
                )
            }
        }
    }
}

/// Exhaustive validity check. Valuations are enumerated with variables
/// sorted and the first variable most significant, so the reported
/// countermodel is the lexicographically first one whatever `jobs` is.
pub fn is_valid(f: &Formula, m: &Matrix, jobs: usize) -> Result<Verdict> {
    let vars: Vec<String> = f.vars().into_iter().collect();
    let n = m.size() as u128;
    let total = (0..vars.len()).try_fold(1u128, |acc, _| acc.checked_mul(n)).unwrap_or(u128::MAX);
    if total > VALUATION_BOUND {
        return Err(Error::SearchBound(total, VALUATION_BOUND));
    }
    let total = total as u64;
    let prog = Program::new(f, &vars);
    let k = vars.len();
    let decode = |mut idx: u64, values: &mut [usize]| {
        for slot in values.iter_mut().rev() {
            *slot = (idx % n as u64) as usize;
            idx /= n as u64;
        }
    };
    let best = AtomicU64::new(u64::MAX);
    let scan = |range: std::ops::Range<u64>| {
        let mut values = vec![0usize; k];
        let mut stack = Vec::with_capacity(prog.ops.len());
        for idx in range {
            if idx >= best.load(Ordering::Relaxed) {
                return;
            }
            decode(idx, &mut values);
            if !m.is_designated(prog.run(m, &values, &mut stack)) {
                best.fetch_min(idx, Ordering::Relaxed);
                return;
            }
        }
    };
    let jobs = jobs.max(1) as u64;
    if jobs == 1 || total < 4096 {
        scan(0..total);
    } else {
        let chunk = total.div_ceil(jobs);
        std::thread::scope(|s| {
            for j in 0..jobs {
                let lo = j * chunk;
                let hi = ((j + 1) * chunk).min(total);
                let scan = &scan;
                s.spawn(move || scan(lo..hi));
            }
        });
    }
    let idx = best.into_inner();
    if idx == u64::MAX {
        return Ok(Verdict::Valid);
    }
    let mut values = vec![0usize; k];
    decode(idx, &mut values);
    let mut stack = Vec::new();
    let value = prog.run(m, &values, &mut stack);
    Ok(Verdict::Countermodel {
        valuation: vars.into_iter().zip(values).collect(),
        value,
    })
}

/// The axiom lists.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Suite {
    /// (R1)–(R13)
    R,
    /// (R1)–(R14)
    RM,
    /// (R1)–(R13) plus `a & ~a -> b`
    KR,
}

impl std::str::FromStr for Suite {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "R" => Ok(Suite::R),
            "RM" => Ok(Suite::RM),
            "KR" => Ok(Suite::KR),
            _ => Err(Error::Parse(format!("unknown suite '{s}'"))),
        }
    }
}

const R_AXIOMS: [(&str, &str); 13] = [
    ("R1", "a -> a"),
    ("R2", "(a -> b) -> (b -> c) -> a -> c"),
    ("R3", "a -> (a -> b) -> b"),
    ("R4", "(a -> a -> b) -> a -> b"),
    ("R5", "a & b -> a"),
    ("R6", "a & b -> b"),
    ("R7", "(a -> b) & (a -> c) -> a -> b & c"),
    ("R8", "a -> a v b"),
    ("R9", "b -> a v b"),
    ("R10", "(a -> c) & (b -> c) -> a v b -> c"),
    ("R11", "a & (b v c) -> a & b v c"),
    ("R12", "(a -> ~b) -> b -> ~a"),
    ("R13", "~~a -> a"),
];

pub fn axiom_suite(suite: Suite) -> Vec<(String, Formula)> {
    let mut out: Vec<(String, Formula)> = R_AXIOMS
        .iter()
        .map(|(l, s)| (l.to_string(), parse(s).expect("axiom text parses")))
        .collect();
    match suite {
        Suite::R => {}
        Suite::RM => out.push(("R14".into(), parse("a -> a -> a").unwrap())),
        Suite::KR => out.push(("KR".into(), parse("a & ~a -> b").unwrap())),
    }
    out
}

/// Which variable-sharing construction to run.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ShareStyle {
    /// Point algebra, `f`'s variables to `≤` and `g`'s to `≥`.
    Belnap,
    /// Crystal lattice, `f`'s variables to `L0L1` and `g`'s to `R0L1`.
    Crystal,
}

impl std::str::FromStr for ShareStyle {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "belnap" => Ok(ShareStyle::Belnap),
            "crystal" => Ok(ShareStyle::Crystal),
            _ => Err(Error::Parse(format!("unknown style '{s}'"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TraceStep {
    pub subformula: String,
    pub value: String,
    pub in_set: bool,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ShareReport {
    pub valuation: Vec<(String, String)>,
    pub f_value: String,
    pub g_value: String,
    pub implication_value: String,
    pub designated: bool,
    pub f_set: Vec<String>,
    pub g_set: Vec<String>,
    pub f_trace: Vec<TraceStep>,
    pub g_trace: Vec<TraceStep>,
}

impl ShareReport {
    /// Every subformula of `f` and `g` stayed inside its closed subset.
    pub fn traces_closed(&self) -> bool {
        self.f_trace.iter().chain(&self.g_trace).all(|t| t.in_set)
    }
}

impl fmt::Display for ShareReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let vs: Vec<String> = self.valuation.iter().map(|(k, v)| format!("{k}={v}")).collect();
        writeln!(f, "valuation: {}", vs.join(", "))?;
        writeln!(f, "f = {}  (closed set {{{}}})", self.f_value, self.f_set.join(", "))?;
        writeln!(f, "g = {}  (closed set {{{}}})", self.g_value, self.g_set.join(", "))?;
        writeln!(
            f,
            "f -> g = {}  ({})",
            self.implication_value,
            if self.designated { "designated" } else { "not designated" }
        )?;
        for (name, trace) in [("f", &self.f_trace), ("g", &self.g_trace)] {
            writeln!(f, "trace {name}:")?;
            for t in trace {
                writeln!(f, "  {} = {}{}", t.subformula, t.value, if t.in_set { "" } else { "  ESCAPED" })?;
            }
        }
        Ok(())
    }
}

/// Evaluates `f -> g` with `f`'s variables sent into one closed subset
/// and `g`'s into another whose arrows from the first are all `∅`.
pub fn variable_sharing_demo(f: &Formula, g: &Formula, style: ShareStyle) -> Result<ShareReport> {
    let (fv, gv) = (f.vars(), g.vars());
    let shared: Vec<&String> = fv.intersection(&gv).collect();
    if !shared.is_empty() {
        let names: Vec<&str> = shared.iter().map(|s| s.as_str()).collect();
        return Err(Error::SharedVariables(names.join(", ")));
    }
    let (m, f_set, g_set) = match style {
        ShareStyle::Belnap => (models::m0_matrix().matrix, vec!["<", "<="], vec![">", ">="]),
        ShareStyle::Crystal => (models::crystal_lattice().matrix, vec!["L0L1"], vec!["R0L1"]),
    };
    let pos = |l: &str| m.find(l).expect("model label");
    let f_set: Vec<usize> = f_set.into_iter().map(pos).collect();
    let g_set: Vec<usize> = g_set.into_iter().map(pos).collect();
    let f_seed = *f_set.last().unwrap();
    let g_seed = *g_set.last().unwrap();
    let mut v = Valuation::new();
    for x in &fv {
        v.insert(x.clone(), f_seed);
    }
    for x in &gv {
        v.insert(x.clone(), g_seed);
    }
    let trace = |h: &Formula, set: &[usize]| -> Result<Vec<TraceStep>> {
        h.subformulas()
            .into_iter()
            .map(|s| {
                let val = evaluate(s, &m, &v)?;
                Ok(TraceStep {
                    subformula: s.to_string(),
                    value: m.label(val).to_string(),
                    in_set: set.contains(&val),
                })
            })
            .collect()
    };
    let fval = evaluate(f, &m, &v)?;
    let gval = evaluate(g, &m, &v)?;
    let imp = m.arrow(fval, gval);
    Ok(ShareReport {
        valuation: v.iter().map(|(k, &x)| (k.clone(), m.label(x).to_string())).collect(),
        f_value: m.label(fval).into(),
        g_value: m.label(gval).into(),
        implication_value: m.label(imp).into(),
        designated: m.is_designated(imp),
        f_set: f_set.iter().map(|&x| m.label(x).to_string()).collect(),
        g_set: g_set.iter().map(|&x| m.label(x).to_string()).collect(),
        f_trace: trace(f, &f_set)?,
        g_trace: trace(g, &g_set)?,
    })
}

/// The First-Method matrix on a truncated chain `C_I`, with elements
/// containing the identity designated.
pub fn chain_matrix(index: &IndexSet, window: Option<RangeInclusive<i64>>) -> Result<RelMatrix<SymElement>> {
    let chain = enumerate_chain(index, false, window)?;
    let labels = chain.iter().map(|e| crate::sugihara::chain_label(e, false)).collect();
    RelMatrix::new(
        format!("C{index}"),
        chain,
        labels,
        Method::First,
        Designation::ContainsIdentity,
    )
}

/// Validity over a truncated chain `C_I`. A countermodel certifies that
/// `f` is not a theorem of RM; `Valid` is evidence at this window only.
pub fn check_krm_validity(f: &Formula, index: &IndexSet, window: i64, jobs: usize) -> Result<Verdict> {
    let m = chain_matrix(index, Some(-window..=window))?;
    is_valid(f, &m.matrix, jobs)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn precedence_and_associativity() {
        let f = parse("a & b v c").unwrap();
        assert_eq!(f, Formula::or(Formula::and(Formula::var("a"), Formula::var("b")), Formula::var("c")));
        let f = parse("a -> (a -> b) -> b").unwrap();
        assert_eq!(
            f,
            Formula::implies(
                Formula::var("a"),
                Formula::implies(Formula::implies(Formula::var("a"), Formula::var("b")), Formula::var("b"))
            )
        );
        let f = parse("(a -> ~b) -> (b -> ~a)").unwrap();
        assert_eq!(f, axiom_suite(Suite::R)[11].1);
        assert_eq!(parse("~~a o b").unwrap().to_string(), "~~a o b");
    }

    #[test]
    fn syntax_errors_report_position() {
        assert_eq!(
            parse("a -> "),
            Err(Error::Syntax {
                position: 5,
                message: "unexpected end of input".into()
            })
        );
        assert!(matches!(parse("a & B"), Err(Error::Syntax { position: 4, .. })));
        assert!(matches!(parse("(a"), Err(Error::Syntax { position: 2, .. })));
        assert!(matches!(parse("a b"), Err(Error::Syntax { position: 2, .. })));
        assert!(matches!(parse("v"), Err(Error::Syntax { position: 0, .. })));
    }

    #[test]
    fn display_round_trips() {
        for s in [
            "a -> b -> c",
            "(a -> b) -> c",
            "a v b v c",
            "a v (b v c)",
            "~(a & b) o c",
            "a & (b v c) -> a & b v c",
            "a o (b o c)",
            "x_1 -> vv",
        ] {
            let f = parse(s).unwrap();
            assert_eq!(f.to_string(), s);
            assert_eq!(parse(&f.to_string()).unwrap(), f);
        }
    }

    #[test]
    fn suites() {
        let rm = axiom_suite(Suite::RM);
        assert_eq!(rm.len(), 14);
        assert_eq!(rm[13].1.to_string(), "a -> a -> a");
        assert!(axiom_suite(Suite::KR).iter().any(|(_, f)| f.to_string() == "a & ~a -> b"));
        assert!(axiom_suite(Suite::R).iter().all(|(l, _)| l != "R14"));
    }

    #[test]
    fn search_bound_guard() {
        let m = models::rm84_matrix().matrix;
        let vars: Vec<String> = (0..10).map(|i| format!("p{i}")).collect();
        let f = parse(&vars.join(" & ")).unwrap();
        assert_eq!(is_valid(&f, &m, 1), Err(Error::SearchBound(1 << 30, VALUATION_BOUND)));
    }

    #[test]
    fn missing_binding() {
        let m = models::m0_matrix().matrix;
        assert_eq!(
            evaluate(&parse("p").unwrap(), &m, &Valuation::new()),
            Err(Error::MissingBinding("p".into()))
        );
    }

    #[test]
    fn shared_variables_rejected() {
        let p = parse("p").unwrap();
        assert!(matches!(
            variable_sharing_demo(&p, &p, ShareStyle::Belnap),
            Err(Error::SharedVariables(_))
        ));
    }
}
