//! Line-oriented text formats for circuits and inequality systems.
//!
//! ```text
//! tc2 <n> <m>
//! gate <t> <idx>:<w> ...                     (m lines)
//! top <T> g<j>:<w> ... x<i>:<w> ...
//!
//! sc2 <n> <m> <c>
//! sgate <pred> <idx>:<w> ...                 (m lines)
//! stop <pred> g<j>:<w> ... x<i>:<w> ...
//!
//! ilp <n> <m> <arity>
//! row <ge|gt|le|lt|eq> <rhs> <idx>:<w> ...   (m lines)
//! ```
//!
//! `<pred>` is `ge <t>`, `eq <v>`, `mod <m> <r>` or `set <v1,v2,...>`.
//! Everything after `#` is a comment. Integers are decimal in `[−2^31, 2^31)`.

use std::collections::BTreeSet;
use std::fmt::Write;

use crate::error::{Error, Result};
use crate::model::{ThresholdCircuit, ThresholdGate};
use crate::oracle::Instance;
use crate::splitlist::{IneqSystem, Relation, Row};
use crate::symsat::{Predicate, SymmetricCircuit, SymmetricGate};

const INT_LIMIT: i64 = 1 << 31;

fn err(line: usize, msg: impl Into<String>) -> Error {
    Error::Parse {
        line,
        msg: msg.into(),
    }
}

/// Non-empty lines with comments stripped, tagged with 1-based line numbers.
struct Lines<'a> {
    lines: Vec<(usize, Vec<&'a str>)>,
    pos: usize,
    last: usize,
}

impl<'a> Lines<'a> {
    fn new(text: &'a str) -> Self {
        let mut last = 0;
        let lines = text
            .lines()
            .enumerate()
            .filter_map(|(i, l)| {
                last = i + 1;
                let body = l.split('#').next().unwrap_or("");
                let toks: Vec<&str> = body.split_whitespace().collect();
                (!toks.is_empty()).then_some((i + 1, toks))
            })
            .collect();
        Self { lines, pos: 0, last }
    }

    fn next(&mut self, what: &str) -> Result<(usize, Vec<&'a str>)> {
        let out = self
            .lines
            .get(self.pos)
            .cloned()
            .ok_or_else(|| err(self.last + 1, format!("unexpected end of input, expected {what}")))?;
        self.pos += 1;
        Ok(out)
    }

    fn finish(&self) -> Result<()> {
        match self.lines.get(self.pos) {
            Some((line, _)) => Err(err(*line, "unexpected content after the last record")),
            None => Ok(()),
        }
    }
}

fn int(line: usize, tok: &str) -> Result<i64> {
    let v: i64 = tok
        .parse()
        .map_err(|_| err(line, format!("expected an integer, found `{tok}`")))?;
    if !(-INT_LIMIT..INT_LIMIT).contains(&v) {
        return Err(err(line, format!("integer {v} outside [-2^31, 2^31)")));
    }
    Ok(v)
}

fn count(line: usize, tok: &str) -> Result<usize> {
    let v = int(line, tok)?;
    usize::try_from(v).map_err(|_| err(line, format!("expected a nonnegative integer, found {v}")))
}

fn keyword(line: usize, toks: &[&str], word: &str, min_len: usize) -> Result<()> {
    if toks[0] != word {
        return Err(err(line, format!("expected `{word}`, found `{}`", toks[0])));
    }
    if toks.len() < min_len {
        return Err(err(line, format!("`{word}` line is too short")));
    }
    Ok(())
}

fn header(line: usize, toks: &[&str], word: &str, fields: usize) -> Result<Vec<usize>> {
    if toks[0] != word {
        return Err(err(line, format!("expected `{word}` header, found `{}`", toks[0])));
    }
    if toks.len() != fields + 1 {
        return Err(err(line, format!("`{word}` header takes {fields} fields")));
    }
    toks[1..].iter().map(|t| count(line, t)).collect()
}

/// `<idx>:<w>` with an optional one-letter prefix on the index.
fn term(line: usize, tok: &str, prefix: Option<char>) -> Result<(usize, i64)> {
    let (idx, w) = tok
        .split_once(':')
        .ok_or_else(|| err(line, format!("expected <index>:<weight>, found `{tok}`")))?;
    let idx = match prefix {
        Some(p) => idx
            .strip_prefix(p)
            .ok_or_else(|| err(line, format!("expected `{p}<index>`, found `{idx}`")))?,
        None => idx,
    };
    let w = int(line, w)?;
    if w == 0 {
        return Err(err(line, format!("zero weight in `{tok}`")));
    }
    Ok((count(line, idx)?, w))
}

fn terms(line: usize, toks: &[&str], n: usize) -> Result<Vec<(usize, i64)>> {
    toks.iter()
        .map(|t| {
            let (v, w) = term(line, t, None)?;
            if v >= n {
                return Err(err(line, format!("variable {v} out of range for n = {n}")));
            }
            Ok((v, w))
        })
        .collect()
}

/// Splits top-gate terms into gate weights and direct wires.
fn top_terms(line: usize, toks: &[&str], m: usize) -> Result<(Vec<i64>, Vec<(usize, i64)>)> {
    let mut weights = vec![0i64; m];
    let mut seen = vec![false; m];
    let mut direct = Vec::new();
    for tok in toks {
        if tok.starts_with('g') {
            let (j, w) = term(line, tok, Some('g'))?;
            if j >= m {
                return Err(err(line, format!("gate g{j} does not exist")));
            }
            if std::mem::replace(&mut seen[j], true) {
                return Err(err(line, format!("gate g{j} listed twice")));
            }
            weights[j] = w;
        } else if tok.starts_with('x') {
            direct.push(term(line, tok, Some('x'))?);
        } else {
            return Err(err(line, format!("expected g<j>:<w> or x<i>:<w>, found `{tok}`")));
        }
    }
    Ok((weights, direct))
}

fn check_overflow(line: usize, n: usize, weights: impl Iterator<Item = i64>) -> Result<()> {
    let max = weights.map(|w| w.unsigned_abs() as u128).max().unwrap_or(0);
    if n as u128 * max >= 1u128 << 62 {
        return Err(err(line, "n·max|w| reaches 2^62"));
    }
    Ok(())
}

fn at(line: usize) -> impl Fn(Error) -> Error {
    move |e| match e {
        Error::Parse { .. } => e,
        other => err(line, other.to_string()),
    }
}

pub fn parse_circuit(text: &str) -> Result<ThresholdCircuit> {
    let mut lines = Lines::new(text);
    let (hl, toks) = lines.next("the `tc2` header")?;
    let h = header(hl, &toks, "tc2", 2)?;
    let (n, m) = (h[0], h[1]);
    let mut bottom = Vec::with_capacity(m);
    for _ in 0..m {
        let (line, toks) = lines.next("a `gate` line")?;
        keyword(line, &toks, "gate", 2)?;
        let t = int(line, toks[1])?;
        let inputs = terms(line, &toks[2..], n)?;
        check_overflow(line, n, inputs.iter().map(|&(_, w)| w))?;
        bottom.push(ThresholdGate::new(inputs, t).map_err(at(line))?);
    }
    let (line, toks) = lines.next("the `top` line")?;
    keyword(line, &toks, "top", 2)?;
    let t = int(line, toks[1])?;
    let (weights, direct) = top_terms(line, &toks[2..], m)?;
    check_overflow(line, n, weights.iter().copied().chain(direct.iter().map(|&(_, w)| w)))?;
    lines.finish()?;
    ThresholdCircuit::new(n, bottom, weights, direct, t).map_err(at(line))
}

fn push_terms(out: &mut String, terms: &[(usize, i64)], prefix: &str) {
    for (v, w) in terms {
        let _ = write!(out, " {prefix}{v}:{w}");
    }
}

fn push_top(out: &mut String, weights: &[i64], direct: &[(usize, i64)]) {
    for (j, &w) in weights.iter().enumerate().filter(|(_, &w)| w != 0) {
        let _ = write!(out, " g{j}:{w}");
    }
    push_terms(out, direct, "x");
    out.push('\n');
}

pub fn emit_circuit(c: &ThresholdCircuit) -> String {
    let mut out = format!("tc2 {} {}\n", c.n_vars(), c.bottom().len());
    for g in c.bottom() {
        let _ = write!(out, "gate {}", g.threshold());
        push_terms(&mut out, g.inputs(), "");
        out.push('\n');
    }
    let _ = write!(out, "top {}", c.top_threshold());
    push_top(&mut out, c.top_gate_weights(), c.direct_wires());
    out
}

/// Reads a predicate from the front of `toks`, returning the number of tokens used.
fn predicate(line: usize, toks: &[&str]) -> Result<(Predicate, usize)> {
    let need = |k: usize| {
        if toks.len() < k {
            Err(err(line, "predicate is missing its arguments"))
        } else {
            Ok(())
        }
    };
    need(1)?;
    match toks[0] {
        "ge" => {
            need(2)?;
            Ok((Predicate::Ge(int(line, toks[1])?), 2))
        }
        "eq" => {
            need(2)?;
            Ok((Predicate::Eq(int(line, toks[1])?), 2))
        }
        "mod" => {
            need(3)?;
            let modulus = int(line, toks[1])?;
            if modulus < 1 {
                return Err(err(line, format!("modulus {modulus} < 1")));
            }
            Ok((
                Predicate::Mod {
                    modulus,
                    residue: int(line, toks[2])?,
                },
                3,
            ))
        }
        "set" => match toks.get(1).filter(|t| !t.contains(':')) {
            Some(list) => {
                let vals = list
                    .split(',')
                    .map(|v| int(line, v))
                    .collect::<Result<BTreeSet<i64>>>()?;
                Ok((Predicate::Set(vals), 2))
            }
            None => Ok((Predicate::Set(BTreeSet::new()), 1)),
        },
        other => Err(err(line, format!("unknown predicate `{other}`"))),
    }
}

pub fn parse_symmetric(text: &str) -> Result<SymmetricCircuit> {
    let mut lines = Lines::new(text);
    let (hl, toks) = lines.next("the `sc2` header")?;
    let h = header(hl, &toks, "sc2", 3)?;
    let (n, m, c) = (h[0], h[1], h[2]);
    let mut bottom = Vec::with_capacity(m);
    for _ in 0..m {
        let (line, toks) = lines.next("an `sgate` line")?;
        keyword(line, &toks, "sgate", 2)?;
        let (pred, used) = predicate(line, &toks[1..])?;
        let inputs = terms(line, &toks[1 + used..], n)?;
        check_overflow(line, n, inputs.iter().map(|&(_, w)| w))?;
        bottom.push(SymmetricGate::new(inputs, pred).map_err(at(line))?);
    }
    let (line, toks) = lines.next("the `stop` line")?;
    keyword(line, &toks, "stop", 2)?;
    let (pred, used) = predicate(line, &toks[1..])?;
    let (weights, direct) = top_terms(line, &toks[1 + used..], m)?;
    check_overflow(line, n, weights.iter().copied().chain(direct.iter().map(|&(_, w)| w)))?;
    lines.finish()?;
    SymmetricCircuit::new(n, bottom, pred, weights, direct, c as u64).map_err(at(line))
}

pub fn emit_symmetric(c: &SymmetricCircuit) -> String {
    let mut out = format!("sc2 {} {} {}\n", c.n_vars(), c.bottom().len(), c.declared_c());
    for g in c.bottom() {
        let _ = write!(out, "sgate {}", g.predicate());
        push_terms(&mut out, g.inputs(), "");
        out.push('\n');
    }
    let _ = write!(out, "stop {}", c.top());
    push_top(&mut out, c.top_gate_weights(), c.direct_wires());
    out
}

pub fn parse_ilp(text: &str) -> Result<IneqSystem> {
    let mut lines = Lines::new(text);
    let (hl, toks) = lines.next("the `ilp` header")?;
    let h = header(hl, &toks, "ilp", 3)?;
    let (n, m, arity) = (h[0], h[1], h[2]);
    let arity = u32::try_from(arity).map_err(|_| err(hl, "arity too large"))?;
    let mut rows = Vec::with_capacity(m);
    let mut last = hl;
    for _ in 0..m {
        let (line, toks) = lines.next("a `row` line")?;
        keyword(line, &toks, "row", 3)?;
        let rel = Relation::from_token(toks[1])
            .ok_or_else(|| err(line, format!("unknown relation `{}`", toks[1])))?;
        let rhs = int(line, toks[2])?;
        let coeffs = terms(line, &toks[3..], n)?;
        check_overflow(line, n.max(arity as usize), coeffs.iter().map(|&(_, w)| w))?;
        rows.push(Row::new(coeffs, rel, rhs));
        last = line;
    }
    lines.finish()?;
    IneqSystem::new(n, arity, rows).map_err(at(last))
}

pub fn emit_ilp(sys: &IneqSystem) -> String {
    let mut out = format!("ilp {} {} {}\n", sys.n_vars(), sys.rows().len(), sys.arity());
    for row in sys.rows() {
        let _ = write!(out, "row {} {}", row.rel, row.rhs);
        push_terms(&mut out, &row.coeffs, "");
        out.push('\n');
    }
    out
}

/// Parses any of the three formats, chosen by the header keyword.
pub fn parse_instance(text: &str) -> Result<Instance> {
    let lines = Lines::new(text);
    let Some((line, toks)) = lines.lines.first() else {
        return Err(err(1, "empty input"));
    };
    match toks[0] {
        "tc2" => parse_circuit(text).map(Instance::Threshold),
        "sc2" => parse_symmetric(text).map(Instance::Symmetric),
        "ilp" => parse_ilp(text).map(Instance::Ilp),
        other => Err(err(*line, format!("unknown header `{other}`"))),
    }
}

/// Text form of an instance; equation systems and vector sets have none.
pub fn emit_instance(inst: &Instance) -> Option<String> {
    match inst {
        Instance::Threshold(c) => Some(emit_circuit(c)),
        Instance::Symmetric(c) => Some(emit_symmetric(c)),
        Instance::Ilp(s) => Some(emit_ilp(s)),
        Instance::Eq(_) | Instance::Vectors(_) => None,
    }
}
