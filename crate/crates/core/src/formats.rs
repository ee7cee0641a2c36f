//! DIMACS CNF, ASCII DRAT, the PR proof format and the native proof format.
//!
//! Native lines:
//!
//! ```text
//! c comment
//! a <lits> 0                      RUP addition
//! a <lits> 0 p <lit>              pivot witness (BC/RAT)
//! a <lits> 0 w <lits> 0           assignment witness (SPR/PR)
//! a <lits> 0 s (<var> <img>)* 0   substitution witness (SR), img = literal | t | f
//! d <lits> 0                      deletion
//! e <x> <p> <q>                   extension x ↔ p ∧ q (extended resolution proofs only)
//! ```

use std::collections::BTreeMap;
use std::fmt::Write as _;

use crate::clause::{Clause, Lit, Var};
use crate::formula::Formula;
use crate::proofsys::ProofStep;
use crate::redundancy::Witness;
use crate::subst::{Image, PartialAssignment, Substitution};
use crate::transforms::ErStep;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("line {line}: {msg}")]
pub struct FormatError {
    pub line: usize,
    pub msg: String,
}

fn err<T>(line: usize, msg: impl Into<String>) -> Result<T, FormatError> {
    Err(FormatError { line, msg: msg.into() })
}

fn parse_int(tok: &str, line: usize) -> Result<i32, FormatError> {
    match tok.parse::<i32>() {
        Ok(v) if v != i32::MIN => Ok(v),
        _ => err(line, format!("expected an integer, found `{tok}`")),
    }
}

/// Reads literals up to the terminating 0.
fn read_lits<'a, I: Iterator<Item = &'a str>>(toks: &mut I, line: usize) -> Result<Vec<Lit>, FormatError> {
    let mut out = Vec::new();
    loop {
        match toks.next() {
            None => return err(line, "unterminated literal list (missing 0)"),
            Some(t) => {
                let v = parse_int(t, line)?;
                if v == 0 {
                    return Ok(out);
                }
                out.push(Lit::new(v));
            }
        }
    }
}

fn make_clause(lits: Vec<Lit>, line: usize) -> Result<Clause, FormatError> {
    Clause::new(lits).or_else(|e| err(line, e.to_string()))
}

fn is_comment(l: &str) -> bool {
    l.is_empty() || l.starts_with('c') || l.starts_with('%')
}

/// Options for [`parse_dimacs_with`].
#[derive(Clone, Copy, Debug, Default)]
pub struct DimacsOptions {
    /// Silently drop tautological clauses instead of failing.
    pub drop_tautologies: bool,
}

pub fn parse_dimacs(text: &str) -> Result<Formula, FormatError> {
    parse_dimacs_with(text, DimacsOptions::default())
}

pub fn parse_dimacs_with(text: &str, opts: DimacsOptions) -> Result<Formula, FormatError> {
    let (f, rest) = parse_dimacs_prefix(text, opts)?;
    if let Some((line, _)) = text[rest..]
        .lines()
        .enumerate()
        .find(|(_, l)| !is_comment(l.trim()))
    {
        let base = text[..rest].lines().count();
        return err(base + line + 1, "content after the declared number of clauses");
    }
    Ok(f)
}

/// Parses the header and exactly the declared number of clauses.
/// Returns the formula and the byte offset where the remaining text starts.
pub fn parse_dimacs_prefix(text: &str, opts: DimacsOptions) -> Result<(Formula, usize), FormatError> {
    let mut header: Option<(Var, usize)> = None;
    let mut f = Formula::new(0);
    let mut cur: Vec<Lit> = Vec::new();
    let mut offset = 0;
    let mut read = 0usize;
    for (no, raw) in text.split_inclusive('\n').enumerate() {
        let line = no + 1;
        offset += raw.len();
        let l = raw.trim();
        if let Some((_, want)) = header {
            if read == want && cur.is_empty() {
                offset -= raw.len();
                break;
            }
        }
        if is_comment(l) {
            continue;
        }
        if l.starts_with('p') {
            if header.is_some() {
                return err(line, "duplicate header");
            }
            let t: Vec<&str> = l.split_whitespace().collect();
            if t.len() != 4 || t[0] != "p" || t[1] != "cnf" {
                return err(line, "malformed header, expected `p cnf V C`");
            }
            let v = t[2].parse::<Var>().or_else(|_| err(line, "malformed variable count"))?;
            let c = t[3].parse::<usize>().or_else(|_| err(line, "malformed clause count"))?;
            header = Some((v, c));
            f = Formula::new(v);
            continue;
        }
        let Some((nv, want)) = header else {
            return err(line, "clause before header");
        };
        for tok in l.split_whitespace() {
            if read == want {
                return err(line, "more clauses than declared");
            }
            let v = parse_int(tok, line)?;
            if v == 0 {
                read += 1;
                let lits = std::mem::take(&mut cur);
                match Clause::new(lits) {
                    Ok(c) => {
                        f.push(c);
                    }
                    Err(e) if !opts.drop_tautologies => return err(line, e.to_string()),
                    Err(_) => {}
                }
            } else {
                if v.unsigned_abs() > nv {
                    return err(line, format!("literal {v} exceeds declared variable count {nv}"));
                }
                cur.push(Lit::new(v));
            }
        }
    }
    let Some((_, want)) = header else {
        return err(0, "missing header");
    };
    if !cur.is_empty() {
        return err(text.lines().count(), "unterminated clause");
    }
    if read < want {
        return err(text.lines().count(), format!("expected {want} clauses, found {read}"));
    }
    Ok((f, offset))
}

fn write_lits(out: &mut String, lits: &[Lit]) {
    for l in lits {
        let _ = write!(out, "{} ", l);
    }
    out.push('0');
}

/// Live clauses with the declared universe as header.
pub fn write_dimacs(f: &Formula) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "p cnf {} {}", f.num_vars(), f.live_count());
    for c in f.live() {
        write_lits(&mut out, c.lits());
        out.push('\n');
    }
    out
}

fn parse_image(tok: &str, line: usize) -> Result<Image, FormatError> {
    match tok {
        "t" => Ok(Image::Const(true)),
        "f" => Ok(Image::Const(false)),
        _ => {
            let v = parse_int(tok, line)?;
            if v == 0 {
                return err(line, "0 is not a substitution image; use t or f");
            }
            Ok(Image::Lit(Lit::new(v)))
        }
    }
}

fn assignment_from_lits(lits: Vec<Lit>, line: usize) -> Result<PartialAssignment, FormatError> {
    let mut t = PartialAssignment::new();
    for l in lits {
        match t.value(l) {
            Some(false) => return err(line, format!("witness assigns {} both ways", l.var())),
            _ => t.set(l.var(), l.is_pos()),
        }
    }
    Ok(t)
}

/// Parses one native line. Comments and blank lines give `None`.
pub fn parse_native_line(raw: &str, line: usize) -> Result<Option<ProofStep>, FormatError> {
    let l = raw.trim();
    if is_comment(l) {
        return Ok(None);
    }
    let mut toks = l.split_whitespace();
    let tag = toks.next().unwrap();
    let step = match tag {
        "d" => {
            let c = make_clause(read_lits(&mut toks, line)?, line)?;
            ProofStep::Delete(c)
        }
        "a" => {
            let c = make_clause(read_lits(&mut toks, line)?, line)?;
            match toks.next() {
                None => ProofStep::AddRup(c),
                Some("p") => {
                    let Some(t) = toks.next() else {
                        return err(line, "missing pivot literal");
                    };
                    let p = parse_int(t, line)?;
                    if p == 0 || !c.contains(Lit::new(p)) {
                        return err(line, format!("pivot {p} is not in the clause"));
                    }
                    ProofStep::AddWitnessed(c, Witness::Pivot(Lit::new(p)))
                }
                Some("w") => {
                    let t = assignment_from_lits(read_lits(&mut toks, line)?, line)?;
                    ProofStep::AddWitnessed(c, Witness::Assignment(t))
                }
                Some("s") => {
                    let mut s = BTreeMap::new();
                    loop {
                        let Some(t) = toks.next() else {
                            return err(line, "unterminated substitution (missing 0)");
                        };
                        let v = parse_int(t, line)?;
                        if v == 0 {
                            break;
                        }
                        if v < 0 {
                            return err(line, format!("substitution domain entry {v} must be a variable"));
                        }
                        let Some(it) = toks.next() else {
                            return err(line, format!("variable {v} has no image"));
                        };
                        if s.insert(v as Var, parse_image(it, line)?).is_some() {
                            return err(line, format!("variable {v} appears twice in the substitution"));
                        }
                    }
                    ProofStep::AddWitnessed(c, Witness::Subst(Substitution::from_pairs(s)))
                }
                Some(t) => return err(line, format!("unknown witness tag `{t}`")),
            }
        }
        t => return err(line, format!("unknown line tag `{t}`")),
    };
    if let Some(t) = toks.next() {
        return err(line, format!("trailing token `{t}`"));
    }
    Ok(Some(step))
}

pub fn parse_native_proof(text: &str) -> Result<Vec<ProofStep>, FormatError> {
    let mut out = Vec::new();
    for (i, l) in text.lines().enumerate() {
        if let Some(s) = parse_native_line(l, i + 1)? {
            out.push(s);
        }
    }
    Ok(out)
}

pub fn write_native_step(out: &mut String, s: &ProofStep) {
    match s {
        ProofStep::Delete(c) => {
            out.push_str("d ");
            write_lits(out, c.lits());
        }
        ProofStep::AddRup(c) => {
            out.push_str("a ");
            write_lits(out, c.lits());
        }
        ProofStep::AddWitnessed(c, w) => {
            out.push_str("a ");
            write_lits(out, c.lits());
            match w {
                Witness::Pivot(p) => {
                    let _ = write!(out, " p {}", p);
                }
                Witness::Assignment(t) => {
                    out.push_str(" w ");
                    write_lits(out, &t.true_lits());
                }
                Witness::Subst(s) => {
                    out.push_str(" s ");
                    for (v, img) in s.iter() {
                        match img {
                            Image::Lit(l) => {
                                let _ = write!(out, "{} {} ", v, l);
                            }
                            Image::Const(b) => {
                                let _ = write!(out, "{} {} ", v, if b { "t" } else { "f" });
                            }
                        }
                    }
                    out.push('0');
                }
            }
        }
    }
    out.push('\n');
}

pub fn write_native_proof(pf: &[ProofStep]) -> String {
    let mut out = String::new();
    for s in pf {
        write_native_step(&mut out, s);
    }
    out
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ExportError {
    #[error("step {0}: substitution witnesses cannot be written in this format")]
    Substitution(usize),
    #[error("step {0}: assignment witnesses cannot be written in DRAT")]
    Assignment(usize),
    #[error("step {0}: witness does not satisfy the clause")]
    Unsatisfied(usize),
}

/// Parses one ASCII DRAT line. Additions carry the first literal as pivot.
pub fn parse_drat_line(raw: &str, line: usize) -> Result<Option<ProofStep>, FormatError> {
    let l = raw.trim();
    if is_comment(l) {
        return Ok(None);
    }
    let (del, body) = match l.strip_prefix('d') {
        Some(rest) => (true, rest),
        None => (false, l),
    };
    let mut toks = body.split_whitespace();
    let lits = read_lits(&mut toks, line)?;
    if let Some(t) = toks.next() {
        return err(line, format!("trailing token `{t}`"));
    }
    let first = lits.first().copied();
    let c = make_clause(lits, line)?;
    Ok(Some(if del {
        ProofStep::Delete(c)
    } else {
        match first {
            Some(p) => ProofStep::AddWitnessed(c, Witness::Pivot(p)),
            None => ProofStep::AddRup(c),
        }
    }))
}

pub fn parse_drat_ascii(text: &str) -> Result<Vec<ProofStep>, FormatError> {
    let mut out = Vec::new();
    for (i, l) in text.lines().enumerate() {
        if let Some(s) = parse_drat_line(l, i + 1)? {
            out.push(s);
        }
    }
    Ok(out)
}

fn lits_with_first(c: &Clause, first: Lit) -> Vec<Lit> {
    std::iter::once(first).chain(c.lits().iter().copied().filter(|&l| l != first)).collect()
}

/// RUP additions are written as plain lines, which re-import as pivot steps.
pub fn write_drat_ascii(pf: &[ProofStep]) -> Result<String, ExportError> {
    let mut out = String::new();
    for (i, s) in pf.iter().enumerate() {
        match s {
            ProofStep::Delete(c) => {
                out.push_str("d ");
                write_lits(&mut out, c.lits());
            }
            ProofStep::AddRup(c) => write_lits(&mut out, c.lits()),
            ProofStep::AddWitnessed(c, Witness::Pivot(p)) => write_lits(&mut out, &lits_with_first(c, *p)),
            ProofStep::AddWitnessed(_, Witness::Assignment(_)) => return Err(ExportError::Assignment(i)),
            ProofStep::AddWitnessed(_, Witness::Subst(_)) => return Err(ExportError::Substitution(i)),
        }
        out.push('\n');
    }
    Ok(out)
}

/// Parses one PR-format line. A witness starts where the clause's first literal repeats.
pub fn parse_pr_line(raw: &str, line: usize) -> Result<Option<ProofStep>, FormatError> {
    let l = raw.trim();
    if is_comment(l) {
        return Ok(None);
    }
    let (del, body) = match l.strip_prefix('d') {
        Some(rest) => (true, rest),
        None => (false, l),
    };
    let mut toks = body.split_whitespace();
    let lits = read_lits(&mut toks, line)?;
    if let Some(t) = toks.next() {
        return err(line, format!("trailing token `{t}`"));
    }
    if del {
        return Ok(Some(ProofStep::Delete(make_clause(lits, line)?)));
    }
    let split = lits.first().and_then(|&f| lits[1..].iter().position(|&l| l == f).map(|k| k + 1));
    Ok(Some(match split {
        None => ProofStep::AddRup(make_clause(lits, line)?),
        Some(k) => {
            let c = make_clause(lits[..k].to_vec(), line)?;
            let t = assignment_from_lits(lits[k..].to_vec(), line)?;
            ProofStep::AddWitnessed(c, Witness::Assignment(t))
        }
    }))
}

pub fn parse_pr_proof(text: &str) -> Result<Vec<ProofStep>, FormatError> {
    let mut out = Vec::new();
    for (i, l) in text.lines().enumerate() {
        if let Some(s) = parse_pr_line(l, i + 1)? {
            out.push(s);
        }
    }
    Ok(out)
}

/// Pivot witnesses are written as their full one-flip assignment
/// (`p` followed by the negations of the other clause literals).
pub fn write_pr_proof(pf: &[ProofStep]) -> Result<String, ExportError> {
    let mut out = String::new();
    for (i, s) in pf.iter().enumerate() {
        match s {
            ProofStep::Delete(c) => {
                out.push_str("d ");
                write_lits(&mut out, c.lits());
            }
            ProofStep::AddRup(c) => write_lits(&mut out, c.lits()),
            ProofStep::AddWitnessed(c, Witness::Pivot(p)) => {
                let mut lits = lits_with_first(c, *p);
                lits.push(*p);
                lits.extend(c.lits().iter().filter(|&&l| l != *p).map(|&l| !l));
                write_lits(&mut out, &lits);
            }
            ProofStep::AddWitnessed(c, Witness::Assignment(t)) => {
                let Some(&first) = c.lits().iter().find(|&&l| t.value(l) == Some(true)) else {
                    return Err(ExportError::Unsatisfied(i));
                };
                let mut lits = lits_with_first(c, first);
                lits.push(first);
                lits.extend(t.true_lits().into_iter().filter(|&l| l != first));
                write_lits(&mut out, &lits);
            }
            ProofStep::AddWitnessed(_, Witness::Subst(_)) => return Err(ExportError::Substitution(i)),
        }
        out.push('\n');
    }
    Ok(out)
}

/// Proof formats accepted by [`parse_proof`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ProofFormat {
    Native,
    Drat,
    Pr,
}

impl ProofFormat {
    pub fn parse_line(self, raw: &str, line: usize) -> Result<Option<ProofStep>, FormatError> {
        match self {
            ProofFormat::Native => parse_native_line(raw, line),
            ProofFormat::Drat => parse_drat_line(raw, line),
            ProofFormat::Pr => parse_pr_line(raw, line),
        }
    }
}

pub fn parse_proof(text: &str, fmt: ProofFormat) -> Result<Vec<ProofStep>, FormatError> {
    match fmt {
        ProofFormat::Native => parse_native_proof(text),
        ProofFormat::Drat => parse_drat_ascii(text),
        ProofFormat::Pr => parse_pr_proof(text),
    }
}

pub fn write_proof(pf: &[ProofStep], fmt: ProofFormat) -> Result<String, ExportError> {
    match fmt {
        ProofFormat::Native => Ok(write_native_proof(pf)),
        ProofFormat::Drat => write_drat_ascii(pf),
        ProofFormat::Pr => write_pr_proof(pf),
    }
}

/// Extended resolution proofs: `e x p q` records and `a <lits> 0` resolution lines.
pub fn parse_er_proof(text: &str) -> Result<Vec<ErStep>, FormatError> {
    let mut out = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        let l = raw.trim();
        if is_comment(l) {
            continue;
        }
        let mut toks = l.split_whitespace();
        match toks.next() {
            Some("e") => {
                let mut nums = Vec::new();
                for t in toks.by_ref() {
                    nums.push(parse_int(t, line)?);
                }
                if nums.len() == 4 && nums[3] == 0 {
                    nums.pop();
                }
                if nums.len() != 3 || nums.contains(&0) || nums[0] < 0 {
                    return err(line, "expected `e <var> <lit> <lit>`");
                }
                out.push(ErStep::Extend {
                    x: nums[0] as Var,
                    p: Lit::new(nums[1]),
                    q: Lit::new(nums[2]),
                });
            }
            _ => match parse_native_line(l, line)? {
                Some(ProofStep::AddRup(c)) => out.push(ErStep::Resolve(c)),
                _ => return err(line, "extended resolution proofs contain only `e` and plain `a` lines"),
            },
        }
    }
    Ok(out)
}

pub fn write_er_proof(pf: &[ErStep]) -> String {
    let mut out = String::new();
    for s in pf {
        match s {
            ErStep::Extend { x, p, q } => {
                let _ = writeln!(out, "e {} {} {}", x, p, q);
            }
            ErStep::Resolve(c) => write_native_step(&mut out, &ProofStep::AddRup(c.clone())),
        }
    }
    out
}
