//! Proof-to-proof passes: PR to PR₀, Davis–Putnam elimination and recovery,
//! PR to DRAT with one fresh variable, DPR⁻ to DRAT⁻, PR⁻ to SPR⁻ by
//! discrepancy expansion, ER to BC⁻, and variable-reuse normalization.

use std::collections::{BTreeSet, HashMap, HashSet};

use serde::{Deserialize, Serialize};

use crate::clause::{Clause, Lit, Var};
use crate::formula::Formula;
use crate::gens::gen_xm;
use crate::proofsys::{Checker, Proof, ProofStep, StepError, SystemSpec, Verdict};
use crate::redundancy::{self, normalize_pr_witness, Reject, Rule, Witness};
use crate::subst::{restrict_clause, Image, PartialAssignment, Restricted, Substitution};
use crate::up::Propagator;

/// One line of an extended resolution proof.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum ErStep {
    /// Introduces `x ↔ (p ∧ q)` as `x ∨ ¬p ∨ ¬q`, `¬x ∨ p`, `¬x ∨ q`.
    Extend { x: Var, p: Lit, q: Lit },
    /// A clause implied by unit propagation (in particular any resolvent).
    Resolve(Clause),
}

impl ErStep {
    pub fn extension_clauses(x: Var, p: Lit, q: Lit) -> Option<[Clause; 3]> {
        Some([
            Clause::new([Lit::pos(x), !p, !q]).ok()?,
            Clause::new([Lit::neg(x), p]).ok()?,
            Clause::new([Lit::neg(x), q]).ok()?,
        ])
    }
}

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum ErError {
    #[error("step {step}: extension variable {var} is not fresh")]
    NotFresh { step: usize, var: Var },
    #[error("step {step}: variable {var} is not defined")]
    UnknownVar { step: usize, var: Var },
    #[error("step {step}: extension clauses are tautological")]
    Tautological { step: usize },
    #[error("step {step}: clause is not implied by unit propagation")]
    NotImplied { step: usize },
    #[error("proof does not derive the empty clause")]
    NoRefutation,
}

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum TransformError {
    #[error("input proof rejected at step {step}: {reason}")]
    InvalidInput { step: usize, reason: StepError },
    #[error("witness rejected: {0}")]
    Witness(Reject),
    #[error("variable {0} is not fresh")]
    NotFresh(Var),
    #[error("step {0}: substitution witness is not an assignment")]
    NotAssignment(usize),
    #[error("step {0}: total witness on a satisfiable clause set")]
    SatisfiableLine(usize),
    #[error("step {0}: deleted clause is not live")]
    DeleteNotLive(usize),
    #[error("{0}")]
    Er(#[from] ErError),
    #[error("unsupported: {0}")]
    Unsupported(String),
}

/// Live clause multiset with per-variable occurrence counts and lookup by value.
#[derive(Clone, Debug, Default)]
struct ClauseDb {
    clauses: Vec<Option<Clause>>,
    by_value: HashMap<Clause, Vec<usize>>,
    occ: Vec<Vec<usize>>,
    pos: Vec<usize>,
    neg: Vec<usize>,
}

impl ClauseDb {
    fn from_formula(g: &Formula) -> ClauseDb {
        let mut db = ClauseDb::default();
        for c in g.live() {
            db.add(c.clone());
        }
        db
    }

    fn grow(&mut self, v: Var) {
        let n = v as usize + 1;
        if self.occ.len() < n {
            self.occ.resize_with(n, Vec::new);
            self.pos.resize(n, 0);
            self.neg.resize(n, 0);
        }
    }

    fn add(&mut self, c: Clause) {
        let id = self.clauses.len();
        for &l in c.lits() {
            self.grow(l.var());
            self.occ[l.var() as usize].push(id);
            if l.is_pos() {
                self.pos[l.var() as usize] += 1;
            } else {
                self.neg[l.var() as usize] += 1;
            }
        }
        self.by_value.entry(c.clone()).or_default().push(id);
        self.clauses.push(Some(c));
    }

    fn delete(&mut self, c: &Clause) -> bool {
        let Some(ids) = self.by_value.get_mut(c) else {
            return false;
        };
        let id = ids.pop().expect("non-empty id list");
        if ids.is_empty() {
            self.by_value.remove(c);
        }
        for &l in c.lits() {
            if l.is_pos() {
                self.pos[l.var() as usize] -= 1;
            } else {
                self.neg[l.var() as usize] -= 1;
            }
        }
        self.clauses[id] = None;
        true
    }

    fn contains(&self, c: &Clause) -> bool {
        self.by_value.contains_key(c)
    }

    fn count(&self, v: Var) -> usize {
        self.pos.get(v as usize).map_or(0, |p| p + self.neg[v as usize])
    }

    fn live(&self) -> impl Iterator<Item = &Clause> + '_ {
        self.clauses.iter().flatten()
    }

    /// Live clauses mentioning any of `vars`, each once, in insertion order.
    fn touching<I: IntoIterator<Item = Var>>(&mut self, vars: I) -> Vec<Clause> {
        let mut ids: Vec<usize> = Vec::new();
        for v in vars {
            let Some(list) = self.occ.get_mut(v as usize) else { continue };
            let clauses = &self.clauses;
            list.retain(|&id| clauses[id].is_some());
            ids.extend_from_slice(list);
        }
        ids.sort_unstable();
        ids.dedup();
        ids.into_iter().map(|id| self.clauses[id].clone().unwrap()).collect()
    }

    /// Live clauses containing `l`.
    fn with_lit(&mut self, l: Lit) -> Vec<Clause> {
        self.touching([l.var()]).into_iter().filter(|c| c.contains(l)).collect()
    }
}

/// Emits steps to a sink while keeping the clause database in sync.
struct Emitter<'a> {
    db: ClauseDb,
    sink: &'a mut dyn FnMut(ProofStep),
    emitted: usize,
}

impl<'a> Emitter<'a> {
    fn new(db: ClauseDb, sink: &'a mut dyn FnMut(ProofStep)) -> Emitter<'a> {
        Emitter { db, sink, emitted: 0 }
    }

    fn push(&mut self, s: ProofStep) {
        self.emitted += 1;
        (self.sink)(s);
    }

    fn rup(&mut self, c: Clause) {
        self.db.add(c.clone());
        self.push(ProofStep::AddRup(c));
    }

    fn witnessed(&mut self, c: Clause, w: Witness) {
        self.db.add(c.clone());
        self.push(ProofStep::AddWitnessed(c, w));
    }

    fn delete(&mut self, c: Clause) {
        let ok = self.db.delete(&c);
        debug_assert!(ok, "deleting a clause that is not live: {c:?}");
        self.push(ProofStep::Delete(c));
    }
}

fn collect(f: impl FnOnce(&mut dyn FnMut(ProofStep)) -> Result<(), TransformError>) -> Result<Proof, TransformError> {
    let mut out = Vec::new();
    f(&mut |s| out.push(s))?;
    Ok(out)
}

fn check_input(g0: &Formula, pf: &[ProofStep], spec: SystemSpec) -> Result<(), TransformError> {
    let mut ch = Checker::new(g0, spec);
    match ch.run(pf) {
        Verdict::Rejected { step, reason } => Err(TransformError::InvalidInput { step, reason }),
        _ => Ok(()),
    }
}

/// Distinct non-tautological clauses `C ∨ D↾τ` for `D` among `ds` not satisfied by `τ`.
fn delta(c: &Clause, tau: &PartialAssignment, ds: &[Clause]) -> Vec<Clause> {
    let mut seen = HashSet::new();
    let mut out = Vec::new();
    for d in ds {
        if let Restricted::Clause(e) = restrict_clause(d, tau) {
            if let Some(ce) = c.or(&e) {
                if seen.insert(ce.clone()) {
                    out.push(ce);
                }
            }
        }
    }
    out
}

/// Replaces one PR inference by `⊢₁` additions of `Δ = C ∨ Γ↾τ`, a PR₀
/// inference with the normalized witness, and deletion of `Δ`.
pub fn pr_to_pr0_steps(g: &Formula, c: &Clause, t: &PartialAssignment) -> Result<Proof, TransformError> {
    redundancy::pr(g, c, t).map_err(TransformError::Witness)?;
    let tau = normalize_pr_witness(c, t).map_err(TransformError::Witness)?;
    let d = delta(c, &tau, &g.live_clauses());
    let mut out: Proof = d.iter().cloned().map(ProofStep::AddRup).collect();
    out.push(ProofStep::AddWitnessed(c.clone(), Witness::Assignment(tau)));
    out.extend(d.into_iter().map(ProofStep::Delete));
    Ok(out)
}

/// Non-tautological resolvents on `x`, deduplicated, that are not already
/// among the `x`-free clauses.
fn dp_resolvents(pos: &[Clause], neg: &[Clause], x: Var, present: impl Fn(&Clause) -> bool) -> Vec<Clause> {
    let mut seen = HashSet::new();
    let mut out = Vec::new();
    for p in pos {
        for n in neg {
            if let Some(r) = p.resolve(n, Lit::pos(x)) {
                if !present(&r) && seen.insert(r.clone()) {
                    out.push(r);
                }
            }
        }
    }
    out
}

fn split_on(g: &Formula, x: Var) -> (Vec<Clause>, Vec<Clause>, Vec<Clause>) {
    let (mut pos, mut neg, mut rest) = (Vec::new(), Vec::new(), Vec::new());
    for c in g.live() {
        match c.lit_of(x) {
            Some(l) if l.is_pos() => pos.push(c.clone()),
            Some(_) => neg.push(c.clone()),
            None => rest.push(c.clone()),
        }
    }
    (pos, neg, rest)
}

/// `Γ^(x)`: the `x`-free clauses followed by all new non-tautological resolvents on `x`.
pub fn dp_eliminate(g: &Formula, x: Var) -> Formula {
    let (pos, neg, rest) = split_on(g, x);
    let have: HashSet<&Clause> = rest.iter().collect();
    let res = dp_resolvents(&pos, &neg, x, |r| have.contains(r));
    let mut out = Formula::new(g.num_vars());
    for c in rest.into_iter().chain(res) {
        out.push(c);
    }
    out
}

/// DRAT derivation of `g` from `dp_eliminate(g, x)`: the `x`-clauses by RAT on
/// `x`, the `¬x`-clauses by RAT on `¬x`, then deletion of the resolvents.
pub fn derive_gamma_from_dp(g: &Formula, x: Var) -> Proof {
    let (pos, neg, rest) = split_on(g, x);
    let have: HashSet<&Clause> = rest.iter().collect();
    let res = dp_resolvents(&pos, &neg, x, |r| have.contains(r));
    let mut out: Proof = Vec::new();
    out.extend(pos.into_iter().map(|c| ProofStep::AddWitnessed(c, Witness::Pivot(Lit::pos(x)))));
    out.extend(neg.into_iter().map(|c| ProofStep::AddWitnessed(c, Witness::Pivot(Lit::neg(x)))));
    out.extend(res.into_iter().map(ProofStep::Delete));
    out
}

/// Which clauses the one-variable construction walks over.
#[derive(Copy, Clone, Debug, PartialEq, Eq)]
enum Scope {
    All,
    /// Only clauses sharing a variable with `dom(τ)`; the others are left
    /// alone since `D↾τ = D` already subsumes `D↾τ ∨ ¬x`.
    Touched,
}

/// The five-step DRAT derivation of `Γ ∪ {C}` from `Γ` using the fresh variable `x`.
fn one_var_steps(em: &mut Emitter<'_>, c: &Clause, tau: &PartialAssignment, x: Var, scope: Scope) {
    let ds: Vec<Clause> = match scope {
        Scope::All => em.db.live().cloned().collect(),
        Scope::Touched => em.db.touching(tau.vars()),
    };
    let mut step1 = Vec::new();
    let mut sat = Vec::new();
    for d in ds {
        match restrict_clause(&d, tau) {
            Restricted::Satisfied => sat.push(d),
            Restricted::Clause(e) => step1.push(e.with(Lit::neg(x)).expect("x is fresh")),
        }
    }
    for s in &step1 {
        em.witnessed(s.clone(), Witness::Pivot(Lit::neg(x)));
    }
    let cx = c.with(Lit::pos(x)).expect("x is fresh");
    em.witnessed(cx.clone(), Witness::Pivot(Lit::pos(x)));
    let mut ex = Vec::with_capacity(sat.len());
    for e in &sat {
        let e1 = e.with(Lit::pos(x)).expect("x is fresh");
        em.rup(e1.clone());
        em.delete(e.clone());
        ex.push(e1);
    }
    let mut links = Vec::with_capacity(tau.len());
    for p in tau.true_lits() {
        let l = Clause::new([Lit::neg(x), p]).expect("x is fresh");
        em.witnessed(l.clone(), Witness::Pivot(p));
        links.push(l);
    }
    em.rup(c.clone());
    for e in &sat {
        em.rup(e.clone());
    }
    for s in step1.into_iter().chain([cx]).chain(ex).chain(links) {
        em.delete(s);
    }
}

/// DRAT fragment deriving `Γ ∪ {C}` from `Γ` with one variable `x` outside
/// `Γ`, `C` and `τ`. Step 1 covers every clause of `Γ` not satisfied by `τ`.
pub fn pr_step_to_drat(g: &Formula, c: &Clause, t: &PartialAssignment, x: Var) -> Result<Proof, TransformError> {
    if g.vars().contains(&x) || c.mentions(x) || t.contains(x) {
        return Err(TransformError::NotFresh(x));
    }
    redundancy::pr(g, c, t).map_err(TransformError::Witness)?;
    collect(|sink| {
        let mut em = Emitter::new(ClauseDb::from_formula(g), sink);
        one_var_steps(&mut em, c, t, x, Scope::All);
        Ok(())
    })
}

/// `τ = ¬C` with exactly one literal of `C` made true: that literal.
fn lpr_pivot(c: &Clause, tau: &PartialAssignment) -> Option<Lit> {
    if tau.len() != c.len() {
        return None;
    }
    let mut flipped = c.lits().iter().filter(|&&l| tau.value(l) == Some(true));
    let p = *flipped.next()?;
    if flipped.next().is_some() || c.lits().iter().any(|&l| tau.value(l).is_none()) {
        return None;
    }
    Some(p)
}

/// Variable to eliminate for one PR step: the one outside `dom(τ)` with the
/// fewest resolvents, ties to the smallest id.
fn pick_elimination_var(db: &ClauseDb, tau: &PartialAssignment) -> Option<Var> {
    (1..db.occ.len() as Var)
        .filter(|&v| db.count(v) > 0 && !tau.contains(v))
        .min_by_key(|&v| (db.pos[v as usize] * db.neg[v as usize], v))
}

/// Simulates one PR inference (normalized witness `tau`) in DRAT⁻.
fn simulate_pr(em: &mut Emitter<'_>, c: &Clause, tau: &PartialAssignment, step: usize) -> Result<(), TransformError> {
    let touched = em.db.touching(tau.vars());
    let d = delta(c, tau, &touched);
    for e in &d {
        em.rup(e.clone());
    }
    match pick_elimination_var(&em.db, tau) {
        None => {
            // τ is total, so Γ↾τ = {⊥} and C is already among Δ
            if !em.db.contains(c) {
                return Err(TransformError::SatisfiableLine(step));
            }
            em.rup(c.clone());
        }
        Some(x) => {
            let pos = em.db.with_lit(Lit::pos(x));
            let neg = em.db.with_lit(Lit::neg(x));
            let res = {
                let db = &em.db;
                dp_resolvents(&pos, &neg, x, |r| db.contains(r))
            };
            for r in &res {
                em.rup(r.clone());
            }
            for k in pos.iter().chain(neg.iter()) {
                em.delete(k.clone());
            }
            one_var_steps(em, c, tau, x, Scope::Touched);
            for k in pos {
                em.witnessed(k, Witness::Pivot(Lit::pos(x)));
            }
            for k in neg {
                em.witnessed(k, Witness::Pivot(Lit::neg(x)));
            }
            for r in res {
                em.delete(r);
            }
        }
    }
    for e in d {
        em.delete(e);
    }
    Ok(())
}

/// Streams the DRAT⁻ translation of a DPR⁻ proof into `sink`; returns the
/// number of emitted steps. The input is replayed first unless `trusted`.
pub fn dpr_to_drat_nnv_stream(
    g0: &Formula,
    pf: &[ProofStep],
    trusted: bool,
    sink: &mut dyn FnMut(ProofStep),
) -> Result<usize, TransformError> {
    if !trusted {
        check_input(g0, pf, SystemSpec::new(Rule::Pr, true, false))?;
    }
    let mut em = Emitter::new(ClauseDb::from_formula(g0), sink);
    for (i, s) in pf.iter().enumerate() {
        match s {
            ProofStep::AddRup(c) => em.rup(c.clone()),
            ProofStep::Delete(c) => {
                if !em.db.contains(c) {
                    return Err(TransformError::DeleteNotLive(i));
                }
                em.delete(c.clone())
            }
            ProofStep::AddWitnessed(c, Witness::Pivot(p)) => em.witnessed(c.clone(), Witness::Pivot(*p)),
            ProofStep::AddWitnessed(c, w) => {
                let t = match w {
                    Witness::Assignment(t) => t.clone(),
                    Witness::Subst(s) => s.as_assignment().ok_or(TransformError::NotAssignment(i))?,
                    Witness::Pivot(_) => unreachable!(),
                };
                let tau = normalize_pr_witness(c, &t).map_err(TransformError::Witness)?;
                match lpr_pivot(c, &tau) {
                    Some(p) => em.witnessed(c.clone(), Witness::Pivot(p)),
                    None => simulate_pr(&mut em, c, &tau, i)?,
                }
            }
        }
        if s.is_addition() && s.clause().is_empty() {
            break;
        }
    }
    Ok(em.emitted)
}

/// DRAT⁻ proof equivalent to a DPR⁻ proof of `g0`.
pub fn dpr_to_drat_nnv(g0: &Formula, pf: &[ProofStep]) -> Result<Proof, TransformError> {
    collect(|sink| dpr_to_drat_nnv_stream(g0, pf, false, sink).map(|_| ()))
}

/// Expands each PR step of discrepancy `s` into `2^s` SPR steps on `C ∨ Dᵢ`
/// followed by `2^s − 1` resolutions back to `C`.
pub fn pr_to_spr_disc(g0: &Formula, pf: &[ProofStep]) -> Result<Proof, TransformError> {
    check_input(g0, pf, SystemSpec::strict(Rule::Pr))?;
    let mut out = Vec::with_capacity(pf.len());
    for (i, s) in pf.iter().enumerate() {
        let (c, t) = match s {
            ProofStep::AddWitnessed(c, Witness::Assignment(t)) => (c, t.clone()),
            ProofStep::AddWitnessed(c, Witness::Subst(sub)) => (c, sub.as_assignment().ok_or(TransformError::NotAssignment(i))?),
            _ => {
                out.push(s.clone());
                continue;
            }
        };
        if t.len() == c.len() && c.vars().all(|v| t.contains(v)) {
            out.push(ProofStep::AddWitnessed(c.clone(), Witness::Assignment(t)));
            continue;
        }
        let tau = normalize_pr_witness(c, &t).map_err(TransformError::Witness)?;
        let extra: Vec<Var> = tau.vars().filter(|&v| !c.mentions(v)).collect();
        if extra.is_empty() {
            out.push(ProofStep::AddWitnessed(c.clone(), Witness::Assignment(tau)));
            continue;
        }
        let s = extra.len();
        let with_pattern = |bits: usize, k: usize| -> Clause {
            let d = Clause::new((0..k).map(|j| Lit::with_value(extra[j], (bits >> j) & 1 == 1))).unwrap();
            c.or(&d).expect("pattern variables lie outside C")
        };
        for bits in 0..1usize << s {
            out.push(ProofStep::AddWitnessed(with_pattern(bits, s), Witness::Assignment(tau.clone())));
        }
        for k in (0..s).rev() {
            for bits in 0..1usize << k {
                out.push(ProofStep::AddRup(with_pattern(bits, k)));
            }
        }
    }
    Ok(out)
}

/// Checks that `pf` is an ER refutation of `g0`.
pub fn validate_er(g0: &Formula, pf: &[ErStep]) -> Result<(), ErError> {
    let mut known: HashSet<Var> = g0.vars().into_iter().collect();
    let max = pf
        .iter()
        .map(|s| match s {
            ErStep::Extend { x, p, q } => (*x).max(p.var()).max(q.var()),
            ErStep::Resolve(c) => c.max_var(),
        })
        .max()
        .unwrap_or(0)
        .max(g0.num_vars());
    let mut prop = Propagator::from_clauses(max, g0.live());
    let mut refuted = g0.has_empty();
    for (i, s) in pf.iter().enumerate() {
        match s {
            ErStep::Extend { x, p, q } => {
                if known.contains(x) {
                    return Err(ErError::NotFresh { step: i, var: *x });
                }
                for v in [p.var(), q.var()] {
                    if !known.contains(&v) {
                        return Err(ErError::UnknownVar { step: i, var: v });
                    }
                }
                let cs = ErStep::extension_clauses(*x, *p, *q).ok_or(ErError::Tautological { step: i })?;
                for c in &cs {
                    prop.add_clause(c.lits());
                }
                known.insert(*x);
            }
            ErStep::Resolve(c) => {
                if let Some(v) = c.vars().find(|v| !known.contains(v)) {
                    return Err(ErError::UnknownVar { step: i, var: v });
                }
                if !prop.rup(c.lits()) {
                    return Err(ErError::NotImplied { step: i });
                }
                prop.add_clause(c.lits());
                refuted |= c.is_empty();
            }
        }
    }
    if refuted {
        Ok(())
    } else {
        Err(ErError::NoRefutation)
    }
}

/// BC⁻ refutation of `g0 ∪ X^m` from an ER refutation of `g0`, where `m` is
/// the proof length. Returns the extended formula and the proof.
pub fn er_to_bc_nnv(g0: &Formula, pf: &[ErStep]) -> Result<(Formula, Proof), TransformError> {
    validate_er(g0, pf)?;
    let m = pf.len().max(1);
    let offset = g0.num_vars().max(g0.vars().last().copied().unwrap_or(0)) + 1;
    let y = offset;
    let mut g = g0.clone();
    for c in gen_xm(m, offset).live() {
        g.push(c.clone());
    }
    let mut rename: HashMap<Var, Var> = HashMap::new();
    let ren = |rename: &HashMap<Var, Var>, l: Lit| Lit::with_value(*rename.get(&l.var()).unwrap_or(&l.var()), l.is_pos());
    let mut out = Vec::new();
    let mut ext = 0;
    for s in pf {
        match s {
            ErStep::Extend { x, p, q } => {
                ext += 1;
                let xi = offset + ext as Var;
                let (p, q) = (ren(&rename, *p), ren(&rename, *q));
                rename.insert(*x, xi);
                let xl = Lit::pos(xi);
                out.push(ProofStep::AddWitnessed(Clause::new([xl, !p, !q]).unwrap(), Witness::Pivot(xl)));
                out.push(ProofStep::AddWitnessed(Clause::new([!xl, p, Lit::neg(y)]).unwrap(), Witness::Pivot(!xl)));
                out.push(ProofStep::AddWitnessed(Clause::new([!xl, q, Lit::neg(y)]).unwrap(), Witness::Pivot(!xl)));
                out.push(ProofStep::AddRup(Clause::new([!xl, p]).unwrap()));
                out.push(ProofStep::AddRup(Clause::new([!xl, q]).unwrap()));
            }
            ErStep::Resolve(c) => {
                let c = Clause::new(c.lits().iter().map(|&l| ren(&rename, l))).unwrap();
                let done = c.is_empty();
                out.push(ProofStep::AddRup(c));
                if done {
                    break;
                }
            }
        }
    }
    Ok((g, out))
}

/// Steps (index, variable) that add a clause mentioning a variable which
/// occurred earlier but is absent from the current clause set.
pub fn variable_reuse_gaps(g0: &Formula, pf: &[ProofStep]) -> Vec<(usize, Var)> {
    let mut db = ClauseDb::from_formula(g0);
    let mut seen: BTreeSet<Var> = g0.vars();
    let mut out = Vec::new();
    for (i, s) in pf.iter().enumerate() {
        match s {
            ProofStep::Delete(c) => {
                db.delete(c);
            }
            _ => {
                let c = s.clause();
                for v in c.vars() {
                    if db.count(v) == 0 && seen.contains(&v) {
                        out.push((i, v));
                    }
                    seen.insert(v);
                }
                db.add(c.clone());
            }
        }
    }
    out
}

fn flip_lit(l: Lit, flips: &HashSet<Var>) -> Lit {
    if flips.contains(&l.var()) {
        !l
    } else {
        l
    }
}

fn flip_clause(c: &Clause, flips: &HashSet<Var>) -> Clause {
    Clause::new(c.lits().iter().map(|&l| flip_lit(l, flips))).unwrap()
}

fn flip_image(i: Image, flips: &HashSet<Var>) -> Image {
    match i {
        Image::Lit(l) => Image::Lit(flip_lit(l, flips)),
        c => c,
    }
}

/// Conjugates a step by the renaming that negates the variables in `flips`.
fn flip_step(s: &ProofStep, flips: &HashSet<Var>) -> ProofStep {
    if flips.is_empty() {
        return s.clone();
    }
    match s {
        ProofStep::AddRup(c) => ProofStep::AddRup(flip_clause(c, flips)),
        ProofStep::Delete(c) => ProofStep::Delete(flip_clause(c, flips)),
        ProofStep::AddWitnessed(c, w) => {
            let w = match w {
                Witness::Pivot(p) => Witness::Pivot(flip_lit(*p, flips)),
                Witness::Assignment(t) => {
                    Witness::Assignment(PartialAssignment::from_pairs(t.iter().map(|(v, b)| (v, b != flips.contains(&v)))))
                }
                Witness::Subst(sub) => {
                    let mut out = Substitution::identity();
                    // identity entries are implicit; flipped variables stay fixed
                    for (v, img) in sub.iter() {
                        let img = flip_image(img, flips);
                        out.set(v, if flips.contains(&v) { img.negate() } else { img });
                    }
                    Witness::Subst(out)
                }
            };
            ProofStep::AddWitnessed(flip_clause(c, flips), w)
        }
    }
}

fn strip_witness(w: &Witness, vars: &HashMap<Var, Lit>) -> Witness {
    match w {
        Witness::Pivot(p) => Witness::Pivot(*p),
        Witness::Assignment(t) => Witness::Assignment(PartialAssignment::from_pairs(t.iter().filter(|(v, _)| !vars.contains_key(v)))),
        Witness::Subst(s) => Witness::Subst(Substitution::from_pairs(s.iter().filter(|(v, _)| !vars.contains_key(v)))),
    }
}

/// Rewrites `pf` so that no step re-introduces a variable after it vanished:
/// before the last clause on `x` is deleted a unit on `x` is added by BC, and
/// the re-introducing clause is added by BC against that unit, which is then
/// deleted. When the re-introduced sign differs, `x` is negated from there on.
pub fn normalize_variable_reuse(g0: &Formula, pf: &[ProofStep], spec: SystemSpec) -> Result<Proof, TransformError> {
    check_input(g0, pf, spec)?;
    let mut last_mention: HashMap<Var, usize> = HashMap::new();
    for (i, s) in pf.iter().enumerate() {
        for v in s.clause().vars() {
            last_mention.insert(v, i);
        }
    }
    collect(|sink| {
        let mut em = Emitter::new(ClauseDb::from_formula(g0), sink);
        let mut flips: HashSet<Var> = HashSet::new();
        let mut bridge: HashMap<Var, Lit> = HashMap::new();
        for (i, s) in pf.iter().enumerate() {
            let s = flip_step(s, &flips);
            match s {
                ProofStep::Delete(c) => {
                    for &l in c.lits() {
                        let v = l.var();
                        if em.db.count(v) == 1 && last_mention[&v] > i && !bridge.contains_key(&v) {
                            em.witnessed(Clause::unit(l), Witness::Pivot(l));
                            bridge.insert(v, l);
                        }
                    }
                    em.delete(c);
                }
                s => {
                    let c = s.clause();
                    let back: Vec<Var> = c.vars().filter(|v| bridge.contains_key(v)).collect();
                    if back.is_empty() {
                        match &s {
                            ProofStep::AddWitnessed(c, w) if !bridge.is_empty() => {
                                if let Witness::Subst(sub) = w {
                                    if sub.iter().any(|(_, img)| matches!(img, Image::Lit(l) if bridge.contains_key(&l.var()))) {
                                        return Err(TransformError::Unsupported(format!(
                                            "step {i}: substitution maps onto a bridged variable"
                                        )));
                                    }
                                }
                                em.witnessed(c.clone(), strip_witness(w, &bridge))
                            }
                            ProofStep::AddWitnessed(c, w) => em.witnessed(c.clone(), w.clone()),
                            _ => em.rup(c.clone()),
                        }
                        continue;
                    }
                    let mut newly = HashSet::new();
                    for &v in &back {
                        if c.lit_of(v) != Some(bridge[&v]) {
                            newly.insert(v);
                        }
                    }
                    let c = flip_clause(c, &newly);
                    flips = &flips ^ &newly;
                    em.witnessed(c, Witness::Pivot(bridge[&back[0]]));
                    for v in back {
                        let l = bridge.remove(&v).unwrap();
                        em.delete(Clause::unit(l));
                    }
                }
            }
        }
        Ok(())
    })
}

/// Size ratio of an output proof to its input, for blowup reports.
pub fn blowup(input: usize, output: usize) -> f64 {
    output as f64 / input.max(1) as f64
}
