//! Proof objects and the refutation verifier.

use std::collections::HashMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::clause::{Clause, Lit, Var};
use crate::formula::Formula;
use crate::redundancy::{Reject, Rule, Witness};
use crate::subst::{restrict_clause, Apply, Image, PartialAssignment, Restricted, Substitution};
use crate::up::Propagator;

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum ProofStep {
    AddRup(Clause),
    AddWitnessed(Clause, Witness),
    Delete(Clause),
}

impl ProofStep {
    pub fn clause(&self) -> &Clause {
        match self {
            ProofStep::AddRup(c) | ProofStep::AddWitnessed(c, _) | ProofStep::Delete(c) => c,
        }
    }

    pub fn is_addition(&self) -> bool {
        !matches!(self, ProofStep::Delete(_))
    }

    /// Variables in the clause and the witness.
    pub fn vars(&self) -> Vec<Var> {
        let mut v: Vec<Var> = self.clause().vars().collect();
        if let ProofStep::AddWitnessed(_, w) = self {
            v.extend(w.vars());
        }
        v
    }
}

pub type Proof = Vec<ProofStep>;

/// Rule level plus deletion and variable policy.
#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct SystemSpec {
    pub level: Rule,
    pub allow_deletion: bool,
    pub allow_new_variables: bool,
}

impl SystemSpec {
    pub fn new(level: Rule, allow_deletion: bool, allow_new_variables: bool) -> SystemSpec {
        SystemSpec {
            level,
            allow_deletion,
            allow_new_variables,
        }
    }

    /// The "−" variant of a system: no deletion, no new variables.
    pub fn strict(level: Rule) -> SystemSpec {
        SystemSpec::new(level, false, false)
    }
}

impl fmt::Display for SystemSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let d = if self.allow_deletion { "d" } else { "" };
        let m = if self.allow_new_variables { "" } else { "-" };
        write!(f, "{}{}{}", d, self.level.name(), m)
    }
}

/// Why a step was rejected.
#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error, Serialize, Deserialize)]
pub enum StepError {
    #[error("clause is not implied by unit propagation")]
    NotRup,
    #[error("{0}")]
    Redundancy(Reject),
    #[error("witness needs rule {needed} but the system allows only {allowed}")]
    RuleNotAllowed { needed: Rule, allowed: Rule },
    #[error("deletion is not allowed")]
    DeletionNotAllowed,
    #[error("deleted clause is not live")]
    DeleteNotLive,
    #[error("variable {0} does not occur in the initial formula")]
    NewVariable(Var),
}

/// What justified an accepted step.
#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Accepted {
    Rup,
    Rule(Rule),
    Delete,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct StepCounts {
    pub rup: usize,
    pub bc: usize,
    pub rat: usize,
    pub spr: usize,
    pub pr: usize,
    pub sr: usize,
    pub delete: usize,
}

impl StepCounts {
    fn record(&mut self, a: Accepted) {
        match a {
            Accepted::Rup => self.rup += 1,
            Accepted::Rule(Rule::Bc) => self.bc += 1,
            Accepted::Rule(Rule::Rat) => self.rat += 1,
            Accepted::Rule(Rule::Spr) => self.spr += 1,
            Accepted::Rule(Rule::Pr) => self.pr += 1,
            Accepted::Rule(Rule::Sr) => self.sr += 1,
            Accepted::Delete => self.delete += 1,
        }
    }

    pub fn total(&self) -> usize {
        self.rup + self.bc + self.rat + self.spr + self.pr + self.sr + self.delete
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Verdict {
    Accepted,
    Rejected { step: usize, reason: StepError },
    /// Every step passed but ⊥ never became live.
    Incomplete,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct VerifyReport {
    pub verdict: Verdict,
    /// Steps replayed (the proof may continue past the step deriving ⊥).
    pub steps_checked: usize,
    pub counts: StepCounts,
    pub max_width: usize,
    pub literal_volume: usize,
    /// Largest pigeon-width over added clauses, when a pigeon map is supplied.
    pub max_pigeon_width: Option<usize>,
}

impl VerifyReport {
    pub fn accepted(&self) -> bool {
        self.verdict == Verdict::Accepted
    }
}

/// Incremental proof checker. Feed steps with [`Checker::step`].
pub struct Checker {
    spec: SystemSpec,
    prop: Propagator,
    clauses: Vec<Option<Clause>>,
    by_value: HashMap<Clause, Vec<u32>>,
    occ: Vec<Vec<u32>>,
    base_vars: Vec<bool>,
    stamp: Vec<u32>,
    stamp_gen: u32,
    index: usize,
    counts: StepCounts,
    max_width: usize,
    volume: usize,
    refuted: bool,
    pigeon_of: Option<Box<dyn Fn(Var) -> Option<usize> + Send + Sync>>,
    max_pigeon_width: usize,
}

impl Checker {
    pub fn new(g0: &Formula, spec: SystemSpec) -> Checker {
        let n = g0.num_vars();
        let mut base_vars = vec![false; n as usize + 1];
        for c in g0.live() {
            for v in c.vars() {
                base_vars[v as usize] = true;
            }
        }
        let mut ch = Checker {
            spec,
            prop: Propagator::new(n),
            clauses: Vec::new(),
            by_value: HashMap::new(),
            occ: vec![Vec::new(); 2 * (n as usize + 1)],
            base_vars,
            stamp: Vec::new(),
            stamp_gen: 0,
            index: 0,
            counts: StepCounts::default(),
            max_width: 0,
            volume: 0,
            refuted: false,
            pigeon_of: None,
            max_pigeon_width: 0,
        };
        for c in g0.live() {
            ch.insert(c.clone());
        }
        ch
    }

    /// Tracks pigeon-width of added clauses using `f` to map variables to pigeons.
    pub fn with_pigeon_map<F: Fn(Var) -> Option<usize> + Send + Sync + 'static>(mut self, f: F) -> Checker {
        self.pigeon_of = Some(Box::new(f));
        self
    }

    pub fn spec(&self) -> SystemSpec {
        self.spec
    }

    /// ⊥ is live.
    pub fn is_refuted(&self) -> bool {
        self.refuted
    }

    pub fn steps_checked(&self) -> usize {
        self.index
    }

    pub fn counts(&self) -> &StepCounts {
        &self.counts
    }

    fn ensure_var(&mut self, v: Var) {
        let need = 2 * (v as usize + 1);
        if self.occ.len() < need {
            self.occ.resize_with(need, Vec::new);
        }
        self.prop.ensure_var(v);
    }

    fn insert(&mut self, c: Clause) -> u32 {
        if let Some(v) = c.lits().last() {
            self.ensure_var(v.var());
        }
        let id = self.prop.add_clause(c.lits());
        let i = id as usize;
        if self.clauses.len() <= i {
            self.clauses.resize(i + 1, None);
        }
        for &l in c.lits() {
            self.occ[l.index()].push(id);
        }
        if c.is_empty() {
            self.refuted = true;
        }
        self.by_value.entry(c.clone()).or_default().push(id);
        self.clauses[i] = Some(c);
        id
    }

    fn remove(&mut self, c: &Clause) -> bool {
        let Some(ids) = self.by_value.get_mut(c) else {
            return false;
        };
        let id = ids.pop().expect("non-empty instance list");
        if ids.is_empty() {
            self.by_value.remove(c);
        }
        for &l in c.lits() {
            let o = &mut self.occ[l.index()];
            if let Some(k) = o.iter().position(|&x| x == id) {
                o.swap_remove(k);
            }
        }
        self.clauses[id as usize] = None;
        self.prop.delete_clause(id);
        if c.is_empty() {
            self.refuted = self.by_value.contains_key(&Clause::empty());
        }
        true
    }

    /// Live clauses, in no particular order.
    pub fn live_clauses(&self) -> impl Iterator<Item = &Clause> + '_ {
        self.clauses.iter().flatten()
    }

    pub fn contains(&self, c: &Clause) -> bool {
        self.by_value.contains_key(c)
    }

    fn is_base(&self, v: Var) -> bool {
        self.base_vars.get(v as usize).copied().unwrap_or(false)
    }

    fn check_vars(&self, step: &ProofStep) -> Result<(), StepError> {
        if self.spec.allow_new_variables || !step.is_addition() {
            return Ok(());
        }
        match step.vars().into_iter().find(|&v| !self.is_base(v)) {
            Some(v) => Err(StepError::NewVariable(v)),
            None => Ok(()),
        }
    }

    fn rup(&mut self, c: &Clause) -> bool {
        self.by_value.contains_key(c) || self.prop.rup(c.lits())
    }

    /// Replays one step. After an error the checker state is unchanged.
    pub fn step(&mut self, step: &ProofStep) -> Result<Accepted, StepError> {
        self.check_vars(step)?;
        let acc = match step {
            ProofStep::AddRup(c) => {
                if !self.rup(c) {
                    return Err(StepError::NotRup);
                }
                Accepted::Rup
            }
            ProofStep::AddWitnessed(c, w) => self.check_witnessed(c, w)?,
            ProofStep::Delete(c) => {
                if !self.spec.allow_deletion {
                    return Err(StepError::DeletionNotAllowed);
                }
                if !self.remove(c) {
                    return Err(StepError::DeleteNotLive);
                }
                Accepted::Delete
            }
        };
        if let ProofStep::AddRup(c) | ProofStep::AddWitnessed(c, _) = step {
            self.max_width = self.max_width.max(c.len());
            self.volume += c.len();
            if let Some(f) = &self.pigeon_of {
                let mut ps: Vec<usize> = c.vars().filter_map(f).collect();
                ps.sort_unstable();
                ps.dedup();
                self.max_pigeon_width = self.max_pigeon_width.max(ps.len());
            }
            self.insert(c.clone());
        }
        self.counts.record(acc);
        self.index += 1;
        Ok(acc)
    }

    fn check_witnessed(&mut self, c: &Clause, w: &Witness) -> Result<Accepted, StepError> {
        let needed = w.min_rule(c);
        if needed > self.spec.level {
            // An assignment whose domain differs from the clause is a PR witness;
            // under SPR that is a domain mismatch.
            if needed == Rule::Pr && self.spec.level == Rule::Spr {
                return Err(StepError::Redundancy(Reject::DomainMismatch));
            }
            return Err(StepError::RuleNotAllowed {
                needed,
                allowed: self.spec.level,
            });
        }
        match w {
            Witness::Pivot(p) => self.check_pivot(c, *p),
            Witness::Assignment(t) => {
                if !t.satisfies(c) {
                    return Err(StepError::Redundancy(Reject::WitnessNotSatisfying));
                }
                self.check_implied(c, t)?;
                Ok(Accepted::Rule(needed))
            }
            Witness::Subst(s) => {
                if !s.satisfies(c) {
                    return Err(StepError::Redundancy(Reject::WitnessNotSatisfying));
                }
                self.check_implied(c, s)?;
                Ok(Accepted::Rule(Rule::Sr))
            }
        }
    }

    fn check_pivot(&mut self, c: &Clause, p: Lit) -> Result<Accepted, StepError> {
        if !c.contains(p) {
            return Err(StepError::Redundancy(Reject::PivotNotInClause(p)));
        }
        self.ensure_var(p.var());
        let mut resolvents = Vec::new();
        for &id in &self.occ[(!p).index()] {
            let d = self.clauses[id as usize].as_ref().expect("live occurrence");
            // `c ∨ (D \ ¬p)` keeps the pivot, as the RAT condition requires.
            if let Some(r) = c.or(&d.without(!p)) {
                resolvents.push((r, id));
            }
        }
        if resolvents.is_empty() {
            return Ok(Accepted::Rule(Rule::Bc));
        }
        if self.rup(c) {
            return Ok(Accepted::Rup);
        }
        let partner = |ch: &Checker, id: u32| ch.clauses[id as usize].clone().unwrap();
        if self.spec.level < Rule::Rat {
            return Err(StepError::Redundancy(Reject::NotBlocked(partner(self, resolvents[0].1))));
        }
        for (r, id) in &resolvents {
            if !self.rup(r) {
                return Err(StepError::Redundancy(Reject::ResolventNotImplied(partner(self, *id))));
            }
        }
        Ok(Accepted::Rule(Rule::Rat))
    }

    /// `Γ↾α ⊢₁ Γ↾τ` for `α = ¬c`, via `Γ ∪ α ∪ ¬E′ ⊢₁ ⊥` where `E′` is
    /// `D↾τ` without literals over `vars(c)`. Only clauses touching
    /// `dom(τ) ∪ vars(c)` need checking.
    fn check_implied<T: Apply + ?Sized>(&mut self, c: &Clause, tau: &T) -> Result<(), StepError> {
        let alpha = crate::subst::negate_clause(c);
        let mut touched_vars: Vec<Var> = tau.domain();
        touched_vars.extend(c.vars());
        for &v in &touched_vars {
            self.ensure_var(v);
        }
        self.stamp_gen = self.stamp_gen.wrapping_add(1);
        if self.stamp_gen == 0 {
            self.stamp.iter_mut().for_each(|s| *s = 0);
            self.stamp_gen = 1;
        }
        if self.stamp.len() < self.clauses.len() {
            self.stamp.resize(self.clauses.len(), 0);
        }
        let mut cand: Vec<u32> = Vec::new();
        for &v in &touched_vars {
            for l in [Lit::pos(v), Lit::neg(v)] {
                for &id in &self.occ[l.index()] {
                    if self.stamp[id as usize] != self.stamp_gen {
                        self.stamp[id as usize] = self.stamp_gen;
                        cand.push(id);
                    }
                }
            }
        }
        cand.sort_unstable();
        let mut goals: Vec<Clause> = Vec::new();
        for &id in &cand {
            let d = self.clauses[id as usize].as_ref().unwrap();
            let Restricted::Clause(e) = restrict_clause(d, tau) else {
                continue;
            };
            let e2: Vec<Lit> = e.lits().iter().copied().filter(|l| alpha.get(l.var()).is_none()).collect();
            // D↾α ⊆ E′ makes the goal trivial.
            if !alpha.satisfies(d) {
                let da = d.lits().iter().filter(|l| alpha.get(l.var()).is_none());
                let e2c = Clause::from_sorted_unchecked(e2.clone());
                if da.clone().all(|l| e2c.contains(*l)) {
                    continue;
                }
            }
            goals.push(Clause::from_sorted_unchecked(e2));
        }
        if goals.is_empty() {
            return Ok(());
        }
        let m = self.prop.mark();
        if self.prop.assume(alpha.true_lits()) {
            self.prop.backtrack(m);
            return Ok(());
        }
        let m2 = self.prop.mark();
        let mut failed = None;
        for (k, e) in goals.iter().enumerate() {
            let conflict = self.prop.assume(e.lits().iter().map(|&l| !l));
            self.prop.backtrack(m2);
            if !conflict {
                failed = Some(k);
                break;
            }
        }
        self.prop.backtrack(m);
        match failed {
            None => Ok(()),
            Some(k) => Err(StepError::Redundancy(Reject::NotImplied(goals[k].clone()))),
        }
    }

    pub fn report(&self, verdict: Verdict) -> VerifyReport {
        VerifyReport {
            verdict,
            steps_checked: self.index,
            counts: self.counts.clone(),
            max_width: self.max_width,
            literal_volume: self.volume,
            max_pigeon_width: self.pigeon_of.as_ref().map(|_| self.max_pigeon_width),
        }
    }

    /// Replays steps until ⊥ is live or a step fails.
    pub fn run<'a, I: IntoIterator<Item = &'a ProofStep>>(&mut self, steps: I) -> Verdict {
        if self.refuted {
            return Verdict::Accepted;
        }
        for s in steps {
            let i = self.index;
            if let Err(e) = self.step(s) {
                return Verdict::Rejected { step: i, reason: e };
            }
            if self.refuted {
                return Verdict::Accepted;
            }
        }
        Verdict::Incomplete
    }
}

/// Replays `pf` on `g0` under `spec`. Accepted once ⊥ is live; later steps are ignored.
pub fn verify(g0: &Formula, pf: &[ProofStep], spec: SystemSpec) -> VerifyReport {
    let mut ch = Checker::new(g0, spec);
    let v = ch.run(pf);
    ch.report(v)
}

/// Every added clause and witness uses only variables occurring in `g0`.
pub fn check_no_new_variables(g0: &Formula, pf: &[ProofStep]) -> bool {
    let base = g0.vars();
    pf.iter()
        .filter(|s| s.is_addition())
        .all(|s| s.vars().iter().all(|v| base.contains(v)))
}

/// Number of distinct pigeons among the clause's variables.
pub fn pigeon_width<F: Fn(Var) -> Option<usize>>(c: &Clause, pigeon_of: F) -> Result<usize, Var> {
    let mut ps = Vec::with_capacity(c.len());
    for v in c.vars() {
        ps.push(pigeon_of(v).ok_or(v)?);
    }
    ps.sort_unstable();
    ps.dedup();
    Ok(ps.len())
}

/// Static histogram of a proof.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct ProofStats {
    pub steps: usize,
    pub rup: usize,
    pub pivot: usize,
    pub assignment: usize,
    pub substitution: usize,
    pub delete: usize,
    pub literals: usize,
    pub max_width: usize,
}

pub fn proof_stats(pf: &[ProofStep]) -> ProofStats {
    let mut s = ProofStats::default();
    for st in pf {
        s.steps += 1;
        match st {
            ProofStep::AddRup(_) => s.rup += 1,
            ProofStep::AddWitnessed(_, Witness::Pivot(_)) => s.pivot += 1,
            ProofStep::AddWitnessed(_, Witness::Assignment(_)) => s.assignment += 1,
            ProofStep::AddWitnessed(_, Witness::Subst(_)) => s.substitution += 1,
            ProofStep::Delete(_) => s.delete += 1,
        }
        s.literals += st.clause().len();
        s.max_width = s.max_width.max(st.clause().len());
    }
    s
}

/// Witness helpers for proof construction.
pub fn spr_step(c: Clause, t: PartialAssignment) -> ProofStep {
    ProofStep::AddWitnessed(c, Witness::Assignment(t))
}

pub fn sr_step(c: Clause, t: Substitution) -> ProofStep {
    ProofStep::AddWitnessed(c, Witness::Subst(t))
}

pub fn pivot_step(c: Clause, p: Lit) -> ProofStep {
    ProofStep::AddWitnessed(c, Witness::Pivot(p))
}

/// `true` when the substitution only maps to constants.
pub fn is_assignment_like(s: &Substitution) -> bool {
    s.iter().all(|(_, i)| matches!(i, Image::Const(_)))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn f(cs: &[&[i32]]) -> Formula {
        Formula::from_clauses(cs.iter().map(|c| Clause::from_i32s(c)))
    }
    fn cl(c: &[i32]) -> Clause {
        Clause::from_i32s(c)
    }

    #[test]
    fn trivial_refutation() {
        let r = verify(&f(&[&[1], &[-1]]), &[ProofStep::AddRup(Clause::empty())], SystemSpec::strict(Rule::Bc));
        assert!(r.accepted());
        assert_eq!(r.counts.rup, 1);
    }

    #[test]
    fn fresh_variable_rejected_without_new_vars() {
        let g = f(&[&[1, 2], &[-1, 2], &[1, -2], &[-1, -2]]);
        let pf = vec![pivot_step(cl(&[3, 1]), Lit::new(3))];
        let r = verify(&g, &pf, SystemSpec::strict(Rule::Rat));
        assert_eq!(r.verdict, Verdict::Rejected { step: 0, reason: StepError::NewVariable(3) });
        assert!(!check_no_new_variables(&g, &pf));
        let r = verify(&g, &pf, SystemSpec::new(Rule::Rat, false, true));
        assert_eq!(r.verdict, Verdict::Incomplete);
    }

    #[test]
    fn deletion_rules() {
        let g = f(&[&[1, 2], &[-1]]);
        let pf = vec![ProofStep::Delete(cl(&[-1]))];
        let r = verify(&g, &pf, SystemSpec::strict(Rule::Rat));
        assert_eq!(r.verdict, Verdict::Rejected { step: 0, reason: StepError::DeletionNotAllowed });
        let spec = SystemSpec::new(Rule::Rat, true, false);
        let pf = vec![ProofStep::Delete(cl(&[-1])), pivot_step(cl(&[1]), Lit::new(1))];
        assert_eq!(verify(&g, &pf, spec).counts.bc, 1);
        let pf = vec![ProofStep::Delete(cl(&[2]))];
        assert_eq!(verify(&g, &pf, spec).verdict, Verdict::Rejected { step: 0, reason: StepError::DeleteNotLive });
    }

    #[test]
    fn witness_level_gate() {
        let g = f(&[&[-1, 2]]);
        let t = PartialAssignment::from_pairs([(1, true), (2, true)]);
        let pf = vec![spr_step(cl(&[1]), t)];
        let r = verify(&g, &pf, SystemSpec::strict(Rule::Spr));
        assert_eq!(r.verdict, Verdict::Rejected { step: 0, reason: StepError::Redundancy(Reject::DomainMismatch) });
        let r = verify(&g, &pf, SystemSpec::strict(Rule::Pr));
        assert_eq!(r.counts.pr, 1);
    }

    #[test]
    fn stats_of_empty_and_single() {
        assert_eq!(proof_stats(&[]), ProofStats::default());
        let s = proof_stats(&[ProofStep::AddRup(Clause::empty())]);
        assert_eq!(s.rup, 1);
        assert_eq!(s.steps, 1);
    }

    #[test]
    fn pigeon_width_counts() {
        let by_two = |v: Var| Some(((v - 1) / 2) as usize);
        assert_eq!(pigeon_width(&cl(&[1, 2, -3, 4]), by_two), Ok(2));
        assert_eq!(pigeon_width(&Clause::empty(), by_two), Ok(0));
        assert_eq!(pigeon_width(&cl(&[9]), |_| None), Err(9));
    }
}
