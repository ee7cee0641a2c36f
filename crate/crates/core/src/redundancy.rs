//! Redundancy criteria BC, RAT, SPR, PR, SR and PR₀, checked directly from
//! their definitions over the live clauses of a formula.

use std::collections::HashSet;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::clause::{Clause, Lit, Var};
use crate::formula::Formula;
use crate::par;
use crate::subst::{negate_clause, restrict_clause, restrict_formula, Apply, PartialAssignment, Restricted, Substitution};
use crate::up::Propagator;

/// Inference rule strength, ordered from weakest to strongest.
#[derive(Copy, Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Rule {
    Bc,
    Rat,
    Spr,
    Pr,
    Sr,
}

impl Rule {
    pub const ALL: [Rule; 5] = [Rule::Bc, Rule::Rat, Rule::Spr, Rule::Pr, Rule::Sr];

    pub fn name(self) -> &'static str {
        match self {
            Rule::Bc => "bc",
            Rule::Rat => "rat",
            Rule::Spr => "spr",
            Rule::Pr => "pr",
            Rule::Sr => "sr",
        }
    }

    pub fn parse(s: &str) -> Option<Rule> {
        Rule::ALL.into_iter().find(|r| r.name().eq_ignore_ascii_case(s))
    }
}

impl fmt::Display for Rule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Justification attached to a redundancy step.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Witness {
    Pivot(Lit),
    Assignment(PartialAssignment),
    Subst(Substitution),
}

impl Witness {
    /// Weakest rule that can accept this kind of witness for `c`.
    pub fn min_rule(&self, c: &Clause) -> Rule {
        match self {
            Witness::Pivot(_) => Rule::Bc,
            Witness::Assignment(t) if same_vars(c, t) => Rule::Spr,
            Witness::Assignment(_) => Rule::Pr,
            Witness::Subst(_) => Rule::Sr,
        }
    }

    /// Variables the witness mentions (domain, and images for substitutions).
    pub fn vars(&self) -> Vec<Var> {
        match self {
            Witness::Pivot(p) => vec![p.var()],
            Witness::Assignment(t) => t.vars().collect(),
            Witness::Subst(s) => s.mentioned_vars(),
        }
    }
}

/// Why a redundancy check failed.
#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error, Serialize, Deserialize)]
pub enum Reject {
    #[error("pivot {0} is not in the clause")]
    PivotNotInClause(Lit),
    #[error("resolvent with {0} is not tautological")]
    NotBlocked(Clause),
    #[error("resolvent with {0} is not implied by unit propagation")]
    ResolventNotImplied(Clause),
    #[error("witness does not satisfy the clause")]
    WitnessNotSatisfying,
    #[error("witness domain differs from the clause variables")]
    DomainMismatch,
    #[error("clause variable {0} is outside the witness domain")]
    DomainTooSmall(Var),
    #[error("restricted clause {0} is not implied by unit propagation")]
    NotImplied(Clause),
    #[error("clause {0} required by the PR0 condition is missing")]
    MissingPr0Clause(Clause),
}

pub type Verdict = Result<(), Reject>;

fn same_vars(c: &Clause, t: &PartialAssignment) -> bool {
    t.len() == c.len() && c.vars().all(|v| t.contains(v))
}

fn pivot_resolvents(g: &Formula, c: &Clause, p: Lit) -> Result<Vec<(Clause, Clause)>, Reject> {
    if !c.contains(p) {
        return Err(Reject::PivotNotInClause(p));
    }
    let cp = c.without(p);
    Ok(g
        .live()
        .filter(|d| d.contains(!p))
        .filter_map(|d| cp.or(&d.without(!p)).map(|r| (d.clone(), r)))
        .collect())
}

/// Blocked clause check on pivot `p`.
pub fn bc(g: &Formula, c: &Clause, p: Lit) -> Verdict {
    match pivot_resolvents(g, c, p)?.into_iter().next() {
        None => Ok(()),
        Some((d, _)) => Err(Reject::NotBlocked(d)),
    }
}

pub fn check_bc(g: &Formula, c: &Clause, p: Lit) -> bool {
    bc(g, c, p).is_ok()
}

/// RAT check on pivot `p`; each resolvent is tested with `p` included.
pub fn rat(g: &Formula, c: &Clause, p: Lit) -> Verdict {
    let rs = pivot_resolvents(g, c, p)?;
    if rs.is_empty() {
        return Ok(());
    }
    let prop = Propagator::from_clauses(g.num_vars(), g.live());
    let fail = par::first_failure(&rs, || prop.clone(), |pr, (_, r)| pr.rup(r.lits()));
    match fail {
        None => Ok(()),
        Some(i) => Err(Reject::ResolventNotImplied(rs[i].0.clone())),
    }
}

pub fn check_rat(g: &Formula, c: &Clause, p: Lit) -> bool {
    rat(g, c, p).is_ok()
}

/// `Γ↾α ⊢₁ Γ↾τ`, with `Γ↾α` built once.
pub fn implies_restriction<T: Apply + Sync + ?Sized>(g: &Formula, alpha: &PartialAssignment, tau: &T) -> Verdict {
    let ga = restrict_formula(g, alpha);
    let seen: HashSet<&Clause> = ga.live().collect();
    let gt: Vec<Clause> = g
        .live()
        .filter_map(|d| match restrict_clause(d, tau) {
            Restricted::Clause(e) if !seen.contains(&e) => Some(e),
            _ => None,
        })
        .collect();
    if gt.is_empty() {
        return Ok(());
    }
    let prop = Propagator::from_clauses(g.num_vars(), ga.live());
    match par::first_failure(&gt, || prop.clone(), |pr, e| pr.rup(e.lits())) {
        None => Ok(()),
        Some(i) => Err(Reject::NotImplied(gt[i].clone())),
    }
}

/// RAT in its one-flip witness form: `τ` is `¬C` with `p` set true.
pub fn rat_lpr(g: &Formula, c: &Clause, p: Lit) -> Verdict {
    if !c.contains(p) {
        return Err(Reject::PivotNotInClause(p));
    }
    let alpha = negate_clause(c);
    let mut tau = alpha.clone();
    tau.set(p.var(), p.is_pos());
    implies_restriction(g, &alpha, &tau)
}

pub fn check_rat_lpr(g: &Formula, c: &Clause, p: Lit) -> bool {
    rat_lpr(g, c, p).is_ok()
}

/// SPR: `dom(τ) = vars(C)`, `τ ⊨ C` and `Γ↾α ⊢₁ Γ↾τ`.
pub fn spr(g: &Formula, c: &Clause, t: &PartialAssignment) -> Verdict {
    if !same_vars(c, t) {
        return Err(Reject::DomainMismatch);
    }
    pr(g, c, t)
}

pub fn check_spr(g: &Formula, c: &Clause, t: &PartialAssignment) -> bool {
    spr(g, c, t).is_ok()
}

/// PR: `τ ⊨ C` and `Γ↾α ⊢₁ Γ↾τ`.
pub fn pr(g: &Formula, c: &Clause, t: &PartialAssignment) -> Verdict {
    if !t.satisfies(c) {
        return Err(Reject::WitnessNotSatisfying);
    }
    implies_restriction(g, &negate_clause(c), t)
}

pub fn check_pr(g: &Formula, c: &Clause, t: &PartialAssignment) -> bool {
    pr(g, c, t).is_ok()
}

/// SR: like PR with a substitution witness.
pub fn sr(g: &Formula, c: &Clause, t: &Substitution) -> Verdict {
    if !t.satisfies(c) {
        return Err(Reject::WitnessNotSatisfying);
    }
    implies_restriction(g, &negate_clause(c), t)
}

pub fn check_sr(g: &Formula, c: &Clause, t: &Substitution) -> bool {
    sr(g, c, t).is_ok()
}

/// PR₀: `τ ⊨ C`, `vars(C) ⊆ dom(τ)` and `C ∨ Γ↾τ ⊆ Γ`.
pub fn pr0(g: &Formula, c: &Clause, t: &PartialAssignment) -> Verdict {
    if !t.satisfies(c) {
        return Err(Reject::WitnessNotSatisfying);
    }
    if let Some(v) = c.vars().find(|&v| !t.contains(v)) {
        return Err(Reject::DomainTooSmall(v));
    }
    let have: HashSet<&Clause> = g.live().collect();
    for d in g.live() {
        if let Restricted::Clause(e) = restrict_clause(d, t) {
            if let Some(ce) = c.or(&e) {
                if !have.contains(&ce) {
                    return Err(Reject::MissingPr0Clause(ce));
                }
            }
        }
    }
    Ok(())
}

pub fn check_pr0(g: &Formula, c: &Clause, t: &PartialAssignment) -> bool {
    pr0(g, c, t).is_ok()
}

/// Checks `c` against `g` with the weakest rule the witness allows and reports it.
/// Pivot witnesses report BC when blocked and RAT otherwise.
pub fn check_witness(g: &Formula, c: &Clause, w: &Witness) -> Result<Rule, Reject> {
    match w {
        Witness::Pivot(p) => match bc(g, c, *p) {
            Ok(()) => Ok(Rule::Bc),
            Err(Reject::NotBlocked(_)) => rat(g, c, *p).map(|_| Rule::Rat),
            Err(e) => Err(e),
        },
        Witness::Assignment(t) => {
            let rule = w.min_rule(c);
            pr(g, c, t).map(|_| rule)
        }
        Witness::Subst(s) => sr(g, c, s).map(|_| Rule::Sr),
    }
}

/// Number of witness variables outside the clause.
pub fn discrepancy(c: &Clause, t: &PartialAssignment) -> usize {
    t.vars().filter(|&v| !c.mentions(v)).count()
}

/// `¬C ∘ τ`: extends `τ` to falsify every literal of `C` it leaves unassigned.
pub fn normalize_pr_witness(c: &Clause, t: &PartialAssignment) -> Result<PartialAssignment, Reject> {
    if !t.satisfies(c) {
        return Err(Reject::WitnessNotSatisfying);
    }
    Ok(negate_clause(c).compose(t))
}
