//! Unit propagation with two watched literals.

use crate::clause::{Clause, Lit, Var};
use crate::formula::Formula;

const NONE: u32 = u32::MAX;

#[derive(Copy, Clone, Debug)]
struct Watch {
    cref: u32,
    blocker: Lit,
}

/// Incremental propagator over a clause database.
///
/// Root-level consequences of the live clauses are kept on the trail between
/// queries. Queries push assumptions above the root and always backtrack.
/// Deleting a clause that justified a root literal triggers a lazy rebuild.
#[derive(Clone, Debug, Default)]
pub struct Propagator {
    clauses: Vec<Vec<Lit>>,
    alive: Vec<bool>,
    free: Vec<u32>,
    watches: Vec<Vec<Watch>>,
    vals: Vec<i8>,
    reason: Vec<u32>,
    trail: Vec<Lit>,
    qhead: usize,
    units: Vec<u32>,
    empties: usize,
    root_conflict: Option<u32>,
    root_len: usize,
    dirty: bool,
}

impl Propagator {
    pub fn new(num_vars: Var) -> Propagator {
        let mut p = Propagator::default();
        p.ensure_var(num_vars);
        p
    }

    /// Builds a propagator over the live clauses of `g`. Returns the map from
    /// propagator ids back to formula indices.
    pub fn from_formula(g: &Formula) -> (Propagator, Vec<usize>) {
        let mut p = Propagator::new(g.num_vars());
        let mut back = Vec::new();
        for (i, c) in g.live_indexed() {
            let id = p.add_clause(c.lits());
            debug_assert_eq!(id as usize, back.len());
            back.push(i);
        }
        (p, back)
    }

    pub fn from_clauses<'a, I: IntoIterator<Item = &'a Clause>>(num_vars: Var, cs: I) -> Propagator {
        let mut p = Propagator::new(num_vars);
        for c in cs {
            p.add_clause(c.lits());
        }
        p
    }

    pub fn ensure_var(&mut self, v: Var) {
        let n = v as usize + 1;
        if self.vals.len() < n {
            self.vals.resize(n, 0);
            self.reason.resize(n, NONE);
            self.watches.resize_with(2 * n, Vec::new);
        }
    }

    #[inline]
    fn lit_val(&self, l: Lit) -> i8 {
        let v = self.vals[l.var() as usize];
        if l.is_pos() {
            v
        } else {
            -v
        }
    }

    /// Value of `l` on the current trail: `Some(true)`, `Some(false)` or `None`.
    pub fn value(&self, l: Lit) -> Option<bool> {
        if (l.var() as usize) >= self.vals.len() {
            return None;
        }
        match self.lit_val(l) {
            0 => None,
            v => Some(v > 0),
        }
    }

    #[inline]
    fn enqueue(&mut self, l: Lit, reason: u32) {
        let v = l.var() as usize;
        self.vals[v] = if l.is_pos() { 1 } else { -1 };
        self.reason[v] = reason;
        self.trail.push(l);
    }

    fn at_root(&self) -> bool {
        self.trail.len() == self.root_len
    }

    /// Adds a clause and returns its id. Must be called at root level.
    pub fn add_clause(&mut self, lits: &[Lit]) -> u32 {
        self.ensure_root();
        for l in lits {
            self.ensure_var(l.var());
        }
        let mut v: Vec<Lit> = lits.to_vec();
        let id = match self.free.pop() {
            Some(id) => id,
            None => {
                self.clauses.push(Vec::new());
                self.alive.push(false);
                (self.clauses.len() - 1) as u32
            }
        };
        self.alive[id as usize] = true;
        match v.len() {
            0 => {
                self.empties += 1;
                if self.root_conflict.is_none() {
                    self.root_conflict = Some(id);
                }
            }
            1 => {
                self.units.push(id);
                if !self.dirty && self.root_conflict.is_none() {
                    match self.lit_val(v[0]) {
                        0 => {
                            self.enqueue(v[0], id);
                            self.root_conflict = self.propagate();
                        }
                        x if x < 0 => self.root_conflict = Some(id),
                        _ => {}
                    }
                }
            }
            _ => {
                // Put non-false literals first, true ones before unassigned.
                v.sort_by_key(|&l| match self.lit_val(l) {
                    1 => 0,
                    0 => 1,
                    _ => 2,
                });
                let (a, b) = (v[0], v[1]);
                self.watches[a.index()].push(Watch { cref: id, blocker: b });
                self.watches[b.index()].push(Watch { cref: id, blocker: a });
                if !self.dirty && self.root_conflict.is_none() && self.lit_val(b) < 0 {
                    match self.lit_val(a) {
                        0 => {
                            self.enqueue(a, id);
                            self.root_conflict = self.propagate();
                        }
                        x if x < 0 => self.root_conflict = Some(id),
                        _ => {}
                    }
                }
            }
        }
        self.clauses[id as usize] = v;
        self.root_len = self.trail.len();
        id
    }

    /// Removes a clause. Ids are recycled.
    pub fn delete_clause(&mut self, id: u32) {
        let i = id as usize;
        assert!(self.alive[i], "clause {id} is not live");
        self.ensure_root();
        self.alive[i] = false;
        let c = std::mem::take(&mut self.clauses[i]);
        match c.len() {
            0 => self.empties -= 1,
            1 => self.units.retain(|&u| u != id),
            _ => {
                for &w in &c[..2] {
                    let ws = &mut self.watches[w.index()];
                    if let Some(k) = ws.iter().position(|x| x.cref == id) {
                        ws.swap_remove(k);
                    }
                }
            }
        }
        if self.root_conflict.is_some()
            || c.iter().any(|l| self.reason[l.var() as usize] == id && self.lit_val(*l) != 0)
        {
            self.dirty = true;
        }
        self.free.push(id);
    }

    pub fn clause_lits(&self, id: u32) -> &[Lit] {
        &self.clauses[id as usize]
    }

    pub fn is_alive(&self, id: u32) -> bool {
        self.alive.get(id as usize).copied().unwrap_or(false)
    }

    fn ensure_root(&mut self) {
        debug_assert!(self.at_root(), "operation requires root level");
        if self.dirty {
            self.rebuild();
        }
    }

    fn rebuild(&mut self) {
        for &l in &self.trail {
            self.vals[l.var() as usize] = 0;
            self.reason[l.var() as usize] = NONE;
        }
        self.trail.clear();
        self.qhead = 0;
        self.dirty = false;
        self.root_conflict = None;
        if self.empties > 0 {
            self.root_conflict = (0..self.clauses.len() as u32)
                .find(|&i| self.alive[i as usize] && self.clauses[i as usize].is_empty());
            self.root_len = 0;
            return;
        }
        for k in 0..self.units.len() {
            let id = self.units[k];
            let l = self.clauses[id as usize][0];
            match self.lit_val(l) {
                0 => self.enqueue(l, id),
                x if x < 0 => {
                    self.root_conflict = Some(id);
                    self.root_len = self.trail.len();
                    return;
                }
                _ => {}
            }
        }
        self.root_conflict = self.propagate();
        self.root_len = self.trail.len();
    }

    /// Propagates the queue. Returns the id of a falsified clause on conflict.
    fn propagate(&mut self) -> Option<u32> {
        while self.qhead < self.trail.len() {
            let p = self.trail[self.qhead];
            self.qhead += 1;
            let fl = !p;
            let mut ws = std::mem::take(&mut self.watches[fl.index()]);
            let mut i = 0;
            let mut j = 0;
            let mut conflict = None;
            while i < ws.len() {
                let w = ws[i];
                i += 1;
                if self.lit_val(w.blocker) > 0 {
                    ws[j] = w;
                    j += 1;
                    continue;
                }
                let cref = w.cref as usize;
                let c = &mut self.clauses[cref];
                if c[0] == fl {
                    c.swap(0, 1);
                }
                let first = c[0];
                let fv = {
                    let v = self.vals[first.var() as usize];
                    if first.is_pos() {
                        v
                    } else {
                        -v
                    }
                };
                if first != w.blocker && fv > 0 {
                    ws[j] = Watch { cref: w.cref, blocker: first };
                    j += 1;
                    continue;
                }
                let mut moved = false;
                for k in 2..c.len() {
                    let l = c[k];
                    let v = self.vals[l.var() as usize];
                    let lv = if l.is_pos() { v } else { -v };
                    if lv >= 0 {
                        c.swap(1, k);
                        self.watches[l.index()].push(Watch { cref: w.cref, blocker: first });
                        moved = true;
                        break;
                    }
                }
                if moved {
                    continue;
                }
                ws[j] = Watch { cref: w.cref, blocker: first };
                j += 1;
                if fv < 0 {
                    conflict = Some(w.cref);
                    while i < ws.len() {
                        ws[j] = ws[i];
                        j += 1;
                        i += 1;
                    }
                } else if fv == 0 {
                    self.enqueue(first, w.cref);
                }
            }
            ws.truncate(j);
            self.watches[fl.index()] = ws;
            if conflict.is_some() {
                self.qhead = self.trail.len();
                return conflict;
            }
        }
        None
    }

    /// True if the live clauses alone propagate to a conflict.
    pub fn root_conflicts(&mut self) -> bool {
        self.ensure_root();
        self.root_conflict.is_some()
    }

    /// Current trail length, used with [`Propagator::backtrack`].
    pub fn mark(&mut self) -> usize {
        self.ensure_root_if_at_root();
        self.trail.len()
    }

    fn ensure_root_if_at_root(&mut self) {
        if self.dirty && self.at_root() {
            self.rebuild();
        }
    }

    /// Number of literals implied by the live clauses alone.
    pub fn root_len(&mut self) -> usize {
        self.ensure_root();
        self.root_len
    }

    /// Assumes the literals and propagates. Returns `true` on conflict.
    /// On conflict the caller must backtrack before assuming anything else.
    pub fn assume<I: IntoIterator<Item = Lit>>(&mut self, lits: I) -> bool {
        self.ensure_root_if_at_root();
        if self.root_conflict.is_some() {
            return true;
        }
        for l in lits {
            self.ensure_var(l.var());
            match self.lit_val(l) {
                0 => self.enqueue(l, NONE),
                x if x < 0 => {
                    self.qhead = self.trail.len();
                    return true;
                }
                _ => {}
            }
        }
        self.propagate().is_some()
    }

    pub fn backtrack(&mut self, mark: usize) {
        debug_assert!(mark >= self.root_len);
        while self.trail.len() > mark {
            let l = self.trail.pop().unwrap();
            self.vals[l.var() as usize] = 0;
            self.reason[l.var() as usize] = NONE;
        }
        self.qhead = self.trail.len();
    }

    /// Reverse unit propagation: does `clause ∪ ¬lits` propagate to a conflict?
    pub fn rup(&mut self, lits: &[Lit]) -> bool {
        let m = self.mark();
        let r = self.assume(lits.iter().map(|&l| !l));
        self.backtrack(m);
        r
    }

    /// Like [`Propagator::rup`] but returns the full trace of the query.
    pub fn rup_trace(&mut self, lits: &[Lit]) -> Trail {
        self.ensure_root();
        let mut out = Trail::default();
        if let Some(c) = self.root_conflict {
            out.lits = self.trail.iter().map(|&l| (l, self.reason_of(l))).collect();
            out.conflict = Some(c);
            return out;
        }
        let m = self.trail.len();
        let mut conflict = None;
        for &l in lits {
            let a = !l;
            self.ensure_var(a.var());
            match self.lit_val(a) {
                0 => self.enqueue(a, NONE),
                x if x < 0 => {
                    // `a` contradicts a propagated literal; the clause containing
                    // `l` is reported through an assumption marker.
                    conflict = Some(NONE);
                    self.qhead = self.trail.len();
                    out.clashing = Some(a);
                    break;
                }
                _ => {}
            }
        }
        if conflict.is_none() {
            conflict = self.propagate();
        }
        out.lits = self.trail.iter().map(|&l| (l, self.reason_of(l))).collect();
        out.conflict = conflict;
        self.backtrack(m);
        out
    }

    fn reason_of(&self, l: Lit) -> Option<u32> {
        match self.reason[l.var() as usize] {
            NONE => None,
            r => Some(r),
        }
    }

    pub fn trail(&self) -> &[Lit] {
        &self.trail
    }
}

/// Raw trail returned by [`Propagator::rup_trace`]. Reason `None` marks an assumption.
#[derive(Clone, Debug, Default)]
pub struct Trail {
    pub lits: Vec<(Lit, Option<u32>)>,
    /// `Some(u32::MAX)` when an assumption clashed with the trail (see `clashing`).
    pub conflict: Option<u32>,
    pub clashing: Option<Lit>,
}

/// Terminal status of unit propagation.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum UpStatus {
    /// Index of a clause falsified by the derived units.
    Conflict(Antecedent),
    Fixpoint,
}

/// Why a unit was derived.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Antecedent {
    /// Clause at this index of the formula.
    Clause(usize),
    /// Unit of `¬C` in a `Γ ⊢₁ C` query.
    Assumption,
}

/// Units derived in order, each with its antecedent, plus the terminal status.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct UpTrace {
    pub units: Vec<(Lit, Antecedent)>,
    pub status: UpStatus,
}

impl UpTrace {
    pub fn is_conflict(&self) -> bool {
        matches!(self.status, UpStatus::Conflict(_))
    }

    pub fn unit_lits(&self) -> Vec<Lit> {
        self.units.iter().map(|u| u.0).collect()
    }
}

fn trace_from(t: Trail, back: &[usize], g: &Formula) -> UpTrace {
    let map = |r: Option<u32>| match r {
        None => Antecedent::Assumption,
        Some(r) => Antecedent::Clause(back[r as usize]),
    };
    let units: Vec<(Lit, Antecedent)> = t.lits.iter().map(|&(l, r)| (l, map(r))).collect();
    let status = match t.conflict {
        None => UpStatus::Fixpoint,
        Some(NONE) => {
            // An assumption clashed with a derived literal; the antecedent of
            // that literal is falsified once the assumption is added.
            let a = t.clashing.expect("clash literal");
            let ante = units
                .iter()
                .find(|u| u.0 == !a)
                .map(|u| u.1)
                .unwrap_or(Antecedent::Assumption);
            UpStatus::Conflict(ante)
        }
        Some(c) => UpStatus::Conflict(Antecedent::Clause(back[c as usize])),
    };
    let _ = g;
    UpTrace { units, status }
}

/// Runs unit propagation over the live clauses of `g`.
pub fn unit_propagate(g: &Formula) -> UpTrace {
    let (mut p, back) = Propagator::from_formula(g);
    let t = p.rup_trace(&[]);
    trace_from(t, &back, g)
}

/// Unit propagation on `g ∪ ¬c`.
pub fn derives_1_trace(g: &Formula, c: &Clause) -> UpTrace {
    let (mut p, back) = Propagator::from_formula(g);
    let t = p.rup_trace(c.lits());
    trace_from(t, &back, g)
}

/// `Γ ⊢₁ C`.
pub fn derives_1(g: &Formula, c: &Clause) -> bool {
    let (mut p, _) = Propagator::from_formula(g);
    p.rup(c.lits())
}

/// Premise of a resolution step.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Premise {
    /// Clause at this index of the formula.
    Axiom(usize),
    /// Resolvent of an earlier step.
    Step(usize),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ResolutionStep {
    pub left: Premise,
    pub right: Premise,
    /// Occurs positively in `left`, negatively in `right`... or the other way round.
    pub pivot: Var,
    pub resolvent: Clause,
}

/// A resolution derivation; the conclusion is the last resolvent, or `start`
/// when there are no steps.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Derivation {
    pub start: Premise,
    pub steps: Vec<ResolutionStep>,
}

impl Derivation {
    pub fn conclusion<'a>(&'a self, g: &'a Formula) -> &'a Clause {
        match self.steps.last() {
            Some(s) => &s.resolvent,
            None => match self.start {
                Premise::Axiom(i) => g.clause(i),
                Premise::Step(_) => unreachable!(),
            },
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ResolutionError {
    #[error("trace does not end in a conflict")]
    NoConflict,
}

/// Turns a conflicting trace for `g ∪ ¬c` into a resolution derivation of a
/// subclause of `c`. The trace must come from [`derives_1_trace`] on the same inputs.
pub fn rup_to_resolution(g: &Formula, c: &Clause, tr: &UpTrace) -> Result<Derivation, ResolutionError> {
    if let Some((i, _)) = g.live_indexed().find(|(_, d)| d.is_subset_of(c)) {
        return Ok(Derivation { start: Premise::Axiom(i), steps: vec![] });
    }
    let start = match tr.status {
        UpStatus::Conflict(Antecedent::Clause(i)) => i,
        UpStatus::Conflict(Antecedent::Assumption) => {
            // A clash between two assumptions cannot happen for a clause;
            // a clash with a unit of `c` itself means some clause is ⊆ c.
            return Err(ResolutionError::NoConflict);
        }
        UpStatus::Fixpoint => return Err(ResolutionError::NoConflict),
    };
    let mut cur = g.clause(start).clone();
    let mut cur_premise = Premise::Axiom(start);
    let mut steps = Vec::new();
    for &(l, ante) in tr.units.iter().rev() {
        if !cur.contains(!l) {
            continue;
        }
        if let Antecedent::Clause(r) = ante {
            let reason = g.clause(r);
            let res = reason
                .resolve(&cur, l)
                .expect("resolvent along a propagation trail is never tautological");
            steps.push(ResolutionStep {
                left: Premise::Axiom(r),
                right: cur_premise,
                pivot: l.var(),
                resolvent: res.clone(),
            });
            cur_premise = Premise::Step(steps.len() - 1);
            cur = res;
        }
    }
    debug_assert!(cur.is_subset_of(c));
    Ok(Derivation { start: Premise::Axiom(start), steps })
}

/// Checks every step of a derivation against `g`.
pub fn check_derivation(g: &Formula, d: &Derivation) -> bool {
    let get = |p: Premise, done: &[ResolutionStep]| -> Option<Clause> {
        match p {
            Premise::Axiom(i) if i < g.len() => Some(g.clause(i).clone()),
            Premise::Step(k) if k < done.len() => Some(done[k].resolvent.clone()),
            _ => None,
        }
    };
    for (k, s) in d.steps.iter().enumerate() {
        let (Some(a), Some(b)) = (get(s.left, &d.steps[..k]), get(s.right, &d.steps[..k])) else {
            return false;
        };
        let p = Lit::pos(s.pivot);
        let r = if a.contains(p) && b.contains(!p) {
            a.resolve(&b, p)
        } else if a.contains(!p) && b.contains(p) {
            b.resolve(&a, p)
        } else {
            return false;
        };
        if r.as_ref() != Some(&s.resolvent) {
            return false;
        }
    }
    true
}
