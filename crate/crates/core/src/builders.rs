//! Explicit refutations of the combinatorial families: symmetry-based SPR
//! batches followed by RUP phases, gadget undo prefixes and a DSR
//! pigeonhole refutation with substitution witnesses.

use std::collections::{HashSet, VecDeque};
use std::fmt;

use crate::clause::{Clause, Lit, Var};
use crate::formula::Formula;
use crate::gens::{
    gen_bphp, gen_cc, gen_parity, gen_php, gen_tseitin, index_match, index_mismatch,
    tseitin_vertex_clauses, BphpLayout, CcLayout, GadgetMeta, GenError, Graph, ParLayout, PhpLayout,
};
use crate::proofsys::{pivot_step, spr_step, sr_step, Proof, ProofStep};
use crate::redundancy::implies_restriction;
use crate::subst::{restrict_clause, restrict_formula, Image, PartialAssignment, Restricted, Substitution};

/// A pair `(α, τ)` for the symmetry lemma: the batch adds `¬α` with witness `τ`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SymmetryPair {
    pub alpha: PartialAssignment,
    pub tau: PartialAssignment,
}

impl SymmetryPair {
    pub fn new(alpha: PartialAssignment, tau: PartialAssignment) -> SymmetryPair {
        SymmetryPair { alpha, tau }
    }

    pub fn clause(&self) -> Clause {
        self.alpha.negation()
    }
}

/// How strictly [`spr_symmetry_batch_with`] checks the lemma's conditions.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct BatchOptions {
    /// Accept `Γ↾α ⊢₁ Γ↾τ` in place of `Γ↾α = Γ↾τ`.
    pub implied: bool,
    /// For `j < i`, also accept pairs where `α_i` and `τ_i` agree on `dom(α_j)`.
    pub relaxed_disjointness: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum BatchError {
    #[error("pair {i}: α and τ have different domains")]
    DomainMismatch { i: usize },
    #[error("pair {i}: α and τ do not contradict")]
    NotContradictory { i: usize },
    #[error("pair {i}: Γ↾α and Γ↾τ differ")]
    NotSymmetric { i: usize },
    #[error("pairs ({i},{j}): α_{j} and τ_{i} are neither disjoint nor contradictory")]
    Overlap { i: usize, j: usize },
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum BuildError {
    #[error(transparent)]
    Gen(#[from] GenError),
    #[error(transparent)]
    Batch(#[from] BatchError),
    #[error("malformed gadget metadata: {0}")]
    BadMeta(String),
}

/// SPR steps adding `¬α_i` with witness `τ_i`, after checking the lemma's
/// conditions with equality of restrictions.
pub fn spr_symmetry_batch(g: &Formula, pairs: &[SymmetryPair]) -> Result<Proof, BatchError> {
    spr_symmetry_batch_with(g, pairs, BatchOptions::default())
}

pub fn spr_symmetry_batch_with(g: &Formula, pairs: &[SymmetryPair], opts: BatchOptions) -> Result<Proof, BatchError> {
    validate_batch(g, pairs, opts)?;
    Ok(pairs.iter().map(|p| spr_step(p.clause(), p.tau.clone())).collect())
}

fn validate_batch(g: &Formula, pairs: &[SymmetryPair], opts: BatchOptions) -> Result<(), BatchError> {
    for (i, p) in pairs.iter().enumerate() {
        if !p.alpha.same_domain(&p.tau) {
            return Err(BatchError::DomainMismatch { i });
        }
        if !p.alpha.contradicts(&p.tau) {
            return Err(BatchError::NotContradictory { i });
        }
        let symmetric = if opts.implied {
            implies_restriction(g, &p.alpha, &p.tau).is_ok()
        } else {
            restrict_formula(g, &p.alpha).canonical() == restrict_formula(g, &p.tau).canonical()
        };
        if !symmetric {
            return Err(BatchError::NotSymmetric { i });
        }
        for (j, q) in pairs[..i].iter().enumerate() {
            let ok = q.alpha.contradicts(&p.tau)
                || q.alpha.disjoint(&p.tau)
                || (opts.relaxed_disjointness && p.alpha.agrees_on(&p.tau, q.alpha.vars()));
            if !ok {
                return Err(BatchError::Overlap { i, j });
            }
        }
    }
    Ok(())
}

/// Proof under construction together with the clause set it induces.
struct Emit {
    g: Formula,
    pf: Proof,
}

impl Emit {
    fn new(g: &Formula) -> Emit {
        Emit { g: g.clone(), pf: Vec::new() }
    }

    fn rup(&mut self, c: Clause) {
        self.g.push(c.clone());
        self.pf.push(ProofStep::AddRup(c));
    }

    /// RUP unless the clause is already live.
    fn rup_new(&mut self, c: Clause) {
        if !self.g.contains_live(&c) {
            self.rup(c);
        }
    }

    fn witnessed(&mut self, step: ProofStep) {
        self.g.push(step.clause().clone());
        self.pf.push(step);
    }

    fn batch(&mut self, pairs: &[SymmetryPair], opts: BatchOptions) -> Result<(), BatchError> {
        for s in spr_symmetry_batch_with(&self.g, pairs, opts)? {
            self.witnessed(s);
        }
        Ok(())
    }

    fn delete(&mut self, c: &Clause) {
        if self.g.delete(c).is_some() {
            self.pf.push(ProofStep::Delete(c.clone()));
        }
    }

    fn refuted(&self) -> bool {
        self.g.has_empty()
    }
}

fn cl<I: IntoIterator<Item = Lit>>(lits: I) -> Clause {
    Clause::new(lits).expect("builder clauses are not tautological")
}

fn pa<I: IntoIterator<Item = (Var, bool)>>(pairs: I) -> PartialAssignment {
    PartialAssignment::from_pairs(pairs)
}

/// Derives `base` from the `2^k` clauses `base ∨ (sign pattern on vars)` by a
/// complete binary tree of RUP steps, `2^k − 1` of them, ending with `base`.
fn resolve_patterns(em: &mut Emit, base: &Clause, vars: &[Var]) {
    for t in (0..vars.len()).rev() {
        for v in 0usize..1 << t {
            let extra = (0..t).map(|b| Lit::with_value(vars[b], (v >> b) & 1 == 1));
            em.rup(cl(base.lits().iter().copied().chain(extra)));
        }
    }
}

/// Adds `D↾ρ` by RUP for every live clause `D` of `src` that `ρ` touches
/// without satisfying.
fn project(em: &mut Emit, src: &Formula, rho: &PartialAssignment) {
    let mut out = Vec::new();
    let mut seen = HashSet::new();
    for d in src.live() {
        if !d.vars().any(|v| rho.contains(v)) {
            continue;
        }
        if let Restricted::Clause(e) = restrict_clause(d, rho) {
            if seen.insert(e.clone()) {
                out.push(e);
            }
        }
    }
    for e in out {
        em.rup_new(e);
    }
}

// ---------------------------------------------------------------------------
// Pigeonhole

/// `(SPR steps, total steps)` of [`build_php_spr`].
pub fn php_step_count(n: usize) -> (usize, usize) {
    let s: usize = (0..n.saturating_sub(1)).map(|i| (n - i) * (n - 1 - i)).sum();
    (s, 2 * s + n * (n + 1) / 2 + 1)
}

fn php_pairs(n: usize) -> Vec<(SymmetryPair, Clause)> {
    let l = PhpLayout { n };
    let mut out = Vec::new();
    for i in 0..n.saturating_sub(1) {
        for j in i + 1..=n {
            for k in i + 1..n {
                // α: i in hole k, j in hole i; τ swaps holes i and k
                let mut alpha = PartialAssignment::new();
                let mut tau = PartialAssignment::new();
                for q in 0..=n {
                    alpha.set(l.p(q, k), q == i);
                    alpha.set(l.p(q, i), q == j);
                    tau.set(l.p(q, i), q == i);
                    tau.set(l.p(q, k), q == j);
                }
                let short = cl([Lit::neg(l.p(i, k)), Lit::neg(l.p(j, i))]);
                out.push((SymmetryPair::new(alpha, tau), short));
            }
        }
    }
    out
}

/// SPR refutation of `PHP_n` without deletion or new variables.
pub fn build_php_spr(n: usize) -> Proof {
    let g = gen_php(n);
    let l = PhpLayout { n };
    let mut em = Emit::new(&g);
    let (pairs, shorts): (Vec<_>, Vec<_>) = php_pairs(n).into_iter().unzip();
    em.batch(&pairs, BatchOptions::default()).expect("PHP hole swaps satisfy the symmetry conditions");
    for c in shorts {
        em.rup(c);
    }
    for i in 0..n {
        for j in i + 1..=n {
            em.rup(Clause::unit(Lit::neg(l.p(j, i))));
        }
    }
    em.rup(Clause::empty());
    em.pf
}

/// DSR refutation of `PHP_n`: substitution witnesses swapping pigeons, with
/// the used clauses deleted after each round.
pub fn build_php_dsr(n: usize) -> Proof {
    assert!(n >= 1, "PHP needs n ≥ 1");
    let g = gen_php(n);
    let l = PhpLayout { n };
    let mut em = Emit::new(&g);
    let pigeon_axiom = |s: usize, from: usize| cl((from..n).map(|j| Lit::pos(l.p(s, j))));
    for t in 0..n {
        for s in t + 1..=n {
            let c = cl([Lit::neg(l.p(s, t)), Lit::pos(l.p(t, t))]);
            let mut w = Substitution::identity();
            w.set(l.p(t, t), Image::Const(true));
            w.set(l.p(s, t), Image::Const(false));
            for j in t + 1..n {
                w.set(l.p(t, j), Image::Lit(Lit::pos(l.p(s, j))));
                w.set(l.p(s, j), Image::Lit(Lit::pos(l.p(t, j))));
            }
            em.witnessed(sr_step(c.clone(), w));
            em.rup(Clause::unit(Lit::neg(l.p(s, t))));
            em.delete(&c);
        }
        if t + 1 == n {
            em.rup(Clause::empty());
            break;
        }
        for s in t + 1..=n {
            em.rup(pigeon_axiom(s, t + 1));
        }
        for s in t..=n {
            em.delete(&pigeon_axiom(s, t));
        }
        for a in t..=n {
            for b in a + 1..=n {
                em.delete(&cl([Lit::neg(l.p(a, t)), Lit::neg(l.p(b, t))]));
                if a == t {
                    for j in t + 1..n {
                        em.delete(&cl([Lit::neg(l.p(a, j)), Lit::neg(l.p(b, j))]));
                    }
                }
            }
        }
        for s in t + 1..=n {
            em.delete(&Clause::unit(Lit::neg(l.p(s, t))));
        }
    }
    em.pf
}

// ---------------------------------------------------------------------------
// Bit pigeonhole

pub fn bphp_spr_count(k: usize) -> usize {
    let n = 1usize << k;
    (0..n - 1).map(|m| (n - m) * (n - 1 - m)).sum()
}

/// SPR refutation of the bit pigeonhole principle with `2^k` holes.
pub fn build_bphp_spr(k: usize) -> Proof {
    let g = gen_bphp(k);
    let l = BphpLayout { k };
    let n = l.holes();
    let mut em = Emit::new(&g);
    let maps = |x: usize, y: usize| pa(l.maps_to(x, y).into_iter().map(|q| (q.var(), q.is_pos())));
    let mut pairs = Vec::new();
    for m in 0..n - 1 {
        for x in m + 1..=n {
            for y in m + 1..n {
                let alpha = maps(m, y).compose(&maps(x, m));
                let tau = maps(m, m).compose(&maps(x, y));
                pairs.push(SymmetryPair::new(alpha, tau));
            }
        }
    }
    em.batch(&pairs, BatchOptions::default()).expect("BPHP hole swaps satisfy the symmetry conditions");
    // (x ↛ m) for x > m, by induction on m
    for m in 0..n {
        let bits: Vec<Var> = (1..=k).map(|b| l.p(m, b)).collect();
        for x in m + 1..=n {
            resolve_patterns(&mut em, &l.not_maps_to(x, m), &bits);
        }
    }
    let last: Vec<Var> = (1..=k).map(|b| l.p(n, b)).collect();
    resolve_patterns(&mut em, &Clause::empty(), &last);
    em.pf
}

// ---------------------------------------------------------------------------
// Parity

fn parity_matching(l: &ParLayout, verts: [usize; 4], matched: [(usize, usize); 2]) -> PartialAssignment {
    let mut a = PartialAssignment::new();
    for &u in &verts {
        for w in 0..l.n {
            if w != u {
                let on = matched.iter().any(|&(p, q)| (p == u && q == w) || (p == w && q == u));
                a.set(l.x(u, w), on);
            }
        }
    }
    a
}

pub fn parity_spr_count(n: usize) -> usize {
    (0..n / 2).map(|i| (n - 2 * i - 2) * (n - 2 * i - 3)).sum()
}

/// SPR refutation of the parity principle on `n` (odd) vertices.
pub fn build_parity_spr(n: usize) -> Result<Proof, BuildError> {
    let g = gen_parity(n)?;
    let l = ParLayout { n };
    let half = n / 2;
    let mut em = Emit::new(&g);
    let mut pairs = Vec::new();
    for i in 0..half {
        let (u, v) = (2 * i, 2 * i + 1);
        for j in v + 1..n {
            for k in v + 1..n {
                if j != k {
                    let alpha = parity_matching(&l, [u, v, j, k], [(u, j), (v, k)]);
                    let tau = parity_matching(&l, [u, v, j, k], [(u, v), (j, k)]);
                    pairs.push(SymmetryPair::new(alpha, tau));
                }
            }
        }
    }
    let opts = BatchOptions {
        implied: false,
        relaxed_disjointness: true,
    };
    em.batch(&pairs, opts)?;
    let x = |a: usize, b: usize| l.x(a, b);
    for i in 0..half {
        let (u, v) = (2 * i, 2 * i + 1);
        for r in 0..u {
            em.rup(Clause::unit(Lit::neg(x(u, r))));
            em.rup(Clause::unit(Lit::neg(x(v, r))));
        }
        let rest = || v + 1..n;
        em.rup(cl(std::iter::once(Lit::pos(x(u, v))).chain(rest().map(|r| Lit::pos(x(u, r))))));
        em.rup(cl(std::iter::once(Lit::pos(x(u, v))).chain(rest().map(|r| Lit::pos(x(v, r))))));
        for j in rest() {
            for k in rest() {
                if j != k {
                    em.rup(cl([Lit::neg(x(u, j)), Lit::neg(x(v, k))]));
                }
            }
        }
        for j in rest() {
            em.rup(cl([Lit::pos(x(u, v)), Lit::neg(x(u, j))]));
        }
        em.rup(Clause::unit(Lit::pos(x(u, v))));
    }
    em.rup(Clause::empty());
    Ok(em.pf)
}

// ---------------------------------------------------------------------------
// Clique-coloring

/// `(a → i → c)`: index `a` picks vertex `i`, which gets color `c`.
fn cc_pick(l: &CcLayout, a: usize, i: usize, c: usize) -> PartialAssignment {
    let mut s = PartialAssignment::new();
    for b in 0..l.m {
        s.set(l.p(b, i), b == a);
    }
    for d in 0..l.m - 1 {
        s.set(l.q(i, d), d == c);
    }
    s
}

/// SPR refutation of the clique-coloring formula with `n` vertices and clique size `m`.
pub fn build_cc_spr(n: usize, m: usize) -> Result<Proof, BuildError> {
    let g = gen_cc(n, m)?;
    let l = CcLayout { n, m };
    let mut em = Emit::new(&g);
    let (p, q, x) = (|a, i| Lit::pos(l.p(a, i)), |i, c| Lit::pos(l.q(i, c)), |i, j| Lit::pos(l.x(i, j)));

    // Helper clauses making the vertex swap visible to unit propagation.
    for a in 0..m {
        for v in 0..n {
            for w in v + 1..n {
                em.witnessed(pivot_step(cl([!p(a, v), !p(a, w)]), !p(a, w)));
            }
        }
    }
    for u in 0..n {
        for w in 0..n {
            if u != w {
                let c = cl(std::iter::once(!x(u, w)).chain((0..m).map(|b| p(b, w))));
                em.witnessed(pivot_step(c, !x(u, w)));
            }
        }
    }
    for u in 0..n {
        for w in 0..n {
            for v in 0..n {
                if u != w && v != u && v != w {
                    for b in 0..m {
                        em.rup(cl([!x(u, w), !p(b, v), x(v, w)]));
                    }
                }
            }
        }
    }

    let mut pairs = Vec::new();
    let mut cs = Vec::new();
    for r in 0..m.saturating_sub(2) {
        for a in r + 1..m {
            for i in 0..n {
                for j in 0..n {
                    if i == j {
                        continue;
                    }
                    for c in r + 1..m - 1 {
                        let alpha = cc_pick(&l, a, j, r).compose(&cc_pick(&l, r, i, c));
                        let tau = cc_pick(&l, a, j, c).compose(&cc_pick(&l, r, i, r));
                        pairs.push(SymmetryPair::new(alpha, tau));
                        cs.push(cl([!p(a, j), !q(j, r), !p(r, i), !q(i, c)]));
                    }
                }
            }
        }
    }
    em.batch(
        &pairs,
        BatchOptions {
            implied: true,
            relaxed_disjointness: false,
        },
    )?;
    for c in cs {
        em.rup(c);
    }

    // ¬p_{a,j} ∨ ⋁_{c>r} q_{j,c}
    let inductive = |a: usize, j: usize, r: usize| cl(std::iter::once(!p(a, j)).chain((r + 1..m - 1).map(|c| q(j, c))));
    for r in 0..m.saturating_sub(2) {
        for a in r + 1..m {
            for j in 0..n {
                for i in (0..n).filter(|&i| i != j) {
                    em.rup(cl([!p(a, j), !q(j, r), !p(r, i), q(i, r)]));
                }
                for i in (0..n).filter(|&i| i != j) {
                    em.rup(cl([!p(a, j), !q(j, r), !p(r, i)]));
                }
                em.rup(cl([!p(a, j), !q(j, r)]));
                em.rup(inductive(a, j, r));
            }
        }
    }
    for i in 0..n {
        for j in (0..n).filter(|&j| j != i) {
            em.rup(cl([!p(m - 2, i), !p(m - 1, j)]));
        }
    }
    for i in 0..n {
        em.rup(Clause::unit(!p(m - 2, i)));
    }
    em.rup(Clause::empty());
    Ok(em.pf)
}

// ---------------------------------------------------------------------------
// Tseitin

/// Shortest cycle of a multigraph (self-loops and parallel edges allowed), as
/// the root vertex and the edge ids in order starting at the root. BFS from
/// every vertex; ties go to the smallest root.
fn shortest_cycle(nv: usize, edges: &[(usize, usize)]) -> Option<(usize, Vec<usize>)> {
    if let Some((e, &(u, _))) = edges.iter().enumerate().filter(|(_, &(u, w))| u == w).min_by_key(|(e, &(u, _))| (u, *e)) {
        return Some((u, vec![e]));
    }
    let mut adj: Vec<Vec<(usize, usize)>> = vec![Vec::new(); nv];
    for (e, &(u, w)) in edges.iter().enumerate() {
        adj[u].push((w, e));
        adj[w].push((u, e));
    }
    let mut best: Option<(usize, usize, Vec<usize>)> = None;
    for s in 0..nv {
        let mut dist = vec![usize::MAX; nv];
        let mut parent = vec![usize::MAX; nv];
        let mut branch = vec![usize::MAX; nv];
        dist[s] = 0;
        let mut queue = VecDeque::from([s]);
        while let Some(u) = queue.pop_front() {
            for &(w, e) in &adj[u] {
                if dist[w] == usize::MAX {
                    dist[w] = dist[u] + 1;
                    parent[w] = e;
                    branch[w] = if u == s { w } else { branch[u] };
                    queue.push_back(w);
                }
            }
        }
        let mut local: Option<(usize, usize)> = None;
        for (e, &(a, b)) in edges.iter().enumerate() {
            if dist[a] == usize::MAX || dist[b] == usize::MAX || parent[a] == e || parent[b] == e {
                continue;
            }
            if a != s && b != s && branch[a] == branch[b] {
                continue;
            }
            let len = dist[a] + dist[b] + 1;
            if local.is_none_or(|(l, _)| len < l) {
                local = Some((len, e));
            }
        }
        let Some((len, e)) = local else { continue };
        if best.as_ref().is_some_and(|(l, _, _)| *l <= len) {
            continue;
        }
        let up = |mut v: usize| {
            let mut out = Vec::new();
            while v != s {
                let pe = parent[v];
                out.push(pe);
                let (x, y) = edges[pe];
                v = if x == v { y } else { x };
            }
            out
        };
        let (a, b) = edges[e];
        let mut cyc: Vec<usize> = up(a).into_iter().rev().collect();
        cyc.push(e);
        cyc.extend(up(b));
        best = Some((len, s, cyc));
    }
    best.map(|(_, s, c)| (s, c))
}

/// Shortest cycle of `g` as a vertex sequence `v₀ v₁ … v_{L−1}` (closing edge
/// `v_{L−1} v₀`). With minimum degree 3 its length is at most `2·log₂ n`.
pub fn find_short_cycle(g: &Graph) -> Option<Vec<usize>> {
    let (s, cyc) = shortest_cycle(g.num_vertices(), g.edges())?;
    let mut verts = vec![s];
    let mut cur = s;
    for &e in &cyc[..cyc.len() - 1] {
        let (a, b) = g.edges()[e];
        cur = if a == cur { b } else { a };
        verts.push(cur);
    }
    Some(verts)
}

/// Shape of a Tseitin refutation.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct TseitinStats {
    /// Edges removed by a symmetry batch.
    pub cycle_rounds: usize,
    /// Edges removed through a degree-1 vertex.
    pub leaf_rounds: usize,
    pub spr_steps: usize,
    /// Largest number of SPR clauses added in one round.
    pub max_batch: usize,
    /// Longest compressed cycle used.
    pub max_cycle: usize,
}

/// A maximal path through degree-2 vertices: its edges and the vertices
/// between consecutive edges.
struct Path {
    edges: Vec<usize>,
    inner: Vec<usize>,
}

impl Path {
    /// Edge values consistent with the inner vertices' charges, given the first edge.
    fn values(&self, first: bool, charge: &[bool]) -> Vec<bool> {
        let mut out = vec![first];
        for &v in &self.inner {
            let prev = *out.last().unwrap();
            out.push(charge[v] ^ prev);
        }
        out
    }
}

struct TsState<'a> {
    edges: &'a [(usize, usize)],
    alive: Vec<bool>,
    charge: Vec<bool>,
    gone: Vec<bool>,
}

impl TsState<'_> {
    fn var(e: usize) -> Var {
        e as Var + 1
    }

    fn incident(&self, v: usize) -> Vec<usize> {
        (0..self.edges.len())
            .filter(|&e| self.alive[e] && (self.edges[e].0 == v || self.edges[e].1 == v))
            .collect()
    }

    fn other(&self, e: usize, v: usize) -> usize {
        let (a, b) = self.edges[e];
        if a == v {
            b
        } else {
            a
        }
    }

    /// Emits the vertex constraint of `v` in the current graph.
    fn rederive(&self, em: &mut Emit, v: usize) {
        for c in tseitin_vertex_clauses(&self.incident(v), self.charge[v]) {
            em.rup_new(c);
        }
    }

    fn paths(&self, degree: &[usize]) -> (Vec<usize>, Vec<(usize, usize, Path)>) {
        let nv = degree.len();
        let mut junctions: Vec<usize> = (0..nv).filter(|&v| !self.gone[v] && degree[v] >= 3).collect();
        if junctions.is_empty() {
            junctions = (0..nv).filter(|&v| !self.gone[v] && degree[v] == 2).take(1).collect();
        }
        let mut jid = vec![usize::MAX; nv];
        for (k, &v) in junctions.iter().enumerate() {
            jid[v] = k;
        }
        let mut visited = vec![false; self.edges.len()];
        let mut out = Vec::new();
        for &u in &junctions {
            for e0 in self.incident(u) {
                if visited[e0] {
                    continue;
                }
                visited[e0] = true;
                let mut path = Path {
                    edges: vec![e0],
                    inner: Vec::new(),
                };
                let mut cur = self.other(e0, u);
                let mut last = e0;
                while jid[cur] == usize::MAX {
                    let next = self.incident(cur).into_iter().find(|&e| e != last).expect("degree-2 vertex");
                    visited[next] = true;
                    path.inner.push(cur);
                    path.edges.push(next);
                    last = next;
                    cur = self.other(next, cur);
                }
                out.push((jid[u], jid[cur], path));
            }
        }
        (junctions, out)
    }
}

/// SPR refutation of the Tseitin formula of `graph` with the given charges.
pub fn build_tseitin_spr(graph: &Graph, charge: &[bool]) -> Result<Proof, BuildError> {
    build_tseitin_spr_stats(graph, charge).map(|(p, _)| p)
}

pub fn build_tseitin_spr_stats(graph: &Graph, charge: &[bool]) -> Result<(Proof, TseitinStats), BuildError> {
    let g0 = gen_tseitin(graph, charge)?;
    let mut em = Emit::new(&g0);
    let mut stats = TseitinStats::default();
    let nv = graph.num_vertices();
    let mut st = TsState {
        edges: graph.edges(),
        alive: vec![true; graph.edges().len()],
        charge: charge.to_vec(),
        gone: vec![false; nv],
    };
    if em.refuted() {
        em.rup(Clause::empty());
        return Ok((em.pf, stats));
    }
    loop {
        let degree: Vec<usize> = (0..nv).map(|v| st.incident(v).len()).collect();
        for v in 0..nv {
            if !st.gone[v] && degree[v] == 0 {
                // a charged isolated vertex has already produced ⊥
                st.gone[v] = true;
            }
        }
        if let Some(j) = (0..nv).find(|&v| !st.gone[v] && degree[v] == 1) {
            let e = st.incident(j)[0];
            let k = st.other(e, j);
            st.alive[e] = false;
            st.charge[k] ^= st.charge[j];
            st.gone[j] = true;
            st.rederive(&mut em, k);
            stats.leaf_rounds += 1;
            if em.refuted() {
                break;
            }
            continue;
        }
        if (0..nv).all(|v| st.gone[v]) {
            unreachable!("odd total charge leaves a contradiction");
        }
        let (junctions, paths) = st.paths(&degree);
        let hedges: Vec<(usize, usize)> = paths.iter().map(|&(a, b, _)| (a, b)).collect();
        let (_, cyc) = shortest_cycle(junctions.len(), &hedges).expect("minimum degree 3 forces a cycle");
        let ks: Vec<&Path> = cyc.iter().map(|&h| &paths[h].2).collect();
        let m = ks.len();
        let mut pairs = Vec::with_capacity(1 << (m - 1));
        let mut zs = Vec::new();
        for bits in 0usize..1 << (m - 1) {
            let mut alpha = PartialAssignment::new();
            let mut z = Vec::new();
            for (t, path) in ks.iter().enumerate() {
                let first = t == 0 || (bits >> (t - 1)) & 1 == 1;
                for (&e, val) in path.edges.iter().zip(path.values(first, &st.charge)) {
                    alpha.set(TsState::var(e), val);
                }
                z.push(Lit::with_value(TsState::var(path.edges[0]), !first));
            }
            let tau = pa(alpha.iter().map(|(v, b)| (v, !b)));
            pairs.push(SymmetryPair::new(alpha, tau));
            zs.push(cl(z));
        }
        em.batch(
            &pairs,
            BatchOptions {
                implied: true,
                relaxed_disjointness: false,
            },
        )?;
        if ks.iter().any(|p| p.edges.len() > 1) {
            for z in zs {
                em.rup(z);
            }
        }
        let e0 = ks[0].edges[0];
        let firsts: Vec<Var> = ks[1..].iter().map(|p| TsState::var(p.edges[0])).collect();
        resolve_patterns(&mut em, &Clause::unit(Lit::neg(TsState::var(e0))), &firsts);
        stats.cycle_rounds += 1;
        stats.spr_steps += pairs.len();
        stats.max_batch = stats.max_batch.max(pairs.len());
        stats.max_cycle = stats.max_cycle.max(m);
        st.alive[e0] = false;
        let (a, b) = st.edges[e0];
        st.rederive(&mut em, a);
        st.rederive(&mut em, b);
        if em.refuted() {
            break;
        }
    }
    Ok((em.pf, stats))
}

// ---------------------------------------------------------------------------
// Gadget undo

fn check_group(g: &Formula, vars: &[Var]) -> Result<(), BuildError> {
    if vars.is_empty() {
        return Err(BuildError::BadMeta("empty variable group".into()));
    }
    let present = g.vars();
    if let Some(v) = vars.iter().find(|v| !present.contains(v)) {
        return Err(BuildError::BadMeta(format!("variable {v} does not occur in the formula")));
    }
    let distinct: HashSet<&Var> = vars.iter().collect();
    if distinct.len() != vars.len() {
        return Err(BuildError::BadMeta("repeated variable in group".into()));
    }
    Ok(())
}

fn swap_pair(x1: Var, xj: Var) -> SymmetryPair {
    SymmetryPair::new(pa([(x1, false), (xj, true)]), pa([(x1, true), (xj, false)]))
}

/// SPR prefix undoing `orify`: derives `x₁ ∨ ¬x_j` for `j > 1`, then
/// the clauses `x₁ ∨ C`.
pub fn undo_orify(g: &Formula, group: &[Var]) -> Result<Proof, BuildError> {
    check_group(g, group)?;
    let mut em = Emit::new(g);
    let x1 = group[0];
    let pairs: Vec<SymmetryPair> = group[1..].iter().map(|&xj| swap_pair(x1, xj)).collect();
    em.batch(&pairs, BatchOptions::default())?;
    project(&mut em, g, &pa(group[1..].iter().map(|&v| (v, false))));
    Ok(em.pf)
}

/// SPR prefix undoing `xorify`: units `¬x_j` for `j > 1`, then the
/// clauses over `x₁` alone.
pub fn undo_xorify(g: &Formula, group: &[Var]) -> Result<Proof, BuildError> {
    check_group(g, group)?;
    let mut em = Emit::new(g);
    let x1 = group[0];
    let opts = BatchOptions {
        implied: true,
        relaxed_disjointness: false,
    };
    for &xj in &group[1..] {
        let flip = SymmetryPair::new(pa([(x1, true), (xj, true)]), pa([(x1, false), (xj, false)]));
        em.batch(&[swap_pair(x1, xj), flip], opts)?;
        em.rup(Clause::unit(Lit::neg(xj)));
    }
    project(&mut em, g, &pa(group[1..].iter().map(|&v| (v, false))));
    Ok(em.pf)
}

/// SPR prefix undoing `lift_index`: the clauses `(y ↛ i)` for
/// `i ≠ 0`, units `¬y_j`, then the `z₀` copies.
pub fn undo_lift(g: &Formula, ys: &[Var], zs: &[Var]) -> Result<Proof, BuildError> {
    check_group(g, ys)?;
    if ys.len() >= usize::BITS as usize || zs.len() != 1 << ys.len() {
        return Err(BuildError::BadMeta(format!("{} selector bits need {} data variables", ys.len(), 1usize << ys.len().min(63))));
    }
    check_group(g, zs)?;
    let mut em = Emit::new(g);
    let sel = |i: usize| pa(index_match(ys, i).into_iter().map(|l| (l.var(), l.is_pos())));
    let mut pairs = Vec::new();
    for i in 1..zs.len() {
        for a in [false, true] {
            for b in [false, true] {
                let alpha = sel(i).compose(&pa([(zs[0], a), (zs[i], b)]));
                let tau = sel(0).compose(&pa([(zs[0], b), (zs[i], a)]));
                pairs.push(SymmetryPair::new(alpha, tau));
            }
        }
    }
    em.batch(&pairs, BatchOptions::default())?;
    for i in 1..zs.len() {
        resolve_patterns(&mut em, &index_mismatch(ys, i), &[zs[0], zs[i]]);
    }
    for (b, &y) in ys.iter().enumerate() {
        let others: Vec<Var> = ys.iter().enumerate().filter(|&(c, _)| c != b).map(|(_, &v)| v).collect();
        resolve_patterns(&mut em, &Clause::unit(Lit::neg(y)), &others);
    }
    project(&mut em, g, &pa(ys.iter().map(|&y| (y, false))));
    Ok(em.pf)
}

/// Dispatches on the gadget metadata.
pub fn undo_gadget(g: &Formula, meta: &GadgetMeta) -> Result<Proof, BuildError> {
    match meta {
        GadgetMeta::Or { group } => undo_orify(g, group),
        GadgetMeta::Xor { group } => undo_xorify(g, group),
        GadgetMeta::Lift { ys, zs } => undo_lift(g, ys, zs),
    }
}

impl fmt::Display for SymmetryPair {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "α={} τ={}", self.alpha.negation(), self.tau.negation())
    }
}

/// Families with a builder, for the CLI and the benches.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Family {
    Php,
    Bphp,
    Parity,
    Cc,
    Tseitin,
}

impl Family {
    pub fn parse(s: &str) -> Option<Family> {
        Some(match s.to_ascii_lowercase().as_str() {
            "php" => Family::Php,
            "bphp" => Family::Bphp,
            "parity" | "par" => Family::Parity,
            "cc" | "clique-coloring" => Family::Cc,
            "tseitin" | "ts" => Family::Tseitin,
            _ => return None,
        })
    }
}
