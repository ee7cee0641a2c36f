//! Formula families (pigeonhole, bit pigeonhole, parity, clique-coloring,
//! Tseitin, the dormant-variable gadget X^m) and the orification, xorification
//! and index-lifting gadgets.

use std::fmt;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::clause::{Clause, Lit, Var};
use crate::formula::Formula;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum GenError {
    #[error("parity principle needs an odd number of vertices, got {0}")]
    EvenParity(usize),
    #[error("parameters out of range: {0}")]
    BadRange(String),
    #[error("total charge is even")]
    EvenCharge,
    #[error("variable {0} does not occur in the formula")]
    VarAbsent(Var),
    #[error("no {d}-regular graph on {n} vertices")]
    Infeasible { n: usize, d: usize },
    #[error("graph: {0}")]
    BadGraph(String),
}

/// Literal that is true exactly when bit `bit` of `value` equals `v`'s value.
fn bit_lit(v: Var, value: usize, bit: usize) -> Lit {
    Lit::with_value(v, (value >> bit) & 1 == 1)
}

/// Pigeonhole layout: `p(i,j) = i·n + j + 1`, pigeons `i ∈ [n+1]`, holes `j ∈ [n]`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PhpLayout {
    pub n: usize,
}

impl PhpLayout {
    pub fn p(&self, i: usize, j: usize) -> Var {
        (i * self.n + j + 1) as Var
    }

    pub fn num_vars(&self) -> Var {
        ((self.n + 1) * self.n) as Var
    }

    pub fn pigeon_of(&self, v: Var) -> Option<usize> {
        (v >= 1 && v <= self.num_vars()).then(|| (v as usize - 1) / self.n)
    }
}

/// Bit pigeonhole layout: pigeon `x ∈ [n+1]` owns variables `x·k + 1 ..= x·k + k`;
/// bit `b` (from 0) of the hole number is variable `x·k + b + 1`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct BphpLayout {
    pub k: usize,
}

impl BphpLayout {
    pub fn holes(&self) -> usize {
        1 << self.k
    }

    pub fn p(&self, x: usize, i: usize) -> Var {
        debug_assert!(i >= 1 && i <= self.k);
        (x * self.k + i) as Var
    }

    pub fn num_vars(&self) -> Var {
        (self.k * (self.holes() + 1)) as Var
    }

    pub fn pigeon_of(&self, v: Var) -> Option<usize> {
        (v >= 1 && v <= self.num_vars()).then(|| (v as usize - 1) / self.k)
    }

    /// Literals of `(x → y)`: pigeon `x` sits in hole `y`.
    pub fn maps_to(&self, x: usize, y: usize) -> Vec<Lit> {
        (0..self.k).map(|b| bit_lit(self.p(x, b + 1), y, b)).collect()
    }

    /// The clause `(x ↛ y)`.
    pub fn not_maps_to(&self, x: usize, y: usize) -> Clause {
        Clause::new(self.maps_to(x, y).into_iter().map(|l| !l)).expect("distinct variables")
    }
}

/// Parity layout: `x(i,j) = j(j−1)/2 + i + 1` for `i < j`, symmetric.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ParLayout {
    pub n: usize,
}

fn tri(i: usize, j: usize) -> usize {
    let (i, j) = if i < j { (i, j) } else { (j, i) };
    debug_assert!(i < j);
    j * (j - 1) / 2 + i
}

impl ParLayout {
    pub fn x(&self, i: usize, j: usize) -> Var {
        (tri(i, j) + 1) as Var
    }

    pub fn num_vars(&self) -> Var {
        (self.n * (self.n - 1) / 2) as Var
    }
}

/// Clique-coloring layout: consecutive blocks `p(a,i)` (a ∈ [m], i ∈ [n]),
/// `q(i,c)` (c ∈ [m−1]), then symmetric edge variables `x(i,j)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CcLayout {
    pub n: usize,
    pub m: usize,
}

impl CcLayout {
    pub fn p(&self, a: usize, i: usize) -> Var {
        (a * self.n + i + 1) as Var
    }

    pub fn q(&self, i: usize, c: usize) -> Var {
        (self.m * self.n + i * (self.m - 1) + c + 1) as Var
    }

    pub fn x(&self, i: usize, j: usize) -> Var {
        (self.m * self.n + self.n * (self.m - 1) + tri(i, j) + 1) as Var
    }

    pub fn num_vars(&self) -> Var {
        (self.m * self.n + self.n * (self.m - 1) + self.n * (self.n - 1) / 2) as Var
    }
}

/// Variable layout of a generated family.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum VarLayout {
    Php(PhpLayout),
    Bphp(BphpLayout),
    Parity(ParLayout),
    Cc(CcLayout),
    /// One variable per edge, `x_e = e + 1` in edge order.
    Tseitin { edges: usize },
    /// `y = offset`, `x_i = offset + i`.
    Xm { m: usize, offset: Var },
}

impl VarLayout {
    pub fn num_vars(&self) -> Var {
        match self {
            VarLayout::Php(l) => l.num_vars(),
            VarLayout::Bphp(l) => l.num_vars(),
            VarLayout::Parity(l) => l.num_vars(),
            VarLayout::Cc(l) => l.num_vars(),
            VarLayout::Tseitin { edges } => *edges as Var,
            VarLayout::Xm { m, offset } => offset + *m as Var,
        }
    }

    /// Human-readable name of a variable, e.g. `p[2,0]`.
    pub fn name(&self, v: Var) -> Option<String> {
        if v == 0 || v > self.num_vars() {
            return None;
        }
        let u = v as usize - 1;
        Some(match self {
            VarLayout::Php(l) => format!("p[{},{}]", u / l.n, u % l.n),
            VarLayout::Bphp(l) => format!("p[{}]_{}", u / l.k, u % l.k + 1),
            VarLayout::Parity(_) => {
                let (i, j) = untri(u);
                format!("x[{i},{j}]")
            }
            VarLayout::Cc(l) => {
                let (pb, qb) = (l.m * l.n, l.n * (l.m - 1));
                if u < pb {
                    format!("p[{},{}]", u / l.n, u % l.n)
                } else if u < pb + qb {
                    let w = u - pb;
                    format!("q[{},{}]", w / (l.m - 1), w % (l.m - 1))
                } else {
                    let (i, j) = untri(u - pb - qb);
                    format!("x[{i},{j}]")
                }
            }
            VarLayout::Tseitin { .. } => format!("x_e{u}"),
            VarLayout::Xm { offset, .. } => {
                if v < *offset {
                    return None;
                } else if v == *offset {
                    "y".to_string()
                } else {
                    format!("x{}", v - offset)
                }
            }
        })
    }

    /// Pigeon owning `v`, for the pigeonhole families.
    pub fn pigeon_of(&self, v: Var) -> Option<usize> {
        match self {
            VarLayout::Php(l) => l.pigeon_of(v),
            VarLayout::Bphp(l) => l.pigeon_of(v),
            _ => None,
        }
    }
}

fn untri(u: usize) -> (usize, usize) {
    let mut j = 1;
    while j * (j + 1) / 2 <= u {
        j += 1;
    }
    (u - j * (j - 1) / 2, j)
}

fn cl(lits: impl IntoIterator<Item = Lit>) -> Clause {
    Clause::new(lits).expect("generated clause is not tautological")
}

pub fn gen_php(n: usize) -> Formula {
    assert!(n >= 1, "PHP needs n ≥ 1");
    let l = PhpLayout { n };
    let mut g = Formula::new(l.num_vars());
    for i in 0..=n {
        g.push(cl((0..n).map(|j| Lit::pos(l.p(i, j)))));
    }
    for j in 0..n {
        for i in 0..=n {
            for i2 in i + 1..=n {
                g.push(cl([Lit::neg(l.p(i, j)), Lit::neg(l.p(i2, j))]));
            }
        }
    }
    g
}

/// Bit pigeonhole with `2^k` holes and `2^k + 1` pigeons.
pub fn gen_bphp(k: usize) -> Formula {
    assert!(k >= 1, "BPHP needs k ≥ 1");
    let l = BphpLayout { k };
    let n = l.holes();
    let mut g = Formula::new(l.num_vars());
    for y in 0..n {
        for x in 0..=n {
            for x2 in x + 1..=n {
                let c = l.not_maps_to(x, y).or(&l.not_maps_to(x2, y)).expect("disjoint pigeons");
                g.push(c);
            }
        }
    }
    g
}

pub fn gen_parity(n: usize) -> Result<Formula, GenError> {
    if n < 3 {
        return Err(GenError::BadRange(format!("parity needs n ≥ 3, got {n}")));
    }
    if n.is_multiple_of(2) {
        return Err(GenError::EvenParity(n));
    }
    let l = ParLayout { n };
    let mut g = Formula::new(l.num_vars());
    for i in 0..n {
        g.push(cl((0..n).filter(|&j| j != i).map(|j| Lit::pos(l.x(i, j)))));
    }
    for i in 0..n {
        for j in 0..n {
            for j2 in j + 1..n {
                if j != i && j2 != i {
                    g.push(cl([Lit::neg(l.x(i, j)), Lit::neg(l.x(i, j2))]));
                }
            }
        }
    }
    Ok(g)
}

/// Clique-coloring: `n` vertices, a clique of size `m`, `m−1` colors.
/// Clauses come in schema order (i)..(vi); symmetric duplicates are emitted once.
pub fn gen_cc(n: usize, m: usize) -> Result<Formula, GenError> {
    if m < 2 || m > n {
        return Err(GenError::BadRange(format!("clique-coloring needs 2 ≤ m ≤ n, got n={n}, m={m}")));
    }
    let l = CcLayout { n, m };
    let mut g = Formula::new(l.num_vars());
    for a in 0..m {
        g.push(cl((0..n).map(|i| Lit::pos(l.p(a, i)))));
    }
    for i in 0..n {
        for a in 0..m {
            for a2 in a + 1..m {
                g.push(cl([Lit::neg(l.p(a, i)), Lit::neg(l.p(a2, i))]));
            }
        }
    }
    for i in 0..n {
        g.push(cl((0..m - 1).map(|c| Lit::pos(l.q(i, c)))));
    }
    for i in 0..n {
        for c in 0..m - 1 {
            for c2 in c + 1..m - 1 {
                g.push(cl([Lit::neg(l.q(i, c)), Lit::neg(l.q(i, c2))]));
            }
        }
    }
    // (a,a',i,j) and (a',a,j,i) give the same clause; keep i < j.
    for i in 0..n {
        for j in i + 1..n {
            for a in 0..m {
                for a2 in 0..m {
                    if a != a2 {
                        g.push(cl([Lit::neg(l.p(a, i)), Lit::neg(l.p(a2, j)), Lit::pos(l.x(i, j))]));
                    }
                }
            }
        }
    }
    for c in 0..m - 1 {
        for i in 0..n {
            for j in i + 1..n {
                g.push(cl([Lit::neg(l.q(i, c)), Lit::neg(l.q(j, c)), Lit::neg(l.x(i, j))]));
            }
        }
    }
    Ok(g)
}

/// Simple undirected graph on vertices `0..n`; edges are stored with `u < w`.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Graph {
    n: usize,
    edges: Vec<(usize, usize)>,
}

impl Graph {
    pub fn new(n: usize) -> Graph {
        Graph { n, edges: Vec::new() }
    }

    pub fn from_edges(n: usize, edges: &[(usize, usize)]) -> Result<Graph, GenError> {
        let mut g = Graph::new(n);
        for &(u, w) in edges {
            g.add_edge(u, w)?;
        }
        Ok(g)
    }

    pub fn add_edge(&mut self, u: usize, w: usize) -> Result<usize, GenError> {
        if u == w {
            return Err(GenError::BadGraph(format!("self-loop at {u}")));
        }
        if u >= self.n || w >= self.n {
            return Err(GenError::BadGraph(format!("edge {u}-{w} out of range")));
        }
        let e = (u.min(w), u.max(w));
        if self.edges.contains(&e) {
            return Err(GenError::BadGraph(format!("duplicate edge {u}-{w}")));
        }
        self.edges.push(e);
        Ok(self.edges.len() - 1)
    }

    pub fn num_vertices(&self) -> usize {
        self.n
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn degree(&self, v: usize) -> usize {
        self.edges.iter().filter(|&&(a, b)| a == v || b == v).count()
    }

    /// Incident edge indices of each vertex, ascending.
    pub fn incidence(&self) -> Vec<Vec<usize>> {
        let mut inc = vec![Vec::new(); self.n];
        for (e, &(u, w)) in self.edges.iter().enumerate() {
            inc[u].push(e);
            inc[w].push(e);
        }
        inc
    }

    /// Neighbours of each vertex with the connecting edge index.
    pub fn adjacency(&self) -> Vec<Vec<(usize, usize)>> {
        let mut adj = vec![Vec::new(); self.n];
        for (e, &(u, w)) in self.edges.iter().enumerate() {
            adj[u].push((w, e));
            adj[w].push((u, e));
        }
        adj
    }

    /// Edge index of `{u,w}`.
    pub fn edge_index(&self, u: usize, w: usize) -> Option<usize> {
        let e = (u.min(w), u.max(w));
        self.edges.iter().position(|&x| x == e)
    }

    /// Graph file text: `v <count>`, `e <u> <w>` lines, then `g <v> 1` for
    /// each charged vertex.
    pub fn to_text(&self, charge: Option<&[bool]>) -> String {
        let mut s = format!("v {}\n", self.n);
        for &(u, w) in &self.edges {
            s.push_str(&format!("e {u} {w}\n"));
        }
        if let Some(ch) = charge {
            for (v, &b) in ch.iter().enumerate() {
                if b {
                    s.push_str(&format!("g {v} 1\n"));
                }
            }
        }
        s
    }

    /// Parses the graph file format. Returns the graph and the charges, if
    /// any `g` lines were present.
    pub fn parse(text: &str) -> Result<(Graph, Option<Vec<bool>>), GenError> {
        let mut g: Option<Graph> = None;
        let mut charge: Option<Vec<bool>> = None;
        for (no, line) in text.lines().enumerate() {
            let t: Vec<&str> = line.split_whitespace().collect();
            if t.is_empty() || t[0].starts_with('#') || t[0] == "c" {
                continue;
            }
            let bad = |m: &str| GenError::BadGraph(format!("line {}: {m}", no + 1));
            let num = |s: &str| s.parse::<usize>().map_err(|_| bad("expected a number"));
            match (t[0], t.len()) {
                ("v", 2) => {
                    if g.is_some() {
                        return Err(bad("repeated vertex count"));
                    }
                    g = Some(Graph::new(num(t[1])?));
                }
                ("e", 3) => {
                    let gr = g.as_mut().ok_or_else(|| bad("edge before vertex count"))?;
                    gr.add_edge(num(t[1])?, num(t[2])?).map_err(|e| bad(&e.to_string()))?;
                }
                ("g", 3) => {
                    let gr = g.as_ref().ok_or_else(|| bad("charge before vertex count"))?;
                    let v = num(t[1])?;
                    if v >= gr.n {
                        return Err(bad("charged vertex out of range"));
                    }
                    let b = match t[2] {
                        "0" => false,
                        "1" => true,
                        _ => return Err(bad("charge must be 0 or 1")),
                    };
                    charge.get_or_insert_with(|| vec![false; gr.n])[v] = b;
                }
                _ => return Err(bad("unrecognised line")),
            }
        }
        let g = g.ok_or_else(|| GenError::BadGraph("missing `v` line".into()))?;
        Ok((g, charge))
    }
}

/// Charge 1 on vertex 0, 0 elsewhere.
pub fn default_charge(n: usize) -> Vec<bool> {
    (0..n).map(|v| v == 0).collect()
}

/// `a × b` grid graph; vertex `(r,c)` is `r·b + c`.
pub fn grid(a: usize, b: usize) -> Graph {
    let mut g = Graph::new(a * b);
    for r in 0..a {
        for c in 0..b {
            let v = r * b + c;
            if c + 1 < b {
                g.add_edge(v, v + 1).unwrap();
            }
            if r + 1 < a {
                g.add_edge(v, v + b).unwrap();
            }
        }
    }
    g
}

/// Wheel with hub 0 and rim `1..=n`.
pub fn wheel(n: usize) -> Graph {
    assert!(n >= 3, "wheel needs a rim of at least 3 vertices");
    let mut g = Graph::new(n + 1);
    for i in 1..=n {
        g.add_edge(0, i).unwrap();
    }
    for i in 1..=n {
        g.add_edge(i, i % n + 1).unwrap();
    }
    g
}

pub fn complete(n: usize) -> Graph {
    let mut g = Graph::new(n);
    for u in 0..n {
        for w in u + 1..n {
            g.add_edge(u, w).unwrap();
        }
    }
    g
}

/// Uniform-ish random `d`-regular simple graph via the pairing model with
/// rejection; deterministic in `seed`.
pub fn random_regular(n: usize, d: usize, seed: u64) -> Result<Graph, GenError> {
    if (n * d) % 2 == 1 || d >= n.max(1) {
        return Err(GenError::Infeasible { n, d });
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut points: Vec<usize> = (0..n).flat_map(|v| std::iter::repeat_n(v, d)).collect();
    'attempt: for _ in 0..10_000 {
        points.shuffle(&mut rng);
        let mut g = Graph::new(n);
        for pair in points.chunks(2) {
            if g.add_edge(pair[0], pair[1]).is_err() {
                continue 'attempt;
            }
        }
        return Ok(g);
    }
    Err(GenError::Infeasible { n, d })
}

/// Tseitin formula: for each vertex, clauses forbidding every assignment to
/// its incident edges whose parity differs from the vertex charge.
pub fn gen_tseitin(g: &Graph, charge: &[bool]) -> Result<Formula, GenError> {
    if charge.len() != g.num_vertices() {
        return Err(GenError::BadGraph("charge vector length differs from vertex count".into()));
    }
    if charge.iter().filter(|&&b| b).count() % 2 == 0 {
        return Err(GenError::EvenCharge);
    }
    let mut f = Formula::new(g.edges().len() as Var);
    for (v, inc) in g.incidence().iter().enumerate() {
        for c in tseitin_vertex_clauses(inc, charge[v]) {
            f.push(c);
        }
    }
    Ok(f)
}

/// Parity constraint `⊕ x_e = charge` over the edges `inc` (edge `e` is variable `e+1`).
pub fn tseitin_vertex_clauses(inc: &[usize], charge: bool) -> Vec<Clause> {
    let d = inc.len();
    let mut out = Vec::new();
    for bits in 0usize..1 << d {
        // bits is a forbidden assignment when its parity is wrong
        if ((bits.count_ones() & 1) == 1) != charge {
            out.push(cl(inc.iter().enumerate().map(|(k, &e)| !bit_lit(e as Var + 1, bits, k))));
        }
    }
    out
}

/// `{y ∨ x₁ ∨ … ∨ xₘ, y}` with `y = offset`, `x_i = offset + i`.
pub fn gen_xm(m: usize, offset: Var) -> Formula {
    assert!(m >= 1 && offset >= 1);
    let mut g = Formula::new(offset + m as Var);
    g.push(cl((0..=m as Var).map(|i| Lit::pos(offset + i))));
    g.push(Clause::unit(Lit::pos(offset)));
    g
}

/// Variable groups introduced by a gadget, recorded so the matching undo
/// builder can find them.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "gadget", rename_all = "lowercase")]
pub enum GadgetMeta {
    /// `group[0]` is the original variable.
    Or { group: Vec<Var> },
    Xor { group: Vec<Var> },
    /// `zs[0]` is the original variable.
    Lift { ys: Vec<Var>, zs: Vec<Var> },
}

impl GadgetMeta {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("serializable")
    }

    pub fn from_json(s: &str) -> Result<GadgetMeta, GenError> {
        serde_json::from_str(s).map_err(|e| GenError::BadGraph(format!("gadget metadata: {e}")))
    }
}

impl fmt::Display for GadgetMeta {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GadgetMeta::Or { group } => write!(f, "or{group:?}"),
            GadgetMeta::Xor { group } => write!(f, "xor{group:?}"),
            GadgetMeta::Lift { ys, zs } => write!(f, "lift y={ys:?} z={zs:?}"),
        }
    }
}

fn check_occurs(g: &Formula, x: Var) -> Result<(), GenError> {
    if g.live().any(|c| c.mentions(x)) {
        Ok(())
    } else {
        Err(GenError::VarAbsent(x))
    }
}

fn fresh_block(g: &Formula, count: usize) -> Vec<Var> {
    let base = g.num_vars().max(g.vars().last().copied().unwrap_or(0));
    (1..=count as Var).map(|i| base + i).collect()
}

/// Rewrites every live clause mentioning `x` by `f(sign of x, rest)`.
fn replace_var<F: Fn(bool, &Clause) -> Vec<Clause>>(g: &Formula, x: Var, num_vars: Var, f: F) -> Formula {
    let mut out = Formula::new(num_vars);
    for c in g.live() {
        match c.lit_of(x) {
            None => {
                out.push(c.clone());
            }
            Some(l) => {
                for d in f(l.is_pos(), &c.without(l)) {
                    out.push(d);
                }
            }
        }
    }
    out
}

/// m-fold orification of `x`; `x` itself becomes `x₁`.
pub fn orify(g: &Formula, x: Var, m: usize) -> Result<(Formula, GadgetMeta), GenError> {
    check_occurs(g, x)?;
    if m < 1 {
        return Err(GenError::BadRange("orify needs m ≥ 1".into()));
    }
    let mut group = vec![x];
    group.extend(fresh_block(g, m - 1));
    let nv = *group.iter().max().unwrap();
    let nv = nv.max(g.num_vars());
    let out = replace_var(g, x, nv, |pos, rest| {
        if pos {
            vec![rest.or(&cl(group.iter().map(|&v| Lit::pos(v)))).unwrap()]
        } else {
            group.iter().map(|&v| rest.with(Lit::neg(v)).unwrap()).collect()
        }
    });
    Ok((out, GadgetMeta::Or { group }))
}

/// m-fold xorification of `x`; `x` itself becomes `x₁`.
pub fn xorify(g: &Formula, x: Var, m: usize) -> Result<(Formula, GadgetMeta), GenError> {
    check_occurs(g, x)?;
    if m < 1 {
        return Err(GenError::BadRange("xorify needs m ≥ 1".into()));
    }
    let mut group = vec![x];
    group.extend(fresh_block(g, m - 1));
    let nv = (*group.iter().max().unwrap()).max(g.num_vars());
    let out = replace_var(g, x, nv, |pos, rest| {
        // x ∨ C forbids even patterns, ¬x ∨ C forbids odd ones
        (0usize..1 << m)
            .filter(|bits| ((bits.count_ones() & 1) == 1) != pos)
            .map(|bits| rest.or(&cl(group.iter().enumerate().map(|(k, &v)| !bit_lit(v, bits, k)))).unwrap())
            .collect()
    });
    Ok((out, GadgetMeta::Xor { group }))
}

/// Index gadget on `x` with `ℓ` selector bits `y₁..y_ℓ` and `2^ℓ` data
/// variables `z_0..`; `x` itself becomes `z_0`. Bit `j` of the index is `y_{j+1}`.
pub fn lift_index(g: &Formula, x: Var, l: usize) -> Result<(Formula, GadgetMeta), GenError> {
    check_occurs(g, x)?;
    if l < 1 {
        return Err(GenError::BadRange("lift needs ℓ ≥ 1".into()));
    }
    let fresh = fresh_block(g, l + (1 << l) - 1);
    let ys: Vec<Var> = fresh[..l].to_vec();
    let mut zs = vec![x];
    zs.extend_from_slice(&fresh[l..]);
    let nv = fresh.last().copied().unwrap_or(0).max(g.num_vars());
    let out = replace_var(g, x, nv, |pos, rest| {
        (0..1usize << l)
            .map(|i| {
                let sel = index_mismatch(&ys, i);
                rest.or(&sel).unwrap().with(Lit::with_value(zs[i], pos)).unwrap()
            })
            .collect()
    });
    Ok((out, GadgetMeta::Lift { ys, zs }))
}

/// `(y ↛ i)`: the selector bits do not spell `i`.
pub fn index_mismatch(ys: &[Var], i: usize) -> Clause {
    cl(ys.iter().enumerate().map(|(b, &y)| !bit_lit(y, i, b)))
}

/// `(y → i)` as literals.
pub fn index_match(ys: &[Var], i: usize) -> Vec<Lit> {
    ys.iter().enumerate().map(|(b, &y)| bit_lit(y, i, b)).collect()
}
