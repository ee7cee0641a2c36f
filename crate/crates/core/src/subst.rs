use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::clause::{Clause, Lit, Var};
use crate::formula::Formula;

/// Image of a variable or literal under a substitution.
#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Image {
    Lit(Lit),
    Const(bool),
}

impl Image {
    pub fn negate(self) -> Image {
        match self {
            Image::Lit(l) => Image::Lit(!l),
            Image::Const(b) => Image::Const(!b),
        }
    }
}

/// Anything that can be applied to variables: assignments and substitutions.
pub trait Apply {
    /// `None` means the variable is left unchanged.
    fn image(&self, v: Var) -> Option<Image>;

    fn apply_lit(&self, l: Lit) -> Image {
        match self.image(l.var()) {
            None => Image::Lit(l),
            Some(img) if l.is_pos() => img,
            Some(img) => img.negate(),
        }
    }

    /// Variables moved by the map.
    fn domain(&self) -> Vec<Var>;
}

/// A finite map from variables to truth values.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct PartialAssignment(BTreeMap<Var, bool>);

impl PartialAssignment {
    pub fn new() -> PartialAssignment {
        PartialAssignment(BTreeMap::new())
    }

    pub fn from_pairs<I: IntoIterator<Item = (Var, bool)>>(pairs: I) -> PartialAssignment {
        PartialAssignment(pairs.into_iter().collect())
    }

    /// The assignment making every given literal true. Later literals win.
    pub fn from_lits<I: IntoIterator<Item = Lit>>(lits: I) -> PartialAssignment {
        PartialAssignment(lits.into_iter().map(|l| (l.var(), l.is_pos())).collect())
    }

    pub fn set(&mut self, v: Var, b: bool) {
        self.0.insert(v, b);
    }

    pub fn unset(&mut self, v: Var) {
        self.0.remove(&v);
    }

    pub fn get(&self, v: Var) -> Option<bool> {
        self.0.get(&v).copied()
    }

    /// Value of a literal, if its variable is assigned.
    pub fn value(&self, l: Lit) -> Option<bool> {
        self.get(l.var()).map(|b| b == l.is_pos())
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn contains(&self, v: Var) -> bool {
        self.0.contains_key(&v)
    }

    pub fn iter(&self) -> impl Iterator<Item = (Var, bool)> + '_ {
        self.0.iter().map(|(&v, &b)| (v, b))
    }

    pub fn vars(&self) -> impl Iterator<Item = Var> + '_ {
        self.0.keys().copied()
    }

    /// Literals made true by the assignment.
    pub fn true_lits(&self) -> Vec<Lit> {
        self.iter().map(|(v, b)| Lit::with_value(v, b)).collect()
    }

    pub fn satisfies(&self, c: &Clause) -> bool {
        c.lits().iter().any(|&l| self.value(l) == Some(true))
    }

    pub fn falsifies(&self, c: &Clause) -> bool {
        c.lits().iter().all(|&l| self.value(l) == Some(false))
    }

    /// The clause false exactly under this assignment.
    pub fn negation(&self) -> Clause {
        Clause::from_sorted_unchecked(self.iter().map(|(v, b)| Lit::with_value(v, !b)).collect())
    }

    /// Some shared variable is assigned differently.
    pub fn contradicts(&self, other: &PartialAssignment) -> bool {
        self.iter().any(|(v, b)| other.get(v) == Some(!b))
    }

    pub fn disjoint(&self, other: &PartialAssignment) -> bool {
        self.vars().all(|v| !other.contains(v))
    }

    /// Same value on every variable of `vars` assigned by either side.
    pub fn agrees_on<I: IntoIterator<Item = Var>>(&self, other: &PartialAssignment, vars: I) -> bool {
        vars.into_iter().all(|v| self.get(v) == other.get(v))
    }

    pub fn same_domain(&self, other: &PartialAssignment) -> bool {
        self.0.len() == other.0.len() && self.vars().zip(other.vars()).all(|(a, b)| a == b)
    }

    /// `self ∘ p`: `p` decides on its domain, `self` elsewhere.
    pub fn compose(&self, p: &PartialAssignment) -> PartialAssignment {
        let mut out = self.0.clone();
        for (v, b) in p.iter() {
            out.insert(v, b);
        }
        PartialAssignment(out)
    }

    pub fn to_subst(&self) -> Substitution {
        Substitution(self.iter().map(|(v, b)| (v, Image::Const(b))).collect())
    }

    pub fn max_var(&self) -> Var {
        self.0.keys().next_back().copied().unwrap_or(0)
    }
}

impl Apply for PartialAssignment {
    fn image(&self, v: Var) -> Option<Image> {
        self.get(v).map(Image::Const)
    }

    fn domain(&self) -> Vec<Var> {
        self.vars().collect()
    }
}

/// A map from variables to literals or constants. Identity entries are not stored.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Substitution(BTreeMap<Var, Image>);

impl Substitution {
    pub fn identity() -> Substitution {
        Substitution(BTreeMap::new())
    }

    pub fn from_pairs<I: IntoIterator<Item = (Var, Image)>>(pairs: I) -> Substitution {
        let mut s = Substitution::identity();
        for (v, img) in pairs {
            s.set(v, img);
        }
        s
    }

    pub fn set(&mut self, v: Var, img: Image) {
        if img == Image::Lit(Lit::pos(v)) {
            self.0.remove(&v);
        } else {
            self.0.insert(v, img);
        }
    }

    pub fn get(&self, v: Var) -> Option<Image> {
        self.0.get(&v).copied()
    }

    pub fn iter(&self) -> impl Iterator<Item = (Var, Image)> + '_ {
        self.0.iter().map(|(&v, &i)| (v, i))
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// The assignment this substitution equals, if every image is a constant.
    pub fn as_assignment(&self) -> Option<PartialAssignment> {
        self.iter()
            .map(|(v, img)| match img {
                Image::Const(b) => Some((v, b)),
                Image::Lit(_) => None,
            })
            .collect::<Option<Vec<_>>>()
            .map(PartialAssignment::from_pairs)
    }

    /// Variables mentioned in the domain or in any image.
    pub fn mentioned_vars(&self) -> Vec<Var> {
        let mut v: Vec<Var> = self
            .iter()
            .flat_map(|(x, img)| {
                let extra = match img {
                    Image::Lit(l) => Some(l.var()),
                    Image::Const(_) => None,
                };
                std::iter::once(x).chain(extra)
            })
            .collect();
        v.sort_unstable();
        v.dedup();
        v
    }

    pub fn satisfies(&self, c: &Clause) -> bool {
        matches!(restrict_clause(c, self), Restricted::Satisfied)
    }
}

impl Apply for Substitution {
    fn image(&self, v: Var) -> Option<Image> {
        self.get(v)
    }

    fn domain(&self) -> Vec<Var> {
        self.0.keys().copied().collect()
    }
}

/// Result of restricting a clause.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Restricted {
    Satisfied,
    Clause(Clause),
}

/// `C↾σ`: `Satisfied` if some literal maps to 1 or the image is tautological,
/// otherwise the image with falsified literals removed.
pub fn restrict_clause<A: Apply + ?Sized>(c: &Clause, s: &A) -> Restricted {
    let mut out = Vec::with_capacity(c.len());
    for &l in c.lits() {
        match s.apply_lit(l) {
            Image::Const(true) => return Restricted::Satisfied,
            Image::Const(false) => {}
            Image::Lit(m) => out.push(m),
        }
    }
    match Clause::new(out) {
        Ok(c) => Restricted::Clause(c),
        Err(_) => Restricted::Satisfied,
    }
}

/// `Γ↾σ` over the live clauses; duplicates are kept.
pub fn restrict_formula<A: Apply + ?Sized>(g: &Formula, s: &A) -> Formula {
    let mut out = Formula::new(g.num_vars());
    for c in g.live() {
        if let Restricted::Clause(d) = restrict_clause(c, s) {
            out.push(d);
        }
    }
    out
}

/// The assignment `¬C` falsifying every literal of `c`.
pub fn negate_clause(c: &Clause) -> PartialAssignment {
    PartialAssignment::from_lits(c.lits().iter().map(|&l| !l))
}

/// The clause `¬α` expressing that `a` does not hold.
pub fn clause_of(a: &PartialAssignment) -> Clause {
    a.negation()
}

/// `(t∘p)(x) = t(p(x))`.
pub fn compose<T: Apply + ?Sized, P: Apply + ?Sized>(t: &T, p: &P) -> Substitution {
    let mut out = Substitution::identity();
    for v in t.domain() {
        out.set(v, t.image(v).expect("domain variable"));
    }
    for v in p.domain() {
        let img = match p.image(v).expect("domain variable") {
            Image::Lit(l) => t.apply_lit(l),
            c => c,
        };
        out.set(v, img);
    }
    out
}
