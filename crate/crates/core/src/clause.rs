use std::cmp::Ordering;
use std::fmt;

use serde::{Deserialize, Serialize};

/// Variable identifier. Variables are numbered from 1.
pub type Var = u32;

/// A literal, stored as a nonzero signed integer in DIMACS style.
#[derive(Copy, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Lit(i32);

impl Lit {
    /// Panics on zero.
    #[inline]
    pub fn new(code: i32) -> Lit {
        assert!(code != 0, "literal 0 is reserved");
        Lit(code)
    }

    #[inline]
    pub fn pos(v: Var) -> Lit {
        debug_assert!(v > 0);
        Lit(v as i32)
    }

    #[inline]
    pub fn neg(v: Var) -> Lit {
        debug_assert!(v > 0);
        Lit(-(v as i32))
    }

    /// Literal of `v` that is true when `v` takes `value`.
    #[inline]
    pub fn with_value(v: Var, value: bool) -> Lit {
        if value {
            Lit::pos(v)
        } else {
            Lit::neg(v)
        }
    }

    #[inline]
    pub fn var(self) -> Var {
        self.0.unsigned_abs()
    }

    #[inline]
    pub fn is_pos(self) -> bool {
        self.0 > 0
    }

    #[inline]
    pub fn to_i32(self) -> i32 {
        self.0
    }

    /// Dense index: `2v` for the positive literal, `2v+1` for the negative one.
    #[inline]
    pub fn index(self) -> usize {
        ((self.var() as usize) << 1) | (self.0 < 0) as usize
    }
}

impl std::ops::Not for Lit {
    type Output = Lit;
    #[inline]
    fn not(self) -> Lit {
        Lit(-self.0)
    }
}

impl Ord for Lit {
    fn cmp(&self, other: &Lit) -> Ordering {
        self.var()
            .cmp(&other.var())
            .then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for Lit {
    fn partial_cmp(&self, other: &Lit) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Debug for Lit {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl fmt::Display for Lit {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("clause contains both {0} and its negation")]
pub struct Tautology(pub Lit);

/// A non-tautological set of literals, sorted by variable then sign.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default, Serialize, Deserialize)]
pub struct Clause(Vec<Lit>);

impl Clause {
    pub fn empty() -> Clause {
        Clause(Vec::new())
    }

    /// Builds a clause, merging duplicates. Fails on complementary literals.
    pub fn new<I: IntoIterator<Item = Lit>>(lits: I) -> Result<Clause, Tautology> {
        let mut v: Vec<Lit> = lits.into_iter().collect();
        v.sort_unstable();
        v.dedup();
        for w in v.windows(2) {
            if w[0].var() == w[1].var() {
                return Err(Tautology(w[1]));
            }
        }
        Ok(Clause(v))
    }

    /// Like [`Clause::new`], returning `None` for tautologies.
    pub fn try_from_lits<I: IntoIterator<Item = Lit>>(lits: I) -> Option<Clause> {
        Clause::new(lits).ok()
    }

    /// Convenience constructor from DIMACS integers. Panics on tautologies.
    pub fn from_i32s(lits: &[i32]) -> Clause {
        Clause::new(lits.iter().map(|&l| Lit::new(l))).expect("tautological clause")
    }

    /// Caller guarantees the literals are sorted, distinct, and non-complementary.
    pub(crate) fn from_sorted_unchecked(v: Vec<Lit>) -> Clause {
        debug_assert!(v.windows(2).all(|w| w[0].var() < w[1].var()));
        Clause(v)
    }

    pub fn unit(l: Lit) -> Clause {
        Clause(vec![l])
    }

    #[inline]
    pub fn lits(&self) -> &[Lit] {
        &self.0
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.0.len()
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn contains(&self, l: Lit) -> bool {
        self.0.binary_search(&l).is_ok()
    }

    /// The literal of `v` in this clause, if any.
    pub fn lit_of(&self, v: Var) -> Option<Lit> {
        let i = self.0.partition_point(|l| l.var() < v);
        self.0.get(i).copied().filter(|l| l.var() == v)
    }

    pub fn mentions(&self, v: Var) -> bool {
        self.lit_of(v).is_some()
    }

    pub fn vars(&self) -> impl Iterator<Item = Var> + '_ {
        self.0.iter().map(|l| l.var())
    }

    pub fn max_var(&self) -> Var {
        self.0.last().map_or(0, |l| l.var())
    }

    /// `self ∨ other`, or `None` if the union is tautological.
    pub fn or(&self, other: &Clause) -> Option<Clause> {
        let (a, b) = (&self.0, &other.0);
        let mut out = Vec::with_capacity(a.len() + b.len());
        let (mut i, mut j) = (0, 0);
        while i < a.len() && j < b.len() {
            let (x, y) = (a[i], b[j]);
            match x.var().cmp(&y.var()) {
                Ordering::Less => {
                    out.push(x);
                    i += 1;
                }
                Ordering::Greater => {
                    out.push(y);
                    j += 1;
                }
                Ordering::Equal => {
                    if x != y {
                        return None;
                    }
                    out.push(x);
                    i += 1;
                    j += 1;
                }
            }
        }
        out.extend_from_slice(&a[i..]);
        out.extend_from_slice(&b[j..]);
        Some(Clause(out))
    }

    /// `self ∨ l`, or `None` if `¬l` is in the clause.
    pub fn with(&self, l: Lit) -> Option<Clause> {
        self.or(&Clause::unit(l))
    }

    /// The clause with `l` removed (no-op if absent).
    pub fn without(&self, l: Lit) -> Clause {
        Clause(self.0.iter().copied().filter(|&x| x != l).collect())
    }

    /// Resolvent on `pivot` (which must be in `self`, with `¬pivot` in `other`).
    /// `None` if the resolvent is tautological.
    pub fn resolve(&self, other: &Clause, pivot: Lit) -> Option<Clause> {
        debug_assert!(self.contains(pivot) && other.contains(!pivot));
        self.without(pivot).or(&other.without(!pivot))
    }

    pub fn is_subset_of(&self, other: &Clause) -> bool {
        let mut j = 0;
        let b = &other.0;
        for &x in &self.0 {
            while j < b.len() && b[j] < x {
                j += 1;
            }
            if j == b.len() || b[j] != x {
                return false;
            }
            j += 1;
        }
        true
    }

    pub fn to_i32s(&self) -> Vec<i32> {
        self.0.iter().map(|l| l.to_i32()).collect()
    }
}

impl fmt::Debug for Clause {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return write!(f, "⊥");
        }
        write!(f, "(")?;
        for (i, l) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, " ")?;
            }
            write!(f, "{}", l)?;
        }
        write!(f, ")")
    }
}

impl fmt::Display for Clause {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}
