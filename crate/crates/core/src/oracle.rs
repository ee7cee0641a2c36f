//! Brute-force semantics for small formulas: truth tables and a DPLL tree
//! that emits resolution refutations.

use std::collections::BTreeMap;

use crate::clause::{Clause, Lit, Var};
use crate::formula::Formula;
use crate::par;

/// Largest number of distinct variables the truth-table routines accept.
pub const MAX_VARS: usize = 24;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("{0} variables exceed the truth-table limit of {MAX_VARS}")]
pub struct TooManyVars(pub usize);

struct Compact {
    clauses: Vec<Vec<(usize, bool)>>,
    n: usize,
}

fn compact<'a, I: IntoIterator<Item = &'a Clause>>(cs: I) -> Result<Compact, TooManyVars> {
    let cs: Vec<&Clause> = cs.into_iter().collect();
    let mut ids: BTreeMap<Var, usize> = BTreeMap::new();
    for c in &cs {
        for v in c.vars() {
            let k = ids.len();
            ids.entry(v).or_insert(k);
        }
    }
    if ids.len() > MAX_VARS {
        return Err(TooManyVars(ids.len()));
    }
    let clauses = cs
        .iter()
        .map(|c| c.lits().iter().map(|l| (ids[&l.var()], l.is_pos())).collect())
        .collect();
    Ok(Compact { clauses, n: ids.len() })
}

const PATTERNS: [u64; 6] = [
    0xAAAA_AAAA_AAAA_AAAA,
    0xCCCC_CCCC_CCCC_CCCC,
    0xF0F0_F0F0_F0F0_F0F0,
    0xFF00_FF00_FF00_FF00,
    0xFFFF_0000_FFFF_0000,
    0xFFFF_FFFF_0000_0000,
];

impl Compact {
    /// Bitmask of satisfying assignments within block `b` of 64 assignments.
    fn block(&self, b: u64) -> u64 {
        let valid = if self.n >= 6 { !0 } else { (1u64 << (1 << self.n)) - 1 };
        let mut acc = valid;
        for c in &self.clauses {
            let mut m = 0u64;
            for &(v, pos) in c {
                let bits = if v < 6 {
                    PATTERNS[v]
                } else if (b >> (v - 6)) & 1 == 1 {
                    !0
                } else {
                    0
                };
                m |= if pos { bits } else { !bits };
            }
            acc &= m;
            if acc == 0 {
                break;
            }
        }
        acc
    }

    fn count_blocks(&self) -> u64 {
        if self.n <= 6 {
            1
        } else {
            1u64 << (self.n - 6)
        }
    }

    fn satisfiable(&self) -> bool {
        let blocks = self.count_blocks();
        if blocks <= 64 {
            return (0..blocks).any(|b| self.block(b) != 0);
        }
        let chunks = par::map_range(64, |k| {
            let per = blocks / 64;
            (k as u64 * per..(k as u64 + 1) * per).any(|b| self.block(b) != 0)
        });
        chunks.into_iter().any(|x| x)
    }

    fn count(&self) -> u64 {
        (0..self.count_blocks()).map(|b| self.block(b).count_ones() as u64).sum()
    }
}

pub fn is_satisfiable(g: &Formula) -> Result<bool, TooManyVars> {
    Ok(compact(g.live())?.satisfiable())
}

pub fn clauses_satisfiable(cs: &[Clause]) -> Result<bool, TooManyVars> {
    Ok(compact(cs.iter())?.satisfiable())
}

/// Number of models over the variables occurring in `g`.
pub fn count_models(g: &Formula) -> Result<u64, TooManyVars> {
    Ok(compact(g.live())?.count())
}

/// `g ⊨ c`.
pub fn implies(g: &Formula, c: &Clause) -> Result<bool, TooManyVars> {
    let mut cs: Vec<Clause> = g.live_clauses();
    cs.extend(c.lits().iter().map(|&l| Clause::unit(!l)));
    Ok(!clauses_satisfiable(&cs)?)
}

pub fn equisatisfiable(a: &Formula, b: &Formula) -> Result<bool, TooManyVars> {
    Ok(is_satisfiable(a)? == is_satisfiable(b)?)
}

/// A model of `g`, if one exists.
pub fn find_model(g: &Formula) -> Result<Option<Vec<Lit>>, TooManyVars> {
    let cs: Vec<&Clause> = g.live().collect();
    let mut vars: Vec<Var> = cs.iter().flat_map(|c| c.vars()).collect();
    vars.sort_unstable();
    vars.dedup();
    let cp = compact(cs.iter().copied())?;
    for b in 0..cp.count_blocks() {
        let m = cp.block(b);
        if m != 0 {
            let bit = m.trailing_zeros() as u64;
            let idx = (b << 6) | bit;
            // compact() numbers variables in order of first occurrence
            let mut order: Vec<Var> = Vec::new();
            for c in &cs {
                for v in c.vars() {
                    if !order.contains(&v) {
                        order.push(v);
                    }
                }
            }
            return Ok(Some(
                order
                    .iter()
                    .enumerate()
                    .map(|(k, &v)| Lit::with_value(v, (idx >> k) & 1 == 1))
                    .collect(),
            ));
        }
    }
    Ok(None)
}

/// Resolution refutation found by a DPLL tree search: the derived clauses in
/// order, each a resolvent of two earlier clauses (initial or derived), ending
/// with ⊥. `None` if `g` is satisfiable.
pub fn resolution_refutation(g: &Formula) -> Option<Vec<Clause>> {
    let cs: Vec<Clause> = g.live_clauses();
    if cs.iter().any(|c| c.is_empty()) {
        return Some(vec![]);
    }
    let mut vars: Vec<Var> = cs.iter().flat_map(|c| c.vars()).collect();
    vars.sort_unstable();
    vars.dedup();
    let mut out = Vec::new();
    let mut rho: BTreeMap<Var, bool> = BTreeMap::new();
    let c = dpll(&cs, &vars, &mut rho, &mut out)?;
    debug_assert!(c.is_empty());
    Some(out)
}

fn falsified(c: &Clause, rho: &BTreeMap<Var, bool>) -> bool {
    c.lits().iter().all(|l| rho.get(&l.var()) == Some(&!l.is_pos()))
}

fn dpll(cs: &[Clause], vars: &[Var], rho: &mut BTreeMap<Var, bool>, out: &mut Vec<Clause>) -> Option<Clause> {
    if let Some(c) = cs.iter().chain(out.iter()).find(|c| falsified(c, rho)) {
        return Some(c.clone());
    }
    let &x = vars.iter().find(|v| !rho.contains_key(v))?;
    rho.insert(x, true);
    let c1 = dpll(cs, vars, rho, out);
    rho.remove(&x);
    let c1 = c1?;
    if !c1.contains(Lit::neg(x)) {
        return Some(c1);
    }
    rho.insert(x, false);
    let c2 = dpll(cs, vars, rho, out);
    rho.remove(&x);
    let c2 = c2?;
    if !c2.contains(Lit::pos(x)) {
        return Some(c2);
    }
    let r = c2.resolve(&c1, Lit::pos(x)).expect("clauses falsified by one assignment");
    if !out.contains(&r) && !cs.contains(&r) {
        out.push(r.clone());
    }
    Some(r)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn f(cs: &[&[i32]]) -> Formula {
        Formula::from_clauses(cs.iter().map(|c| Clause::from_i32s(c)))
    }

    #[test]
    fn small_truth_tables() {
        assert!(!is_satisfiable(&f(&[&[1], &[-1]])).unwrap());
        assert!(is_satisfiable(&f(&[&[1, 2]])).unwrap());
        assert_eq!(count_models(&f(&[&[1, 2]])).unwrap(), 3);
        assert!(is_satisfiable(&Formula::new(0)).unwrap());
        assert!(!is_satisfiable(&f(&[&[]])).unwrap());
        let all4 = f(&[&[1, 2], &[-1, 2], &[1, -2], &[-1, -2]]);
        assert!(!is_satisfiable(&all4).unwrap());
        assert!(implies(&f(&[&[1, 2], &[-1, 2]]), &Clause::from_i32s(&[2])).unwrap());
    }

    #[test]
    fn wide_truth_tables() {
        // x1..x8 all true, plus a clause forcing one false.
        let mut cs: Vec<Vec<i32>> = (1..=8).map(|v| vec![v]).collect();
        cs.push((1..=8).map(|v| -v).collect());
        let g = Formula::from_clauses(cs.iter().map(|c| Clause::from_i32s(c)));
        assert!(!is_satisfiable(&g).unwrap());
        cs.pop();
        let g = Formula::from_clauses(cs.iter().map(|c| Clause::from_i32s(c)));
        assert_eq!(count_models(&g).unwrap(), 1);
        assert!(find_model(&g).unwrap().unwrap().iter().all(|l| l.is_pos()));
    }

    #[test]
    fn dpll_refutation_is_resolution() {
        let all4 = f(&[&[1, 2], &[-1, 2], &[1, -2], &[-1, -2]]);
        let r = resolution_refutation(&all4).unwrap();
        assert_eq!(r.last(), Some(&Clause::empty()));
        assert!(resolution_refutation(&f(&[&[1, 2]])).is_none());
    }
}
