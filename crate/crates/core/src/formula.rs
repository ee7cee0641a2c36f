use std::collections::{BTreeSet, HashMap};

use crate::clause::{Clause, Var};

/// An ordered multiset of clauses. Deleted clauses stay in place with their
/// live flag cleared so that step indices remain stable.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Formula {
    entries: Vec<(Clause, bool)>,
    num_vars: Var,
}

impl Formula {
    pub fn new(num_vars: Var) -> Formula {
        Formula {
            entries: Vec::new(),
            num_vars,
        }
    }

    /// Universe is the largest variable mentioned.
    pub fn from_clauses<I: IntoIterator<Item = Clause>>(clauses: I) -> Formula {
        let mut f = Formula::new(0);
        for c in clauses {
            f.push(c);
        }
        f
    }

    pub fn with_num_vars(mut self, n: Var) -> Formula {
        self.num_vars = self.num_vars.max(n);
        self
    }

    /// Declared variable universe (largest id).
    pub fn num_vars(&self) -> Var {
        self.num_vars
    }

    pub fn push(&mut self, c: Clause) -> usize {
        self.num_vars = self.num_vars.max(c.max_var());
        self.entries.push((c, true));
        self.entries.len() - 1
    }

    /// Removes the most recently added live instance of `c`.
    pub fn delete(&mut self, c: &Clause) -> Option<usize> {
        let i = self
            .entries
            .iter()
            .rposition(|(d, live)| *live && d == c)?;
        self.entries[i].1 = false;
        Some(i)
    }

    pub fn kill(&mut self, idx: usize) {
        self.entries[idx].1 = false;
    }

    pub fn entries(&self) -> &[(Clause, bool)] {
        &self.entries
    }

    pub fn clause(&self, idx: usize) -> &Clause {
        &self.entries[idx].0
    }

    pub fn is_live(&self, idx: usize) -> bool {
        self.entries[idx].1
    }

    /// Total number of entries, deleted ones included.
    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn live(&self) -> impl Iterator<Item = &Clause> + '_ {
        self.entries.iter().filter(|e| e.1).map(|e| &e.0)
    }

    pub fn live_indexed(&self) -> impl Iterator<Item = (usize, &Clause)> + '_ {
        self.entries
            .iter()
            .enumerate()
            .filter(|(_, e)| e.1)
            .map(|(i, e)| (i, &e.0))
    }

    pub fn live_count(&self) -> usize {
        self.entries.iter().filter(|e| e.1).count()
    }

    pub fn live_clauses(&self) -> Vec<Clause> {
        self.live().cloned().collect()
    }

    pub fn contains_live(&self, c: &Clause) -> bool {
        self.live().any(|d| d == c)
    }

    pub fn has_empty(&self) -> bool {
        self.live().any(|c| c.is_empty())
    }

    /// Variables occurring in live clauses.
    pub fn vars(&self) -> BTreeSet<Var> {
        self.live().flat_map(|c| c.vars()).collect()
    }

    /// Live clauses as a set, for comparisons that ignore order and multiplicity.
    pub fn canonical(&self) -> BTreeSet<Clause> {
        self.live().cloned().collect()
    }

    /// Live clauses with multiplicities.
    pub fn multiset(&self) -> HashMap<Clause, usize> {
        let mut m = HashMap::new();
        for c in self.live() {
            *m.entry(c.clone()).or_insert(0) += 1;
        }
        m
    }

    /// Total literal count over live clauses.
    pub fn literal_count(&self) -> usize {
        self.live().map(|c| c.len()).sum()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn deletion_keeps_entries() {
        let mut f = Formula::from_clauses([Clause::from_i32s(&[1, 2]), Clause::from_i32s(&[-1])]);
        f.push(Clause::from_i32s(&[1, 2]));
        assert_eq!(f.delete(&Clause::from_i32s(&[1, 2])), Some(2));
        assert_eq!(f.len(), 3);
        assert_eq!(f.live_count(), 2);
        assert_eq!(f.delete(&Clause::from_i32s(&[3])), None);
        assert_eq!(f.num_vars(), 2);
    }
}
