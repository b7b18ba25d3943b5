//! Angluin's L* with an observation table and prefix-adding counterexample
//! processing.

use std::collections::HashMap;

use thiserror::Error;

use crate::automata::{Alphabet, Dfa};
use crate::oracle::{Derivation, Membership};

#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum LstarError {
    #[error("observation table is not closed and consistent")]
    TableNotClosed,
    #[error("membership oracle failed: {0}")]
    OracleFailure(String),
    #[error("membership of {word:?} changed from {cached} to {new}")]
    Conflict { word: String, cached: bool, new: bool },
    #[error("no hypothesis accepted within {0} equivalence queries")]
    RoundLimit(usize),
}

pub type MemberFn<'a> = dyn FnMut(&str) -> Result<bool, LstarError> + 'a;

/// Rows `S ∪ S·Σ`, columns `E`; cells are read from the membership cache.
#[derive(Debug, Clone)]
pub struct ObservationTable {
    alphabet: Alphabet,
    prefixes: Vec<String>,
    suffixes: Vec<String>,
    cache: HashMap<String, bool>,
    queries: usize,
}

impl ObservationTable {
    pub fn new(alphabet: Alphabet) -> Self {
        ObservationTable {
            alphabet,
            prefixes: vec![String::new()],
            suffixes: vec![String::new()],
            cache: HashMap::new(),
            queries: 0,
        }
    }

    pub fn prefixes(&self) -> &[String] {
        &self.prefixes
    }

    pub fn suffixes(&self) -> &[String] {
        &self.suffixes
    }

    /// Number of membership oracle calls so far (cache misses).
    pub fn membership_queries(&self) -> usize {
        self.queries
    }

    pub fn cached(&self, w: &str) -> Option<bool> {
        self.cache.get(w).copied()
    }

    /// Records an answer obtained outside the table. A different cached
    /// answer is a conflict and leaves the cache untouched.
    pub fn record(&mut self, w: &str, value: bool) -> Result<(), LstarError> {
        match self.cache.get(w) {
            Some(&old) if old != value => Err(LstarError::Conflict { word: w.to_string(), cached: old, new: value }),
            _ => {
                self.cache.insert(w.to_string(), value);
                Ok(())
            }
        }
    }

    fn query(&mut self, w: &str, mem: &mut MemberFn<'_>) -> Result<bool, LstarError> {
        if let Some(&v) = self.cache.get(w) {
            return Ok(v);
        }
        let v = mem(w)?;
        self.queries += 1;
        self.cache.insert(w.to_string(), v);
        Ok(v)
    }

    fn extensions(&self) -> Vec<String> {
        let mut out = Vec::new();
        for s in &self.prefixes {
            for &c in self.alphabet.symbols() {
                out.push(format!("{s}{c}"));
            }
        }
        out
    }

    fn fill(&mut self, mem: &mut MemberFn<'_>) -> Result<(), LstarError> {
        let rows: Vec<String> = self.prefixes.iter().cloned().chain(self.extensions()).collect();
        let suffixes = self.suffixes.clone();
        for u in &rows {
            for e in &suffixes {
                self.query(&format!("{u}{e}"), mem)?;
            }
        }
        Ok(())
    }

    /// Row of `u`; every cell must be filled.
    pub fn row(&self, u: &str) -> Vec<bool> {
        self.suffixes.iter().map(|e| self.cache[&format!("{u}{e}")]).collect()
    }

    fn unclosed(&self) -> Option<String> {
        let rows: Vec<Vec<bool>> = self.prefixes.iter().map(|s| self.row(s)).collect();
        self.extensions().into_iter().find(|x| !rows.contains(&self.row(x)))
    }

    fn inconsistency(&self) -> Option<String> {
        for (i, s1) in self.prefixes.iter().enumerate() {
            for s2 in &self.prefixes[i + 1..] {
                if self.row(s1) != self.row(s2) {
                    continue;
                }
                for &c in self.alphabet.symbols() {
                    for e in &self.suffixes {
                        if self.cache[&format!("{s1}{c}{e}")] != self.cache[&format!("{s2}{c}{e}")] {
                            return Some(format!("{c}{e}"));
                        }
                    }
                }
            }
        }
        None
    }

    pub fn is_closed_and_consistent(&self) -> bool {
        let filled = self
            .prefixes
            .iter()
            .cloned()
            .chain(self.extensions())
            .all(|u| self.suffixes.iter().all(|e| self.cache.contains_key(&format!("{u}{e}"))));
        filled && self.unclosed().is_none() && self.inconsistency().is_none()
    }

    /// Adds prefixes (closure) and suffixes (consistency) until both hold.
    pub fn close_and_make_consistent(&mut self, mem: &mut MemberFn<'_>) -> Result<(), LstarError> {
        loop {
            self.fill(mem)?;
            if let Some(x) = self.unclosed() {
                self.prefixes.push(x);
                continue;
            }
            if let Some(e) = self.inconsistency() {
                self.suffixes.push(e);
                continue;
            }
            return Ok(());
        }
    }

    /// States are the distinct rows of `S`, numbered by first occurrence.
    pub fn hypothesis(&self) -> Result<Dfa, LstarError> {
        if !self.is_closed_and_consistent() {
            return Err(LstarError::TableNotClosed);
        }
        let mut reps: Vec<Vec<bool>> = Vec::new();
        for s in &self.prefixes {
            let r = self.row(s);
            if !reps.contains(&r) {
                reps.push(r);
            }
        }
        let state_of = |r: &Vec<bool>| reps.iter().position(|x| x == r).unwrap();
        let rep_word: Vec<&String> =
            reps.iter().map(|r| self.prefixes.iter().find(|s| &self.row(s) == r).unwrap()).collect();
        let k = self.alphabet.len();
        let mut delta = vec![0; reps.len() * k];
        for (q, u) in rep_word.iter().enumerate() {
            for (a, &c) in self.alphabet.symbols().iter().enumerate() {
                delta[q * k + a] = state_of(&self.row(&format!("{u}{c}")));
            }
        }
        let accepting = reps.iter().map(|r| r[0]).collect();
        let initial = state_of(&self.row(""));
        Ok(Dfa::from_table(self.alphabet.clone(), initial, accepting, delta))
    }

    /// Adds every prefix of `cex` to `S`, then restores closure and
    /// consistency.
    pub fn process_counterexample(&mut self, cex: &str, mem: &mut MemberFn<'_>) -> Result<(), LstarError> {
        let chars: Vec<char> = cex.chars().collect();
        for i in 0..=chars.len() {
            let p: String = chars[..i].iter().collect();
            if !self.prefixes.contains(&p) {
                self.prefixes.push(p);
            }
        }
        self.close_and_make_consistent(mem)
    }
}

/// Outcome of turning an implication into a labelled word.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Resolution {
    /// `w_in` is reachable, hence so is `w_out`; carries the derivation of
    /// `w_in`.
    Positive(String, Option<Derivation>),
    Negative(String),
    Inconclusive,
}

/// Labels an implication `(w_in, w_out)`: `w_out` becomes positive when
/// `w_in` is known or shown to be reachable, otherwise `w_in` becomes
/// negative. `known_positive` short-cuts the reachability query.
pub fn resolve_implication(
    w_in: &str,
    w_out: &str,
    known_positive: bool,
    reach: &mut dyn FnMut(&str) -> Membership,
) -> Resolution {
    if known_positive {
        return Resolution::Positive(w_out.to_string(), None);
    }
    match reach(w_in) {
        Membership::Reachable(d) => Resolution::Positive(w_out.to_string(), Some(d)),
        Membership::Unreachable => Resolution::Negative(w_in.to_string()),
        Membership::Inconclusive => Resolution::Inconclusive,
    }
}

/// Plain L* against a membership oracle and an equivalence oracle that
/// returns a word the hypothesis misclassifies. Returns the final
/// hypothesis and the number of equivalence queries asked.
pub fn learn(
    alphabet: &Alphabet,
    mem: &mut MemberFn<'_>,
    equiv: &mut dyn FnMut(&Dfa) -> Option<String>,
    max_rounds: usize,
) -> Result<(Dfa, usize), LstarError> {
    let mut table = ObservationTable::new(alphabet.clone());
    table.close_and_make_consistent(mem)?;
    for round in 1..=max_rounds {
        let h = table.hypothesis()?;
        match equiv(&h) {
            None => return Ok((h, round)),
            Some(cex) => table.process_counterexample(&cex, mem)?,
        }
    }
    Err(LstarError::RoundLimit(max_rounds))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::automata::Equivalence;

    fn learn_exact(target: &Dfa) -> (Dfa, usize) {
        let t = target.clone();
        let mut mem = move |w: &str| Ok(t.accepts(w));
        let mut equiv = |h: &Dfa| match h.equivalent(target).unwrap() {
            Equivalence::Equal => None,
            Equivalence::Witness(w) => Some(w),
        };
        learn(target.alphabet(), &mut mem, &mut equiv, 100).unwrap()
    }

    #[test]
    fn contains_b() {
        let sigma = Alphabet::new("ab".chars());
        // q0 --b--> q1, q1 absorbing accepting.
        let target = Dfa::from_table(sigma, 0, vec![false, true], vec![0, 1, 1, 1]);
        let (h, eqs) = learn_exact(&target);
        assert_eq!(h.num_states(), 2);
        assert!(eqs <= 2);
        assert_eq!(h.minimize(), target.minimize());
    }

    #[test]
    fn universal_is_one_state() {
        let sigma = Alphabet::new("a".chars());
        let mut table = ObservationTable::new(sigma.clone());
        table.close_and_make_consistent(&mut |_| Ok(true)).unwrap();
        let h = table.hypothesis().unwrap();
        assert_eq!(h.num_states(), 1);
        assert!(h.accepts("aaa"));
    }

    #[test]
    fn counterexample_adds_all_prefixes() {
        let sigma = Alphabet::new("ab".chars());
        let mut table = ObservationTable::new(sigma);
        let mut mem = |w: &str| Ok(!w.contains('b'));
        table.close_and_make_consistent(&mut mem).unwrap();
        let before = table.prefixes().len();
        table.process_counterexample("abab", &mut mem).unwrap();
        for p in ["a", "ab", "aba", "abab"] {
            assert!(table.prefixes().iter().any(|s| s == p));
        }
        assert!(table.prefixes().len() >= before + 3);
    }

    #[test]
    fn record_detects_conflicts() {
        let mut table = ObservationTable::new(Alphabet::new("a".chars()));
        table.record("a", true).unwrap();
        assert!(table.record("a", true).is_ok());
        assert!(matches!(table.record("a", false), Err(LstarError::Conflict { .. })));
    }

    #[test]
    fn unclosed_table_has_no_hypothesis() {
        let table = ObservationTable::new(Alphabet::new("a".chars()));
        assert_eq!(table.hypothesis(), Err(LstarError::TableNotClosed));
    }
}
