//! Teachers and membership oracles for a clause system.

mod bounded;
mod exact;
mod reach;

use std::fmt;

use thiserror::Error;

use crate::automata::{AutomataError, Dfa};
use crate::chc::{ClauseKind, ClauseSystem, TransBody};

pub use bounded::{bounded_check, clause_successors, equations_of_rule, solve_equations};
pub use exact::{exact_check, exact_check_all, ClauseResult, ExactTeacher};
pub use reach::{find_unsafe_trace, Derivation, Membership, ReachConfig, Reachability, UnsafeTrace};

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum CexKind {
    /// Must be accepted.
    Positive(String),
    /// Must be rejected.
    Negative(String),
    /// Accepting `w_in` forces accepting `w_out`.
    Implication { w_in: String, w_out: String },
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Counterexample {
    pub kind: CexKind,
    pub clause_index: usize,
}

impl fmt::Display for Counterexample {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.kind {
            CexKind::Positive(w) => write!(f, "positive {w:?} (clause {})", self.clause_index),
            CexKind::Negative(w) => write!(f, "negative {w:?} (clause {})", self.clause_index),
            CexKind::Implication { w_in, w_out } => {
                write!(f, "implication {w_in:?} -> {w_out:?} (clause {})", self.clause_index)
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum TeacherVerdict {
    Passed,
    Cex(Counterexample),
}

impl TeacherVerdict {
    pub fn is_passed(&self) -> bool {
        matches!(self, TeacherVerdict::Passed)
    }
}

#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum OracleError {
    #[error("clause {0} is outside the rewrite-rule fragment")]
    RawClausePresent(usize),
    #[error(transparent)]
    Automata(#[from] AutomataError),
}

/// Checks a counterexample against `h` and the clause it names by direct
/// simulation: regex derivatives for Init/Bad membership, the brute-force
/// equation matcher for transitions.
pub fn validate_counterexample(cex: &Counterexample, h: &Dfa, sys: &ClauseSystem) -> Result<(), String> {
    let sigma = &sys.alphabet;
    let in_clause = |list: &[crate::chc::ConstraintClause], w: &str| {
        list.iter()
            .find(|c| c.clause_index == cex.clause_index)
            .map(|c| c.language.matches(w, sigma))
            .ok_or_else(|| format!("clause {} has the wrong kind", cex.clause_index))
    };
    match &cex.kind {
        CexKind::Positive(w) => {
            if !in_clause(&sys.init_clauses, w)? {
                return Err(format!("{w:?} is not an initial word"));
            }
            if h.accepts(w) {
                return Err(format!("{w:?} is already accepted"));
            }
        }
        CexKind::Negative(w) => {
            if !in_clause(&sys.bad_clauses, w)? {
                return Err(format!("{w:?} is not a bad word"));
            }
            if !h.accepts(w) {
                return Err(format!("{w:?} is already rejected"));
            }
        }
        CexKind::Implication { w_in, w_out } => {
            let t = sys
                .trans_clauses
                .iter()
                .find(|t| t.clause_index == cex.clause_index)
                .ok_or_else(|| format!("clause {} is not a transition", cex.clause_index))?;
            if !h.accepts(w_in) || h.accepts(w_out) {
                return Err(format!("{w_in:?} -> {w_out:?} does not leave the hypothesis"));
            }
            let max_len = w_in.chars().count().max(w_out.chars().count());
            let unrelated = match &t.body {
                TransBody::Rule(r) => {
                    solve_equations(&equations_of_rule(r), 2 + r.num_vars(), &[Some(w_in), Some(w_out)], sigma, max_len)
                        .is_empty()
                }
                TransBody::Raw(raw) => {
                    solve_equations(&raw.atoms, raw.num_vars, &[Some(w_in), Some(w_out)], sigma, max_len).is_empty()
                }
            };
            if unrelated {
                return Err(format!("clause {} does not relate {w_in:?} to {w_out:?}", cex.clause_index));
            }
        }
    }
    Ok(())
}

/// Kind of the clause with the given index.
pub fn clause_kind(sys: &ClauseSystem, index: usize) -> Option<ClauseKind> {
    sys.clause_order().into_iter().find(|(i, _)| *i == index).map(|(_, k)| k)
}
