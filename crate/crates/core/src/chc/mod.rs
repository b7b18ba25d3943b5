//! Constrained Horn clauses over a single unary string predicate.
//!
//! Clauses are numbered by their 1-based position among the `assert`
//! commands of the input.

mod parse;
pub(crate) mod write;

use thiserror::Error;

use crate::automata::{Alphabet, Regex};
use crate::rule::{RewriteRule, Segment};
use crate::sexp::SexpError;

pub use parse::{
    classify_clause, extract_rewrite_rule, parse_regex, parse_script, parse_term, ClauseKind, NotInFragment,
};
pub use write::write_system;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ChcError {
    #[error(transparent)]
    Syntax(#[from] SexpError),
    #[error("unsupported construct: {0}")]
    UnsupportedConstruct(String),
    #[error("more than one predicate declared ({0})")]
    MultiplePredicates(String),
    #[error("clause {index} is not a linear Horn clause: {reason}")]
    NonHornShape { index: usize, reason: String },
    #[error("system has no {0}")]
    EmptySystem(&'static str),
    #[error("no symbol occurs anywhere in the system")]
    EmptyAlphabet,
}

/// An Init or Bad clause: the language its predicate argument ranges over.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConstraintClause {
    pub clause_index: usize,
    pub language: Regex,
}

/// String constraint atom over numbered variables.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Atom {
    Eq(Vec<Segment>, Vec<Segment>),
    InRe(Vec<Segment>, Regex),
}

/// Transition body outside the rewrite-rule fragment. Variable 0 is the
/// body argument, variable 1 the head argument, the rest are numbered by
/// first occurrence.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RawConstraint {
    pub num_vars: usize,
    pub atoms: Vec<Atom>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum TransBody {
    Rule(RewriteRule),
    Raw(RawConstraint),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TransClause {
    pub clause_index: usize,
    pub body: TransBody,
}

impl TransClause {
    pub fn rule(&self) -> Option<&RewriteRule> {
        match &self.body {
            TransBody::Rule(r) => Some(r),
            TransBody::Raw(_) => None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ClauseSystem {
    pub predicate_name: String,
    pub alphabet: Alphabet,
    pub init_clauses: Vec<ConstraintClause>,
    pub bad_clauses: Vec<ConstraintClause>,
    pub trans_clauses: Vec<TransClause>,
}

impl ClauseSystem {
    /// Union of all Init languages.
    pub fn init_language(&self) -> Regex {
        Regex::union(self.init_clauses.iter().map(|c| c.language.clone()).collect())
    }

    /// Union of all Bad languages.
    pub fn bad_language(&self) -> Regex {
        Regex::union(self.bad_clauses.iter().map(|c| c.language.clone()).collect())
    }

    /// Structured rules with their clause indices, in clause order.
    pub fn rules(&self) -> impl Iterator<Item = (usize, &RewriteRule)> + '_ {
        self.trans_clauses.iter().filter_map(|t| t.rule().map(|r| (t.clause_index, r)))
    }

    pub fn has_raw_clauses(&self) -> bool {
        self.trans_clauses.iter().any(|t| t.rule().is_none())
    }

    pub fn num_clauses(&self) -> usize {
        self.init_clauses.len() + self.bad_clauses.len() + self.trans_clauses.len()
    }

    /// Clause kind and position, ordered by clause index.
    pub fn clause_order(&self) -> Vec<(usize, ClauseKind)> {
        let mut out: Vec<(usize, ClauseKind)> = self
            .init_clauses
            .iter()
            .map(|c| (c.clause_index, ClauseKind::Init))
            .chain(self.bad_clauses.iter().map(|c| (c.clause_index, ClauseKind::Bad)))
            .chain(self.trans_clauses.iter().map(|c| (c.clause_index, ClauseKind::Trans)))
            .collect();
        out.sort();
        out
    }
}

fn segment_symbols(side: &[Segment], out: &mut Vec<char>) {
    for seg in side {
        if let Segment::Const(c) = seg {
            out.extend(c.chars());
        }
    }
}

/// Every symbol occurring in a constant word or regex of the system, in
/// ascending code point order. `re.allchar` contributes nothing.
pub fn infer_alphabet(sys: &ClauseSystem) -> Result<Alphabet, ChcError> {
    let mut symbols = Vec::new();
    for c in sys.init_clauses.iter().chain(&sys.bad_clauses) {
        symbols.extend(c.language.symbols());
    }
    for t in &sys.trans_clauses {
        match &t.body {
            TransBody::Rule(r) => {
                segment_symbols(r.lhs(), &mut symbols);
                segment_symbols(r.rhs(), &mut symbols);
            }
            TransBody::Raw(raw) => {
                for atom in &raw.atoms {
                    match atom {
                        Atom::Eq(a, b) => {
                            segment_symbols(a, &mut symbols);
                            segment_symbols(b, &mut symbols);
                        }
                        Atom::InRe(t, r) => {
                            segment_symbols(t, &mut symbols);
                            symbols.extend(r.symbols());
                        }
                    }
                }
            }
        }
    }
    let alphabet = Alphabet::new(symbols);
    if alphabet.is_empty() {
        Err(ChcError::EmptyAlphabet)
    } else {
        Ok(alphabet)
    }
}
