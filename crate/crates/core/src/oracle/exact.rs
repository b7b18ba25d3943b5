use super::{CexKind, Counterexample, OracleError, TeacherVerdict};
use crate::automata::{regex_to_nfa, rule_violation, AutomataError, Dfa};
use crate::chc::{ClauseKind, ClauseSystem, TransBody};

/// Exact teacher with the Init and Bad languages compiled once.
#[derive(Debug, Clone)]
pub struct ExactTeacher<'a> {
    sys: &'a ClauseSystem,
    init: Vec<(usize, Dfa)>,
    bad: Vec<(usize, Dfa)>,
}

/// Outcome of checking one clause.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ClauseResult {
    pub clause_index: usize,
    pub kind: ClauseKind,
    pub cex: Option<Counterexample>,
}

impl<'a> ExactTeacher<'a> {
    pub fn new(sys: &'a ClauseSystem) -> Result<Self, OracleError> {
        if let Some(t) = sys.trans_clauses.iter().find(|t| t.rule().is_none()) {
            return Err(OracleError::RawClausePresent(t.clause_index));
        }
        let compile = |list: &[crate::chc::ConstraintClause]| -> Result<Vec<(usize, Dfa)>, AutomataError> {
            list.iter()
                .map(|c| Ok((c.clause_index, regex_to_nfa(&c.language, &sys.alphabet)?.determinize()?.minimize())))
                .collect()
        };
        Ok(ExactTeacher { sys, init: compile(&sys.init_clauses)?, bad: compile(&sys.bad_clauses)? })
    }

    fn check_init(&self, h: &Dfa, idx: usize) -> Result<Option<Counterexample>, OracleError> {
        let (clause_index, lang) = &self.init[idx];
        Ok(lang.included_in(h)?.map(|w| Counterexample { kind: CexKind::Positive(w), clause_index: *clause_index }))
    }

    fn check_bad(&self, h: &Dfa, idx: usize) -> Result<Option<Counterexample>, OracleError> {
        let (clause_index, lang) = &self.bad[idx];
        Ok(h.intersect(lang)?
            .shortest_word()
            .map(|w| Counterexample { kind: CexKind::Negative(w), clause_index: *clause_index }))
    }

    fn check_trans(&self, h: &Dfa, idx: usize) -> Result<Option<Counterexample>, OracleError> {
        let t = &self.sys.trans_clauses[idx];
        let TransBody::Rule(rule) = &t.body else { unreachable!("raw clauses rejected in new") };
        Ok(rule_violation(h, rule)?.map(|v| Counterexample {
            kind: CexKind::Implication { w_in: v.w_in, w_out: v.w_out },
            clause_index: t.clause_index,
        }))
    }

    /// First counterexample in the fixed order: Init clauses, Bad clauses,
    /// then transitions, each by clause index.
    pub fn check(&self, h: &Dfa) -> Result<TeacherVerdict, OracleError> {
        for i in 0..self.init.len() {
            if let Some(c) = self.check_init(h, i)? {
                return Ok(TeacherVerdict::Cex(c));
            }
        }
        for i in 0..self.bad.len() {
            if let Some(c) = self.check_bad(h, i)? {
                return Ok(TeacherVerdict::Cex(c));
            }
        }
        for i in 0..self.sys.trans_clauses.len() {
            if let Some(c) = self.check_trans(h, i)? {
                return Ok(TeacherVerdict::Cex(c));
            }
        }
        Ok(TeacherVerdict::Passed)
    }

    /// Every clause checked, results in clause-index order.
    pub fn check_all(&self, h: &Dfa) -> Result<Vec<ClauseResult>, OracleError> {
        let mut out = Vec::new();
        for i in 0..self.init.len() {
            out.push(ClauseResult {
                clause_index: self.init[i].0,
                kind: ClauseKind::Init,
                cex: self.check_init(h, i)?,
            });
        }
        for i in 0..self.bad.len() {
            out.push(ClauseResult { clause_index: self.bad[i].0, kind: ClauseKind::Bad, cex: self.check_bad(h, i)? });
        }
        for (i, t) in self.sys.trans_clauses.iter().enumerate() {
            out.push(ClauseResult {
                clause_index: t.clause_index,
                kind: ClauseKind::Trans,
                cex: self.check_trans(h, i)?,
            });
        }
        out.sort_by_key(|r| r.clause_index);
        Ok(out)
    }
}

/// Decides whether `h` is an inductive invariant of `sys`.
pub fn exact_check(h: &Dfa, sys: &ClauseSystem) -> Result<TeacherVerdict, OracleError> {
    ExactTeacher::new(sys)?.check(h)
}

pub fn exact_check_all(h: &Dfa, sys: &ClauseSystem) -> Result<Vec<ClauseResult>, OracleError> {
    ExactTeacher::new(sys)?.check_all(h)
}
