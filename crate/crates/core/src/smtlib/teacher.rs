use crate::automata::{dfa_to_regex, simplify_regex, Dfa};
use crate::chc::{ClauseKind, ClauseSystem};
use crate::oracle::{validate_counterexample, CexKind, Counterexample, TeacherVerdict};

use super::{
    run_script, serialize_regex_over, ClauseQuery, Model, SatStatus, Session, SessionMode, SmtError, SolverConfig,
};

type Answer = Result<(SatStatus, Option<Model>), SmtError>;

/// Equivalence queries answered by an external solver, one query per
/// clause. Results are merged in clause order, so the reported
/// counterexample is the one of the lowest failing clause.
pub struct ExternalTeacher<'a> {
    sys: &'a ClauseSystem,
    cfg: SolverConfig,
    incremental: bool,
    templates: Vec<ClauseQuery>,
    sessions: Vec<Session>,
}

fn declare_and_fix(q: &ClauseQuery) -> Vec<String> {
    q.declarations().into_iter().chain(q.fixed.iter().map(|a| format!("(assert {a})"))).collect()
}

impl<'a> ExternalTeacher<'a> {
    /// Opens the sessions up front when `incremental`; per-clause sessions
    /// are preloaded with the clause constraints.
    pub fn new(sys: &'a ClauseSystem, cfg: &SolverConfig, incremental: bool) -> Result<Self, SmtError> {
        cfg.validate()?;
        let templates = ClauseQuery::for_system(sys, "re.none");
        let incremental = incremental && cfg.interactive;
        let mut sessions = Vec::new();
        if incremental {
            match cfg.session_mode {
                SessionMode::PerClause => {
                    for q in &templates {
                        sessions.push(Session::open(cfg, declare_and_fix(q), Some(q.clause_index))?);
                    }
                }
                SessionMode::Single => sessions.push(Session::open(cfg, Vec::new(), None)?),
            }
        }
        Ok(ExternalTeacher { sys, cfg: cfg.clone(), incremental, templates, sessions })
    }

    /// The hypothesis as a regex term over the system alphabet.
    pub fn hypothesis_term(h: &Dfa, sys: &ClauseSystem) -> String {
        serialize_regex_over(&simplify_regex(&dfa_to_regex(&h.minimize())), &sys.alphabet)
    }

    pub fn queries(&self, h: &Dfa) -> Vec<ClauseQuery> {
        ClauseQuery::for_system(self.sys, &Self::hypothesis_term(h, self.sys))
    }

    /// Assertion-stack depth of every live session.
    pub fn session_depths(&self) -> Vec<usize> {
        self.sessions.iter().map(Session::depth).collect()
    }

    /// Raw answers of every clause query, in clause order.
    pub fn check_all(&mut self, h: &Dfa) -> Vec<(ClauseQuery, Answer)> {
        let queries = self.queries(h);
        let answers: Vec<Answer> = if !self.incremental {
            let cfg = &self.cfg;
            std::thread::scope(|s| {
                let handles: Vec<_> = queries
                    .iter()
                    .map(|q| s.spawn(move || run_script(cfg, &q.script(&cfg.logic, None), &q.witness)))
                    .collect();
                handles.into_iter().map(|t| t.join().expect("query worker panicked")).collect()
            })
        } else if self.cfg.session_mode == SessionMode::PerClause {
            std::thread::scope(|s| {
                let handles: Vec<_> = self
                    .sessions
                    .iter_mut()
                    .zip(&queries)
                    .map(|(session, q)| {
                        s.spawn(move || {
                            let asserts: Vec<String> = q.hypothesis.iter().map(|a| format!("(assert {a})")).collect();
                            session.query(&asserts, &q.witness)
                        })
                    })
                    .collect();
                handles.into_iter().map(|t| t.join().expect("query worker panicked")).collect()
            })
        } else {
            let session = &mut self.sessions[0];
            queries
                .iter()
                .map(|q| {
                    let mut asserts = declare_and_fix(q);
                    asserts.extend(q.hypothesis.iter().map(|a| format!("(assert {a})")));
                    session.query(&asserts, &q.witness)
                })
                .collect()
        };
        queries.into_iter().zip(answers).collect()
    }

    /// Passed iff every clause query is unsat. Solver models are validated
    /// by simulation before they are returned as counterexamples.
    pub fn check(&mut self, h: &Dfa) -> Result<TeacherVerdict, SmtError> {
        for (q, answer) in self.check_all(h) {
            match answer? {
                (SatStatus::Unsat, _) => continue,
                (SatStatus::Unknown, _) => return Err(SmtError::Inconclusive(q.clause_index)),
                (SatStatus::Sat, model) => {
                    let model = model.unwrap_or_default();
                    let get = |name: &str| {
                        model
                            .iter()
                            .find(|(n, _)| n == name)
                            .map(|(_, w)| w.clone())
                            .ok_or_else(|| SmtError::ModelParseFailure(format!("no value for {name}")))
                    };
                    let kind = match q.kind {
                        ClauseKind::Init => CexKind::Positive(get("var_in")?),
                        ClauseKind::Bad => CexKind::Negative(get("var_out")?),
                        ClauseKind::Trans => CexKind::Implication { w_in: get("var_in")?, w_out: get("var_out")? },
                    };
                    let cex = Counterexample { kind, clause_index: q.clause_index };
                    validate_counterexample(&cex, h, self.sys).map_err(|m| {
                        SmtError::ModelParseFailure(format!("invalid model for clause {}: {m}", q.clause_index))
                    })?;
                    return Ok(TeacherVerdict::Cex(cex));
                }
            }
        }
        Ok(TeacherVerdict::Passed)
    }

    /// Membership of concrete words in one clause's constraint, using that
    /// clause's preloaded session.
    pub fn query_membership(&mut self, clause_index: usize, bindings: &[(&str, &str)]) -> Result<SatStatus, SmtError> {
        if self.incremental && self.cfg.session_mode == SessionMode::PerClause {
            let session = self
                .sessions
                .iter_mut()
                .find(|s| s.clause_index() == Some(clause_index))
                .ok_or_else(|| SmtError::Unsupported(format!("no clause {clause_index}")))?;
            return session.query_membership(bindings);
        }
        let q = self
            .templates
            .iter()
            .find(|q| q.clause_index == clause_index)
            .ok_or_else(|| SmtError::Unsupported(format!("no clause {clause_index}")))?;
        let mut script = q.clone();
        script.hypothesis =
            bindings.iter().map(|(n, w)| format!("(= {n} {})", crate::sexp::encode_string_literal(w))).collect();
        if self.incremental {
            let mut asserts = declare_and_fix(&script);
            asserts.extend(script.hypothesis.iter().map(|a| format!("(assert {a})")));
            return self.sessions[0].query(&asserts, &[]).map(|(s, _)| s);
        }
        run_script(&self.cfg, &script.script(&self.cfg.logic, None), &[]).map(|(s, _)| s)
    }
}
