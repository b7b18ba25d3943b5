//! The CEGIS loop: a learner proposes automata, a teacher checks them
//! against the clauses, counterexamples refine the evidence.

mod emit;

use std::cell::Cell;
use std::collections::HashSet;
use std::path::PathBuf;
use std::time::{Duration, Instant};

use crate::automata::{dfa_to_regex, simplify_regex, Dfa, Regex};
use crate::chc::ClauseSystem;
use crate::lstar::{resolve_implication, LstarError, ObservationTable, Resolution};
use crate::oracle::{
    exact_check_all, find_unsafe_trace, CexKind, Derivation, ExactTeacher, Membership, ReachConfig, Reachability,
    TeacherVerdict, UnsafeTrace,
};
use crate::sat::{Sample, SatError, SatLearner};
use crate::smtlib::{ExternalTeacher, QueryDumper, SessionMode, SolverConfig};

pub use emit::{emit, exit_code};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LearnerKind {
    Sat,
    Lstar,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TeacherKind {
    Exact,
    External,
    /// External solver when configured, exact checking when it fails or
    /// is absent.
    Hybrid,
}

#[derive(Debug, Clone)]
pub struct RunConfig {
    pub learner: LearnerKind,
    pub teacher: TeacherKind,
    pub solver: Option<SolverConfig>,
    pub timeout: Duration,
    pub max_states: usize,
    pub length_slack: usize,
    pub dump_dir: Option<PathBuf>,
    /// File-name prefix of dumped queries.
    pub benchmark: String,
    pub iteration_cap: usize,
    pub incremental: bool,
    pub symmetry_breaking: bool,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            learner: LearnerKind::Sat,
            teacher: TeacherKind::Hybrid,
            solver: None,
            timeout: Duration::from_secs(60),
            max_states: crate::sat::DEFAULT_MAX_STATES,
            length_slack: 2,
            dump_dir: None,
            benchmark: "query".into(),
            iteration_cap: 500,
            incremental: true,
            symmetry_breaking: false,
        }
    }
}

impl RunConfig {
    /// Forces single-session mode on the configured solver.
    pub fn single_session(mut self) -> Self {
        if let Some(s) = &mut self.solver {
            s.session_mode = SessionMode::Single;
        }
        self
    }
}

#[derive(Debug, Clone)]
pub enum Verdict {
    Safe { dfa: Dfa, regex: Regex, learner_size: usize },
    Unsafe(UnsafeTrace),
    Unknown { reason: String, partial_sample: Sample },
}

impl Verdict {
    pub fn is_safe(&self) -> bool {
        matches!(self, Verdict::Safe { .. })
    }

    pub fn is_unsafe(&self) -> bool {
        matches!(self, Verdict::Unsafe(_))
    }
}

/// One checked hypothesis.
#[derive(Debug, Clone)]
pub struct Round {
    pub index: usize,
    pub hypothesis: Dfa,
    pub learner_size: usize,
    pub verdict: TeacherVerdict,
}

#[derive(Debug, Clone)]
pub struct RunReport {
    pub verdict: Verdict,
    pub rounds: usize,
    pub dumped: usize,
    pub elapsed: Duration,
    /// Fallbacks, provisional answers and solver transcripts.
    pub notes: Vec<String>,
}

enum Teacher<'a> {
    Exact(ExactTeacher<'a>),
    External { ext: ExternalTeacher<'a>, fallback: Option<ExactTeacher<'a>> },
}

impl Teacher<'_> {
    fn check(&mut self, h: &Dfa, notes: &mut Vec<String>) -> Result<TeacherVerdict, String> {
        match self {
            Teacher::Exact(t) => t.check(h).map_err(|e| e.to_string()),
            Teacher::External { ext, fallback } => match ext.check(h) {
                Ok(v) => Ok(v),
                Err(e) => match fallback {
                    Some(t) => {
                        notes.push(format!("external teacher failed ({e}); checked internally"));
                        t.check(h).map_err(|e| e.to_string())
                    }
                    None => Err(format!("external teacher failed: {e}")),
                },
            },
        }
    }
}

fn make_teacher<'a>(sys: &'a ClauseSystem, cfg: &RunConfig, notes: &mut Vec<String>) -> Result<Teacher<'a>, String> {
    let exact = ExactTeacher::new(sys).map_err(|e| e.to_string());
    match (cfg.teacher, &cfg.solver) {
        (TeacherKind::Exact, _) | (TeacherKind::Hybrid, None) => exact.map(Teacher::Exact),
        (TeacherKind::External, None) => Err("the external teacher needs a solver configuration".into()),
        (kind, Some(solver)) => match ExternalTeacher::new(sys, solver, cfg.incremental) {
            Ok(ext) => {
                let fallback = if kind == TeacherKind::Hybrid { exact.ok() } else { None };
                Ok(Teacher::External { ext, fallback })
            }
            Err(e) if kind == TeacherKind::Hybrid => {
                notes.push(format!("cannot start external solver ({e}); using the exact teacher"));
                exact.map(Teacher::Exact)
            }
            Err(e) => Err(e.to_string()),
        },
    }
}

struct Loop<'a, 'o> {
    sys: &'a ClauseSystem,
    cfg: &'a RunConfig,
    start: Instant,
    teacher: Teacher<'a>,
    dumper: Option<QueryDumper>,
    notes: Vec<String>,
    observer: &'o mut dyn FnMut(&Round),
    rounds: usize,
}

fn unknown(reason: impl Into<String>, sample: Sample) -> Verdict {
    Verdict::Unknown { reason: reason.into(), partial_sample: sample }
}

impl Loop<'_, '_> {
    fn over_budget(&self, round: usize) -> Option<&'static str> {
        if round >= self.cfg.iteration_cap {
            Some("budget")
        } else if self.start.elapsed() >= self.cfg.timeout {
            Some("timeout")
        } else {
            None
        }
    }

    /// Bounded forward search, interleaved every 8 rounds.
    fn periodic_unsafe_check(&self, round: usize) -> Option<UnsafeTrace> {
        if round == 0 || !round.is_multiple_of(8) {
            return None;
        }
        find_unsafe_trace(self.sys, ReachConfig { slack: self.cfg.length_slack, depth_cap: 16, node_cap: 50_000 })
    }

    fn dump(&mut self, h: &Dfa) {
        let Some(dumper) = &mut self.dumper else { return };
        let statuses = exact_check_all(h, self.sys).ok();
        let term = ExternalTeacher::hypothesis_term(h, self.sys);
        for q in crate::smtlib::ClauseQuery::for_system(self.sys, &term) {
            let status = statuses.as_ref().and_then(|all| {
                all.iter()
                    .find(|r| r.clause_index == q.clause_index)
                    .map(|r| if r.cex.is_some() { "sat" } else { "unsat" })
            });
            if let Err(e) = dumper.dump(&q, status) {
                self.notes.push(format!("cannot dump query: {e}"));
            }
        }
    }

    fn check(&mut self, index: usize, h: &Dfa, learner_size: usize) -> Result<TeacherVerdict, String> {
        self.dump(h);
        let verdict = self.teacher.check(h, &mut self.notes)?;
        self.rounds = index + 1;
        (self.observer)(&Round { index, hypothesis: h.clone(), learner_size, verdict: verdict.clone() });
        Ok(verdict)
    }

    fn safe(h: &Dfa, learner_size: usize) -> Verdict {
        let dfa = h.minimize();
        let regex = simplify_regex(&dfa_to_regex(&dfa));
        Verdict::Safe { dfa, regex, learner_size }
    }

    fn run_sat(&mut self) -> Verdict {
        let mut learner = SatLearner::new(self.sys.alphabet.clone());
        learner.n_max = self.cfg.max_states;
        learner.symmetry_breaking = self.cfg.symmetry_breaking;
        let mut sample = Sample::new();
        let mut seen: HashSet<Dfa> = HashSet::new();
        let mut n = 1;
        for round in 0.. {
            if let Some(c) = sample.contradiction() {
                return Verdict::Unsafe(UnsafeTrace {
                    derivation: Derivation { steps: c.chain },
                    bad_clause: c.neg_clause,
                });
            }
            if let Some(reason) = self.over_budget(round) {
                return unknown(reason, sample);
            }
            if let Some(trace) = self.periodic_unsafe_check(round) {
                return Verdict::Unsafe(trace);
            }
            let (h, size) = match learner.next_hypothesis(&sample, n) {
                Ok(r) => r,
                Err(e @ SatError::BudgetExhausted(_)) => return unknown(e.to_string(), sample),
                Err(e) => return unknown(format!("learner failed: {e}"), sample),
            };
            n = size;
            if !seen.insert(h.minimize()) {
                return unknown("learner repeated a hypothesis", sample);
            }
            match self.check(round, &h, size) {
                Err(e) => return unknown(e, sample),
                Ok(TeacherVerdict::Passed) => return Self::safe(&h, size),
                Ok(TeacherVerdict::Cex(c)) => {
                    if !sample.add(&c) {
                        return unknown(format!("teacher repeated {c}"), sample);
                    }
                }
            }
        }
        unreachable!()
    }

    fn run_lstar(&mut self) -> Verdict {
        let reach = Reachability::new(self.sys, ReachConfig { slack: self.cfg.length_slack, ..ReachConfig::default() });
        let provisional = Cell::new(0usize);
        let verdict = self.lstar_rounds(&reach, &provisional);
        if provisional.get() > 0 {
            self.notes.push(format!("{} membership answers were provisional", provisional.get()));
        }
        verdict
    }

    /// Inconclusive membership answers count as `false` and are tallied in
    /// `provisional`.
    fn lstar_rounds(&mut self, reach: &Reachability<'_>, provisional: &Cell<usize>) -> Verdict {
        let mut mem = |w: &str| -> Result<bool, LstarError> {
            Ok(match reach.member(w) {
                Membership::Reachable(_) => true,
                Membership::Unreachable => false,
                Membership::Inconclusive => {
                    provisional.set(provisional.get() + 1);
                    false
                }
            })
        };
        let mut table = ObservationTable::new(self.sys.alphabet.clone());
        let mut sample = Sample::new();
        let folded = |e: LstarError, sample: Sample| unknown(format!("membership: {e}"), sample);
        if let Err(e) = table.close_and_make_consistent(&mut mem) {
            return folded(e, sample);
        }
        for round in 0.. {
            if let Some(reason) = self.over_budget(round) {
                return unknown(reason, sample);
            }
            if let Some(trace) = self.periodic_unsafe_check(round) {
                return Verdict::Unsafe(trace);
            }
            let h = match table.hypothesis() {
                Ok(h) => h,
                Err(e) => return folded(e, sample),
            };
            let size = h.num_states();
            let cex = match self.check(round, &h, size) {
                Err(e) => return unknown(e, sample),
                Ok(TeacherVerdict::Passed) => return Self::safe(&h, size),
                Ok(TeacherVerdict::Cex(c)) => c,
            };
            sample.add(&cex);
            let (word, label) = match &cex.kind {
                CexKind::Positive(w) => (w.clone(), true),
                CexKind::Negative(w) => match reach.member(w) {
                    Membership::Reachable(d) => {
                        return Verdict::Unsafe(UnsafeTrace { derivation: d, bad_clause: cex.clause_index })
                    }
                    _ => (w.clone(), false),
                },
                CexKind::Implication { w_in, w_out } => {
                    let known = table.cached(w_in) == Some(true);
                    match resolve_implication(w_in, w_out, known, &mut |w| reach.member(w)) {
                        Resolution::Positive(w, _) => (w, true),
                        Resolution::Negative(w) => (w, false),
                        Resolution::Inconclusive => {
                            self.notes.push(format!("{w_in:?} labelled negative provisionally"));
                            (w_in.clone(), false)
                        }
                    }
                }
            };
            let r = table.record(&word, label).and_then(|_| table.process_counterexample(&word, &mut mem));
            if let Err(e) = r {
                return folded(e, sample);
            }
        }
        unreachable!()
    }
}

/// Runs the CEGIS loop. Every failure folds into `Verdict::Unknown`.
pub fn solve(sys: &ClauseSystem, cfg: &RunConfig) -> Verdict {
    solve_observed(sys, cfg, &mut |_| {}).verdict
}

/// Like [`solve`], calling `observer` after every teacher answer.
pub fn solve_observed(sys: &ClauseSystem, cfg: &RunConfig, observer: &mut dyn FnMut(&Round)) -> RunReport {
    let start = Instant::now();
    let mut notes = Vec::new();
    let finish =
        |verdict, rounds, dumped, notes| RunReport { verdict, rounds, dumped, elapsed: start.elapsed(), notes };
    let teacher = match make_teacher(sys, cfg, &mut notes) {
        Ok(t) => t,
        Err(e) => return finish(unknown(e, Sample::new()), 0, 0, notes),
    };
    let dumper = match &cfg.dump_dir {
        None => None,
        Some(dir) => {
            let logic = cfg.solver.as_ref().map_or("QF_S", |s| s.logic.as_str());
            match QueryDumper::new(dir, &cfg.benchmark, logic) {
                Ok(d) => Some(d),
                Err(e) => return finish(unknown(format!("dump directory: {e}"), Sample::new()), 0, 0, notes),
            }
        }
    };
    let mut l = Loop { sys, cfg, start, teacher, dumper, notes, observer, rounds: 0 };
    let verdict = match cfg.learner {
        LearnerKind::Sat => l.run_sat(),
        LearnerKind::Lstar => l.run_lstar(),
    };
    let dumped = l.dumper.as_ref().map_or(0, QueryDumper::count);
    finish(verdict, l.rounds, dumped, l.notes)
}
