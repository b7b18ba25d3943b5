//! Smallest DFA consistent with positive, negative and implication
//! examples, found by SAT with a growing state budget.

mod backend;
mod cnf;
mod encode;
mod sample;

use thiserror::Error;

use crate::automata::{Alphabet, AutomataError, Dfa};

pub use backend::{parse_competition_output, ExternalBackend, SatBackend, VarisatBackend};
pub use cnf::CnfInstance;
pub use encode::{encode, Encoding};
pub use sample::{Contradiction, Sample};

pub const DEFAULT_MAX_STATES: usize = 16;

#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum SatError {
    #[error("no consistent DFA with at most {0} states")]
    BudgetExhausted(usize),
    #[error("SAT backend failed: {0}")]
    BackendFailure(String),
    #[error(transparent)]
    Automata(#[from] AutomataError),
}

/// SAT-based learner over a fixed alphabet.
pub struct SatLearner {
    backend: Box<dyn SatBackend>,
    alphabet: Alphabet,
    pub n_max: usize,
    pub symmetry_breaking: bool,
}

impl SatLearner {
    pub fn new(alphabet: Alphabet) -> Self {
        Self::with_backend(alphabet, Box::new(VarisatBackend))
    }

    pub fn with_backend(alphabet: Alphabet, backend: Box<dyn SatBackend>) -> Self {
        SatLearner { backend, alphabet, n_max: DEFAULT_MAX_STATES, symmetry_breaking: false }
    }

    /// Least `n` in `n_start..=n_max` with a consistent `n`-state DFA, and
    /// that DFA. The empty sample yields the one-state DFA accepting
    /// everything.
    pub fn next_hypothesis(&mut self, sample: &Sample, n_start: usize) -> Result<(Dfa, usize), SatError> {
        let n_start = n_start.max(1);
        if sample.is_empty() && n_start == 1 {
            return Ok((Dfa::trivial(self.alphabet.clone(), true), 1));
        }
        for n in n_start..=self.n_max {
            let enc = encode(sample, n, &self.alphabet, self.symmetry_breaking)?;
            if let Some(model) = self.backend.solve(&enc.cnf)? {
                if !enc.cnf.satisfied_by(&model) {
                    return Err(SatError::BackendFailure("model violates the formula".into()));
                }
                return Ok((enc.decode(&model), n));
            }
        }
        Err(SatError::BudgetExhausted(self.n_max))
    }
}

/// One-shot search with the built-in backend.
pub fn next_hypothesis(
    sample: &Sample,
    alphabet: &Alphabet,
    n_start: usize,
    n_max: usize,
) -> Result<(Dfa, usize), SatError> {
    let mut learner = SatLearner::new(alphabet.clone());
    learner.n_max = n_max;
    learner.next_hypothesis(sample, n_start)
}

/// Whether `h` satisfies every constraint of `sample`.
pub fn consistent(h: &Dfa, sample: &Sample) -> bool {
    sample.pos.keys().all(|w| h.accepts(w))
        && sample.neg.keys().all(|w| !h.accepts(w))
        && sample.imp.iter().all(|(a, b, _)| !h.accepts(a) || h.accepts(b))
}
