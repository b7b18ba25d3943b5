//! Finite automata and regular expressions over a small explicit alphabet.

mod dfa;
mod dot;
mod elim;
mod nfa;
mod post_image;
mod regex;
pub(crate) mod search;
mod simplify;

use thiserror::Error;

pub use dfa::{Dfa, Equivalence};
pub use elim::dfa_to_regex;
pub use nfa::{regex_to_nfa, Nfa, DEFAULT_STATE_CAP};
pub use post_image::{post_image, rule_violation, RuleViolation};
pub use regex::Regex;
pub use simplify::simplify_regex;

#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum AutomataError {
    #[error("symbol {0:?} is not in the alphabet")]
    SymbolOutsideAlphabet(char),
    #[error("subset construction exceeded {0} states")]
    StateBlowupLimit(usize),
    #[error("automata are over different alphabets")]
    AlphabetMismatch,
    #[error("rule copies a variable; its post-image is not regular in general")]
    NonRegularImage,
}

/// Ordered finite set of single-character symbols.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct Alphabet {
    symbols: Vec<char>,
}

impl Alphabet {
    pub fn new(symbols: impl IntoIterator<Item = char>) -> Self {
        let mut symbols: Vec<char> = symbols.into_iter().collect();
        symbols.sort_unstable();
        symbols.dedup();
        Alphabet { symbols }
    }

    pub fn len(&self) -> usize {
        self.symbols.len()
    }

    pub fn is_empty(&self) -> bool {
        self.symbols.is_empty()
    }

    pub fn symbols(&self) -> &[char] {
        &self.symbols
    }

    pub fn symbol(&self, index: usize) -> char {
        self.symbols[index]
    }

    pub fn index_of(&self, c: char) -> Option<usize> {
        self.symbols.binary_search(&c).ok()
    }

    pub fn contains(&self, c: char) -> bool {
        self.index_of(c).is_some()
    }

    /// Symbol indices of `word`, or `None` if it leaves the alphabet.
    pub fn encode(&self, word: &str) -> Option<Vec<usize>> {
        word.chars().map(|c| self.index_of(c)).collect()
    }

    pub fn decode(&self, indices: &[usize]) -> String {
        indices.iter().map(|&i| self.symbols[i]).collect()
    }

    /// All words of length exactly `len`, in lexicographic order.
    pub fn words_of_len(&self, len: usize) -> Vec<String> {
        let mut out = vec![String::new()];
        for _ in 0..len {
            out = out.iter().flat_map(|w| self.symbols.iter().map(move |&c| format!("{w}{c}"))).collect();
        }
        out
    }

    /// All words of length at most `max_len`, shortest first.
    pub fn words_up_to(&self, max_len: usize) -> Vec<String> {
        (0..=max_len).flat_map(|n| self.words_of_len(n)).collect()
    }
}

impl std::fmt::Display for Alphabet {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str("{")?;
        for (i, c) in self.symbols.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{c}")?;
        }
        f.write_str("}")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn alphabet_is_sorted_and_deduplicated() {
        let a = Alphabet::new("MIUIM".chars());
        assert_eq!(a.symbols(), &['I', 'M', 'U']);
        assert_eq!(a.encode("MU"), Some(vec![1, 2]));
        assert_eq!(a.encode("MX"), None);
        assert_eq!(a.words_up_to(2).len(), 1 + 3 + 9);
        assert_eq!(a.words_of_len(2)[..2], ["II".to_string(), "IM".to_string()]);
    }
}
