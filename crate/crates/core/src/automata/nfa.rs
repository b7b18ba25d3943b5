use std::collections::{BTreeSet, HashMap};

use super::{Alphabet, AutomataError, Dfa, Regex};

/// Default cap on the number of subsets explored by [`Nfa::determinize`].
pub const DEFAULT_STATE_CAP: usize = 1 << 16;

/// Nondeterministic automaton with epsilon moves. Symbols are alphabet
/// indices; `None` labels an epsilon edge.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Nfa {
    alphabet: Alphabet,
    transitions: Vec<Vec<(Option<usize>, usize)>>,
    initials: Vec<usize>,
    accepting: Vec<bool>,
}

impl Nfa {
    pub fn new(alphabet: Alphabet) -> Self {
        Nfa { alphabet, transitions: Vec::new(), initials: Vec::new(), accepting: Vec::new() }
    }

    pub fn alphabet(&self) -> &Alphabet {
        &self.alphabet
    }

    pub fn num_states(&self) -> usize {
        self.accepting.len()
    }

    pub fn add_state(&mut self, accepting: bool) -> usize {
        self.transitions.push(Vec::new());
        self.accepting.push(accepting);
        self.accepting.len() - 1
    }

    pub fn add_initial(&mut self, q: usize) {
        assert!(q < self.num_states());
        if !self.initials.contains(&q) {
            self.initials.push(q);
        }
    }

    pub fn set_accepting(&mut self, q: usize, accepting: bool) {
        self.accepting[q] = accepting;
    }

    pub fn add_transition(&mut self, from: usize, symbol: Option<usize>, to: usize) {
        assert!(from < self.num_states() && to < self.num_states());
        if let Some(a) = symbol {
            assert!(a < self.alphabet.len());
        }
        self.transitions[from].push((symbol, to));
    }

    pub fn initials(&self) -> &[usize] {
        &self.initials
    }

    pub fn is_accepting(&self, q: usize) -> bool {
        self.accepting[q]
    }

    pub fn transitions(&self, q: usize) -> &[(Option<usize>, usize)] {
        &self.transitions[q]
    }

    pub(crate) fn eps_successors(&self, q: usize) -> Vec<usize> {
        self.transitions[q].iter().filter(|(s, _)| s.is_none()).map(|&(_, t)| t).collect()
    }

    pub(crate) fn successors(&self, q: usize, a: usize) -> Vec<usize> {
        self.transitions[q].iter().filter(|(s, _)| *s == Some(a)).map(|&(_, t)| t).collect()
    }

    fn closure(&self, set: &mut BTreeSet<usize>) {
        let mut stack: Vec<usize> = set.iter().copied().collect();
        while let Some(q) = stack.pop() {
            for t in self.eps_successors(q) {
                if set.insert(t) {
                    stack.push(t);
                }
            }
        }
    }

    pub fn accepts(&self, word: &str) -> bool {
        let Some(symbols) = self.alphabet.encode(word) else { return false };
        let mut cur: BTreeSet<usize> = self.initials.iter().copied().collect();
        self.closure(&mut cur);
        for a in symbols {
            let mut next: BTreeSet<usize> = cur.iter().flat_map(|&q| self.successors(q, a)).collect();
            self.closure(&mut next);
            cur = next;
        }
        cur.iter().any(|&q| self.accepting[q])
    }

    /// Subset construction with the default cap.
    pub fn determinize(&self) -> Result<Dfa, AutomataError> {
        self.determinize_with_cap(DEFAULT_STATE_CAP)
    }

    /// Subset construction producing a total DFA; the empty subset becomes an
    /// explicit sink when needed.
    pub fn determinize_with_cap(&self, cap: usize) -> Result<Dfa, AutomataError> {
        let k = self.alphabet.len();
        let mut start: BTreeSet<usize> = self.initials.iter().copied().collect();
        self.closure(&mut start);
        let mut index: HashMap<BTreeSet<usize>, usize> = HashMap::new();
        let mut subsets = vec![start.clone()];
        index.insert(start, 0);
        let mut delta = Vec::new();
        let mut i = 0;
        while i < subsets.len() {
            for a in 0..k {
                let mut next: BTreeSet<usize> = subsets[i].iter().flat_map(|&q| self.successors(q, a)).collect();
                self.closure(&mut next);
                let id = match index.get(&next) {
                    Some(&id) => id,
                    None => {
                        if subsets.len() >= cap {
                            return Err(AutomataError::StateBlowupLimit(cap));
                        }
                        subsets.push(next.clone());
                        index.insert(next, subsets.len() - 1);
                        subsets.len() - 1
                    }
                };
                delta.push(id);
            }
            i += 1;
        }
        let accepting = subsets.iter().map(|s| s.iter().any(|&q| self.accepting[q])).collect();
        Ok(Dfa::from_table(self.alphabet.clone(), 0, accepting, delta))
    }
}

/// Thompson construction. `AllChar` and ranges expand over `alphabet`.
pub fn regex_to_nfa(r: &Regex, alphabet: &Alphabet) -> Result<Nfa, AutomataError> {
    let mut nfa = Nfa::new(alphabet.clone());
    let start = nfa.add_state(false);
    let end = nfa.add_state(true);
    build(&mut nfa, r, start, end)?;
    nfa.add_initial(start);
    Ok(nfa)
}

/// Adds edges so that the words of `r` lead from `from` to `to`.
fn build(nfa: &mut Nfa, r: &Regex, from: usize, to: usize) -> Result<(), AutomataError> {
    let alphabet = nfa.alphabet.clone();
    match r {
        Regex::None => {}
        Regex::Epsilon => nfa.add_transition(from, None, to),
        Regex::Sym(c) => {
            let a = alphabet.index_of(*c).ok_or(AutomataError::SymbolOutsideAlphabet(*c))?;
            nfa.add_transition(from, Some(a), to);
        }
        Regex::Range(lo, hi) => {
            for (a, &c) in alphabet.symbols().iter().enumerate() {
                if *lo <= c && c <= *hi {
                    nfa.add_transition(from, Some(a), to);
                }
            }
        }
        Regex::AllChar => {
            for a in 0..alphabet.len() {
                nfa.add_transition(from, Some(a), to);
            }
        }
        Regex::Concat(parts) => {
            let mut cur = from;
            for (i, p) in parts.iter().enumerate() {
                let next = if i + 1 == parts.len() { to } else { nfa.add_state(false) };
                build(nfa, p, cur, next)?;
                cur = next;
            }
        }
        Regex::Union(parts) => {
            for p in parts {
                let s = nfa.add_state(false);
                let e = nfa.add_state(false);
                nfa.add_transition(from, None, s);
                build(nfa, p, s, e)?;
                nfa.add_transition(e, None, to);
            }
        }
        Regex::Star(inner) | Regex::Plus(inner) => {
            let s = nfa.add_state(false);
            let e = nfa.add_state(false);
            nfa.add_transition(from, None, s);
            build(nfa, inner, s, e)?;
            nfa.add_transition(e, None, s);
            nfa.add_transition(e, None, to);
            if matches!(r, Regex::Star(_)) {
                nfa.add_transition(from, None, to);
            }
        }
        Regex::Opt(inner) => {
            nfa.add_transition(from, None, to);
            let s = nfa.add_state(false);
            nfa.add_transition(from, None, s);
            build(nfa, inner, s, to)?;
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rnb() -> Regex {
        Regex::concat(vec![Regex::literal("rn"), Regex::star(Regex::literal("nn")), Regex::Sym('b')])
    }

    #[test]
    fn thompson_token_init() {
        let sigma = Alphabet::new("rbn".chars());
        let nfa = regex_to_nfa(&rnb(), &sigma).unwrap();
        assert!(nfa.accepts("rnb"));
        assert!(nfa.accepts("rnnnb"));
        assert!(!nfa.accepts("rnnb"));
        assert!(!nfa.accepts(""));
        for w in sigma.words_up_to(7) {
            assert_eq!(nfa.accepts(&w), rnb().matches(&w, &sigma), "{w}");
        }
    }

    #[test]
    fn trivial_languages() {
        let sigma = Alphabet::new("ab".chars());
        let none = regex_to_nfa(&Regex::None, &sigma).unwrap();
        let eps = regex_to_nfa(&Regex::Epsilon, &sigma).unwrap();
        for w in sigma.words_up_to(3) {
            assert!(!none.accepts(&w));
            assert_eq!(eps.accepts(&w), w.is_empty());
        }
        assert_eq!(regex_to_nfa(&Regex::Sym('z'), &sigma), Err(AutomataError::SymbolOutsideAlphabet('z')));
    }

    #[test]
    fn determinize_a_or_b_star_a() {
        // (a|b)*a: 3-state NFA, subsets {q0} and {q0,q1,q2}.
        let sigma = Alphabet::new("ab".chars());
        let mut nfa = Nfa::new(sigma.clone());
        let q0 = nfa.add_state(false);
        let q1 = nfa.add_state(false);
        let q2 = nfa.add_state(true);
        nfa.add_initial(q0);
        nfa.add_transition(q0, Some(0), q0);
        nfa.add_transition(q0, Some(1), q0);
        nfa.add_transition(q0, Some(0), q1);
        nfa.add_transition(q1, None, q2);
        let dfa = nfa.determinize().unwrap();
        assert_eq!(dfa.num_states(), 2);
        assert_eq!(dfa.minimize().num_states(), 2);
        for w in sigma.words_up_to(6) {
            assert_eq!(dfa.accepts(&w), w.ends_with('a'), "{w}");
            assert_eq!(nfa.accepts(&w), w.ends_with('a'), "{w}");
        }
    }

    #[test]
    fn empty_nfa_is_one_sink() {
        let sigma = Alphabet::new("ab".chars());
        let mut nfa = Nfa::new(sigma);
        let q = nfa.add_state(false);
        nfa.add_initial(q);
        let dfa = nfa.determinize().unwrap();
        let dfa = dfa.minimize();
        assert_eq!(dfa.num_states(), 1);
        assert!(!dfa.is_accepting(0));
    }

    #[test]
    fn blowup_cap() {
        // (a|b)*a(a|b)^6 needs 2^7 subsets.
        let sigma = Alphabet::new("ab".chars());
        let ab = Regex::union(vec![Regex::Sym('a'), Regex::Sym('b')]);
        let mut parts = vec![Regex::star(ab.clone()), Regex::Sym('a')];
        parts.extend(std::iter::repeat_n(ab, 6));
        let nfa = regex_to_nfa(&Regex::concat(parts), &sigma).unwrap();
        assert_eq!(nfa.determinize_with_cap(16), Err(AutomataError::StateBlowupLimit(16)));
        assert!(nfa.determinize().is_ok());
    }
}
