use std::collections::{HashMap, VecDeque};

use super::search::lex_bfs;
use super::{Alphabet, AutomataError, Nfa};

/// Total deterministic automaton. `delta[q * |Σ| + a]` is the successor of
/// state `q` on the `a`-th alphabet symbol.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Dfa {
    alphabet: Alphabet,
    initial: usize,
    accepting: Vec<bool>,
    delta: Vec<usize>,
}

/// Outcome of a language equivalence check.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Equivalence {
    Equal,
    /// Least shortest word accepted by exactly one side.
    Witness(String),
}

impl Dfa {
    /// Panics when the table is malformed; see [`Dfa::try_from_table`].
    pub fn from_table(alphabet: Alphabet, initial: usize, accepting: Vec<bool>, delta: Vec<usize>) -> Self {
        Self::try_from_table(alphabet, initial, accepting, delta).expect("malformed transition table")
    }

    pub fn try_from_table(alphabet: Alphabet, initial: usize, accepting: Vec<bool>, delta: Vec<usize>) -> Option<Self> {
        let n = accepting.len();
        let ok = n > 0 && initial < n && delta.len() == n * alphabet.len() && delta.iter().all(|&t| t < n);
        ok.then_some(Dfa { alphabet, initial, accepting, delta })
    }

    pub fn from_fn(
        alphabet: Alphabet,
        num_states: usize,
        initial: usize,
        mut step: impl FnMut(usize, usize) -> usize,
        mut accept: impl FnMut(usize) -> bool,
    ) -> Self {
        let k = alphabet.len();
        let delta = (0..num_states * k).map(|i| step(i / k, i % k)).collect();
        let accepting = (0..num_states).map(&mut accept).collect();
        Self::from_table(alphabet, initial, accepting, delta)
    }

    /// One state accepting everything (or nothing).
    pub fn trivial(alphabet: Alphabet, accepting: bool) -> Self {
        Self::from_fn(alphabet, 1, 0, |_, _| 0, |_| accepting)
    }

    pub fn alphabet(&self) -> &Alphabet {
        &self.alphabet
    }

    pub fn num_states(&self) -> usize {
        self.accepting.len()
    }

    pub fn initial(&self) -> usize {
        self.initial
    }

    pub fn is_accepting(&self, q: usize) -> bool {
        self.accepting[q]
    }

    pub fn accepting_states(&self) -> impl Iterator<Item = usize> + '_ {
        (0..self.num_states()).filter(|&q| self.accepting[q])
    }

    pub fn step(&self, q: usize, a: usize) -> usize {
        self.delta[q * self.alphabet.len() + a]
    }

    pub fn run_indices(&self, from: usize, symbols: &[usize]) -> usize {
        symbols.iter().fold(from, |q, &a| self.step(q, a))
    }

    /// State reached from `from` on `word`; `None` if it leaves the alphabet.
    pub fn run_from(&self, from: usize, word: &[char]) -> Option<usize> {
        let mut q = from;
        for &c in word {
            q = self.step(q, self.alphabet.index_of(c)?);
        }
        Some(q)
    }

    /// Words outside the alphabet are rejected.
    pub fn accepts(&self, word: &str) -> bool {
        let w: Vec<char> = word.chars().collect();
        self.run_from(self.initial, &w).is_some_and(|q| self.accepting[q])
    }

    pub fn to_nfa(&self) -> Nfa {
        let mut nfa = Nfa::new(self.alphabet.clone());
        for q in 0..self.num_states() {
            nfa.add_state(self.accepting[q]);
        }
        for q in 0..self.num_states() {
            for a in 0..self.alphabet.len() {
                nfa.add_transition(q, Some(a), self.step(q, a));
            }
        }
        nfa.add_initial(self.initial);
        nfa
    }

    /// States reachable from the initial state, in BFS order with symbol
    /// order tie-break.
    pub fn reachable_states(&self) -> Vec<usize> {
        let mut seen = vec![false; self.num_states()];
        let mut order = vec![self.initial];
        seen[self.initial] = true;
        let mut i = 0;
        while i < order.len() {
            let q = order[i];
            for a in 0..self.alphabet.len() {
                let t = self.step(q, a);
                if !seen[t] {
                    seen[t] = true;
                    order.push(t);
                }
            }
            i += 1;
        }
        order
    }

    /// Renumbers reachable states in BFS order; unreachable states are
    /// dropped.
    pub fn canonical(&self) -> Dfa {
        let order = self.reachable_states();
        let mut new_id = vec![usize::MAX; self.num_states()];
        for (i, &q) in order.iter().enumerate() {
            new_id[q] = i;
        }
        Dfa::from_fn(
            self.alphabet.clone(),
            order.len(),
            0,
            |q, a| new_id[self.step(order[q], a)],
            |q| self.accepting[order[q]],
        )
    }

    /// Hopcroft partition refinement on the reachable part, followed by
    /// canonical BFS numbering. Language-equal inputs give identical outputs.
    pub fn minimize(&self) -> Dfa {
        let d = self.canonical();
        let n = d.num_states();
        let k = d.alphabet.len();
        let mut inverse = vec![vec![Vec::new(); n]; k];
        for q in 0..n {
            for (a, inv) in inverse.iter_mut().enumerate() {
                inv[d.step(q, a)].push(q);
            }
        }
        let finals: Vec<usize> = (0..n).filter(|&q| d.accepting[q]).collect();
        let others: Vec<usize> = (0..n).filter(|&q| !d.accepting[q]).collect();
        let mut blocks: Vec<Vec<usize>> = Vec::new();
        let mut block_of = vec![0; n];
        for part in [finals, others] {
            if !part.is_empty() {
                for &q in &part {
                    block_of[q] = blocks.len();
                }
                blocks.push(part);
            }
        }
        let mut in_work: Vec<Vec<bool>> = vec![vec![false; k]; blocks.len()];
        let mut work: VecDeque<(usize, usize)> = VecDeque::new();
        if blocks.len() == 2 {
            let smaller = if blocks[0].len() <= blocks[1].len() { 0 } else { 1 };
            for a in 0..k {
                work.push_back((smaller, a));
                in_work[smaller][a] = true;
            }
        }
        while let Some((b, a)) = work.pop_front() {
            in_work[b][a] = false;
            let mut hit: HashMap<usize, Vec<usize>> = HashMap::new();
            for &q in &blocks[b] {
                for &p in &inverse[a][q] {
                    hit.entry(block_of[p]).or_default().push(p);
                }
            }
            let mut touched: Vec<usize> = hit.keys().copied().collect();
            touched.sort_unstable();
            for y in touched {
                let mut inside = hit.remove(&y).unwrap();
                inside.sort_unstable();
                inside.dedup();
                if inside.len() == blocks[y].len() {
                    continue;
                }
                let outside: Vec<usize> =
                    blocks[y].iter().copied().filter(|q| inside.binary_search(q).is_err()).collect();
                let (keep, split) = if inside.len() <= outside.len() { (outside, inside) } else { (inside, outside) };
                let new_block = blocks.len();
                for &q in &split {
                    block_of[q] = new_block;
                }
                blocks[y] = keep;
                blocks.push(split);
                in_work.push(vec![false; k]);
                for c in 0..k {
                    if in_work[y][c] || blocks[new_block].len() <= blocks[y].len() {
                        work.push_back((new_block, c));
                        in_work[new_block][c] = true;
                    } else {
                        work.push_back((y, c));
                        in_work[y][c] = true;
                    }
                }
            }
        }
        let quotient = Dfa::from_fn(
            d.alphabet.clone(),
            blocks.len(),
            block_of[d.initial],
            |b, a| block_of[d.step(blocks[b][0], a)],
            |b| d.accepting[blocks[b][0]],
        );
        quotient.canonical()
    }

    pub fn complement(&self) -> Dfa {
        let mut c = self.clone();
        c.accepting.iter_mut().for_each(|f| *f = !*f);
        c
    }

    /// Reachable product; acceptance is combined with `accept`.
    pub fn product(&self, other: &Dfa, accept: impl Fn(bool, bool) -> bool) -> Result<Dfa, AutomataError> {
        if self.alphabet != other.alphabet {
            return Err(AutomataError::AlphabetMismatch);
        }
        let k = self.alphabet.len();
        let mut index: HashMap<(usize, usize), usize> = HashMap::new();
        let mut pairs = vec![(self.initial, other.initial)];
        index.insert(pairs[0], 0);
        let mut delta = Vec::new();
        let mut i = 0;
        while i < pairs.len() {
            let (p, q) = pairs[i];
            for a in 0..k {
                let next = (self.step(p, a), other.step(q, a));
                let id = *index.entry(next).or_insert_with(|| {
                    pairs.push(next);
                    pairs.len() - 1
                });
                delta.push(id);
            }
            i += 1;
        }
        let accepting = pairs.iter().map(|&(p, q)| accept(self.accepting[p], other.accepting[q])).collect();
        Ok(Dfa::from_table(self.alphabet.clone(), 0, accepting, delta))
    }

    pub fn intersect(&self, other: &Dfa) -> Result<Dfa, AutomataError> {
        self.product(other, |a, b| a && b)
    }

    pub fn union(&self, other: &Dfa) -> Result<Dfa, AutomataError> {
        self.product(other, |a, b| a || b)
    }

    pub fn is_empty(&self) -> bool {
        self.reachable_states().iter().all(|&q| !self.accepting[q])
    }

    /// Lexicographically least among the shortest accepted words.
    pub fn shortest_word(&self) -> Option<String> {
        lex_bfs(
            [self.initial],
            self.alphabet.len(),
            |_| Vec::new(),
            |q, a| vec![self.step(q, a)],
            |q| self.accepting[q],
        )
        .map(|found| self.alphabet.decode(&found.word))
    }

    pub fn equivalent(&self, other: &Dfa) -> Result<Equivalence, AutomataError> {
        let xor = self.product(other, |a, b| a != b)?;
        Ok(match xor.shortest_word() {
            None => Equivalence::Equal,
            Some(w) => Equivalence::Witness(w),
        })
    }

    /// `L(self) ⊆ L(other)`, with a least shortest word of the difference.
    pub fn included_in(&self, other: &Dfa) -> Result<Option<String>, AutomataError> {
        Ok(self.product(other, |a, b| a && !b)?.shortest_word())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sigma(s: &str) -> Alphabet {
        Alphabet::new(s.chars())
    }

    /// #I mod 3 != 0 over {I,M,U}, deliberately built with 6 states.
    pub(crate) fn mod3_six_states() -> Dfa {
        let a = sigma("IMU");
        Dfa::from_fn(a, 6, 0, |q, s| if s == 0 { (q + 1) % 6 } else { q }, |q| q % 3 != 0)
    }

    #[test]
    fn minimize_mod3() {
        let d = mod3_six_states();
        let m = d.minimize();
        assert_eq!(m.num_states(), 3);
        assert_eq!(d.equivalent(&m).unwrap(), Equivalence::Equal);
        assert_eq!(m.minimize(), m);
    }

    #[test]
    fn minimize_drops_unreachable_accepting() {
        let a = sigma("ab");
        let d = Dfa::from_fn(a, 2, 0, |_, _| 0, |q| q == 1);
        let m = d.minimize();
        assert_eq!(m.num_states(), 1);
        assert!(m.is_empty());
    }

    #[test]
    fn intersect_stars() {
        let a = sigma("ab");
        // a* and b*: state 0 loops on own letter, 1 is sink.
        let astar = Dfa::from_fn(a.clone(), 2, 0, |q, s| if q == 0 && s == 0 { 0 } else { 1 }, |q| q == 0);
        let bstar = Dfa::from_fn(a, 2, 0, |q, s| if q == 0 && s == 1 { 0 } else { 1 }, |q| q == 0);
        let both = astar.intersect(&bstar).unwrap();
        assert_eq!(both.shortest_word().as_deref(), Some(""));
        assert!(!both.accepts("a"));
        assert_eq!(astar.complement().complement().equivalent(&astar).unwrap(), Equivalence::Equal);
    }

    #[test]
    fn equivalence_witness() {
        let a = sigma("a");
        let astar = Dfa::trivial(a.clone(), true);
        let aplus = Dfa::from_fn(a, 2, 0, |_, _| 1, |q| q == 1);
        assert_eq!(astar.equivalent(&aplus).unwrap(), Equivalence::Witness(String::new()));
        let other = Dfa::trivial(sigma("b"), true);
        assert_eq!(astar.intersect(&other), Err(AutomataError::AlphabetMismatch));
    }

    #[test]
    fn shortest_bad_token_word() {
        // b n* r over {b,n,r}
        let a = sigma("bnr");
        let d = Dfa::from_fn(
            a,
            4,
            0,
            |q, s| match (q, s) {
                (0, 0) => 1,
                (1, 1) => 1,
                (1, 2) => 2,
                _ => 3,
            },
            |q| q == 2,
        );
        assert_eq!(d.shortest_word().as_deref(), Some("br"));
    }

    #[test]
    fn shortest_word_is_lexicographically_least() {
        // Accepts exactly {"ba", "ab"}; the least is "ab".
        let a = sigma("ab");
        let d = Dfa::from_fn(
            a,
            5,
            0,
            |q, s| match (q, s) {
                (0, 0) => 1,
                (0, 1) => 2,
                (1, 1) => 3,
                (2, 0) => 3,
                _ => 4,
            },
            |q| q == 3,
        );
        assert_eq!(d.shortest_word().as_deref(), Some("ab"));
    }
}
