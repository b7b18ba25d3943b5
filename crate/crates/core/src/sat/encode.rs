use std::collections::HashMap;

use super::{CnfInstance, Sample};
use crate::automata::{Alphabet, AutomataError, Dfa};

/// CNF whose models are the `n`-state DFAs consistent with a sample, plus
/// the variable layout needed to read a DFA back.
#[derive(Debug, Clone)]
pub struct Encoding {
    pub cnf: CnfInstance,
    n: usize,
    alphabet: Alphabet,
    t0: i32,
    f0: i32,
    /// Sample words as symbol sequences, for resolving unused transitions.
    words: Vec<Vec<usize>>,
}

impl Encoding {
    pub fn num_states(&self) -> usize {
        self.n
    }

    /// Variable `t(q, a, p)`: the transition from `q` on `a` goes to `p`.
    pub fn t(&self, q: usize, a: usize, p: usize) -> i32 {
        self.t0 + ((q * self.alphabet.len() + a) * self.n + p) as i32
    }

    /// Variable `f(q)`: `q` is accepting.
    pub fn f(&self, q: usize) -> i32 {
        self.f0 + q as i32
    }

    /// Reads the DFA off a model (indexed by variable, slot 0 unused).
    /// Transitions no sample word uses are sent to state 0, so equal
    /// samples decode to equal machines whatever the solver picked there.
    pub fn decode(&self, model: &[bool]) -> Dfa {
        let (n, k) = (self.n, self.alphabet.len());
        let mut delta = vec![0; n * k];
        for q in 0..n {
            for a in 0..k {
                delta[q * k + a] = (0..n).find(|&p| model[self.t(q, a, p) as usize]).unwrap_or(0);
            }
        }
        let mut used = vec![false; n * k];
        for w in &self.words {
            let mut q = 0;
            for &a in w {
                used[q * k + a] = true;
                q = delta[q * k + a];
            }
        }
        for (d, u) in delta.iter_mut().zip(&used) {
            if !u {
                *d = 0;
            }
        }
        let accepting = (0..n).map(|q| model[self.f(q) as usize]).collect();
        Dfa::from_table(self.alphabet.clone(), 0, accepting, delta)
    }
}

/// Run-variable encoding: `r(u, q)` says the prefix `u` of a sample word
/// ends in `q`. Implications get one auxiliary variable each, true when the
/// premise word is accepted.
pub fn encode(
    sample: &Sample,
    n: usize,
    alphabet: &Alphabet,
    symmetry_breaking: bool,
) -> Result<Encoding, AutomataError> {
    assert!(n >= 1, "at least one state");
    let k = alphabet.len();
    let mut cnf = CnfInstance::new();
    let t0 = cnf.num_vars as i32 + 1;
    cnf.num_vars += n * k * n;
    let f0 = cnf.num_vars as i32 + 1;
    cnf.num_vars += n;

    // Prefix tree of all sample words; node 0 is the empty word.
    let mut children: HashMap<(usize, usize), usize> = HashMap::new();
    let mut edges: Vec<(usize, usize)> = Vec::new();
    let mut node_of: HashMap<&str, usize> = HashMap::new();
    let mut words = Vec::new();
    for w in sample.words() {
        let symbols = alphabet
            .encode(w)
            .ok_or_else(|| AutomataError::SymbolOutsideAlphabet(w.chars().find(|&c| !alphabet.contains(c)).unwrap()))?;
        let mut node = 0;
        for &a in &symbols {
            node = *children.entry((node, a)).or_insert_with(|| {
                edges.push((node, a));
                edges.len()
            });
        }
        node_of.insert(w, node);
        words.push(symbols);
    }
    let r0 = cnf.num_vars as i32 + 1;
    cnf.num_vars += (edges.len() + 1) * n;
    let r = |u: usize, q: usize| r0 + (u * n + q) as i32;
    let enc = Encoding { cnf: CnfInstance::new(), n, alphabet: alphabet.clone(), t0, f0, words };

    for q in 0..n {
        for a in 0..k {
            let lits: Vec<i32> = (0..n).map(|p| enc.t(q, a, p)).collect();
            cnf.exactly_one(&lits);
        }
    }
    cnf.add_clause(vec![r(0, 0)]);
    for q in 1..n {
        cnf.add_clause(vec![-r(0, q)]);
    }
    for (i, &(parent, a)) in edges.iter().enumerate() {
        let u = i + 1;
        for q in 0..n {
            for p in 0..n {
                cnf.add_clause(vec![-r(parent, q), -enc.t(q, a, p), r(u, p)]);
            }
        }
        for q in 0..n {
            for p in q + 1..n {
                cnf.add_clause(vec![-r(u, q), -r(u, p)]);
            }
        }
    }
    for w in sample.pos.keys() {
        let u = node_of[w.as_str()];
        for q in 0..n {
            cnf.add_clause(vec![-r(u, q), enc.f(q)]);
        }
    }
    for w in sample.neg.keys() {
        let u = node_of[w.as_str()];
        for q in 0..n {
            cnf.add_clause(vec![-r(u, q), -enc.f(q)]);
        }
    }
    for (w_in, w_out, _) in &sample.imp {
        let (u, v) = (node_of[w_in.as_str()], node_of[w_out.as_str()]);
        let premise = cnf.new_var();
        for q in 0..n {
            cnf.add_clause(vec![-r(u, q), -enc.f(q), premise]);
            cnf.add_clause(vec![-premise, -r(v, q), enc.f(q)]);
        }
    }
    if symmetry_breaking {
        break_symmetries(&mut cnf, &enc);
    }
    Ok(Encoding { cnf, ..enc })
}

/// Forces states to be numbered in BFS order: each state `j > 0` has a
/// parent, the least state with an edge into `j`, and parents are
/// non-decreasing in `j`. Every DFA whose states are all reachable has
/// exactly one such numbering up to the order of sibling symbols.
fn break_symmetries(cnf: &mut CnfInstance, enc: &Encoding) {
    let (n, k) = (enc.n, enc.alphabet.len());
    if n < 2 {
        return;
    }
    // edge[i][j]: some transition from i to j (i < j).
    let mut edge = vec![vec![0; n]; n];
    for i in 0..n {
        for j in i + 1..n {
            let e = cnf.new_var();
            edge[i][j] = e;
            let mut any = vec![-e];
            for a in 0..k {
                cnf.add_clause(vec![-enc.t(i, a, j), e]);
                any.push(enc.t(i, a, j));
            }
            cnf.add_clause(any);
        }
    }
    // parent[j][i] for i < j.
    let mut parent = vec![vec![0; n]; n];
    for j in 1..n {
        let mut some = Vec::new();
        for i in 0..j {
            let p = cnf.new_var();
            parent[j][i] = p;
            some.push(p);
            cnf.add_clause(vec![-p, edge[i][j]]);
            for l in 0..i {
                cnf.add_clause(vec![-p, -edge[l][j]]);
            }
            let mut def = vec![p, -edge[i][j]];
            def.extend((0..i).map(|l| edge[l][j]));
            cnf.add_clause(def);
        }
        cnf.add_clause(some);
    }
    for j in 1..n - 1 {
        for i in 0..j {
            for l in 0..i {
                cnf.add_clause(vec![-parent[j][i], -parent[j + 1][l]]);
            }
        }
    }
}
