#![allow(dead_code)]

use hornstr::automata::{Alphabet, Dfa};
use hornstr::chc::{parse_script, ClauseSystem};
use hornstr::oracle::{exact_check, TeacherVerdict};
use rand::Rng;

pub fn bench_text(name: &str) -> String {
    let path = format!("{}/benchmarks/{name}.smt2", env!("CARGO_MANIFEST_DIR"));
    std::fs::read_to_string(&path).unwrap_or_else(|e| panic!("{path}: {e}"))
}

pub fn bench(name: &str) -> ClauseSystem {
    parse_script(&bench_text(name)).unwrap()
}

pub fn mock_solver_command() -> String {
    env!("CARGO_BIN_EXE_horn-str").to_string()
}

/// Every DFA with `n` states and initial state 0, as transition tables.
pub fn for_each_dfa(sigma: &Alphabet, n: usize, mut f: impl FnMut(Dfa) -> bool) -> bool {
    let k = sigma.len();
    let cells = n * k;
    let mut delta = vec![0usize; cells];
    loop {
        for acc in 0..(1u32 << n) {
            let accepting = (0..n).map(|q| acc >> q & 1 == 1).collect();
            if f(Dfa::from_table(sigma.clone(), 0, accepting, delta.clone())) {
                return true;
            }
        }
        // Odometer over transition targets.
        let mut i = 0;
        loop {
            if i == cells {
                return false;
            }
            delta[i] += 1;
            if delta[i] < n {
                break;
            }
            delta[i] = 0;
            i += 1;
        }
    }
}

/// Least state count of an inductive invariant among DFAs with at most
/// `max_n` states, by exhaustive enumeration.
pub fn brute_force_min_invariant(sys: &ClauseSystem, max_n: usize) -> Option<usize> {
    let probe: Vec<String> = sys.alphabet.words_up_to(4);
    let init = sys.init_language();
    let bad = sys.bad_language();
    let init_words: Vec<&String> = probe.iter().filter(|w| init.matches(w, &sys.alphabet)).collect();
    let bad_words: Vec<&String> = probe.iter().filter(|w| bad.matches(w, &sys.alphabet)).collect();
    (1..=max_n).find(|&n| {
        for_each_dfa(&sys.alphabet, n, |d| {
            init_words.iter().all(|w| d.accepts(w))
                && bad_words.iter().all(|w| !d.accepts(w))
                && exact_check(&d, sys).unwrap() == TeacherVerdict::Passed
        })
    })
}

pub fn random_dfa(rng: &mut impl Rng, max_states: usize, max_alpha: usize) -> Dfa {
    let n = rng.gen_range(1..=max_states);
    let k = rng.gen_range(1..=max_alpha);
    let sigma = Alphabet::new("abc".chars().take(k));
    let delta = (0..n * k).map(|_| rng.gen_range(0..n)).collect();
    let accepting = (0..n).map(|_| rng.gen_bool(0.5)).collect();
    Dfa::from_table(sigma, 0, accepting, delta)
}

/// Words over {M, I, U} whose number of I is not a multiple of 3.
pub fn mu_mod3_invariant() -> Dfa {
    let sigma = Alphabet::new("IMU".chars());
    // Symbols in order I, M, U; state = #I mod 3.
    let delta = vec![1, 0, 0, 2, 1, 1, 0, 2, 2];
    Dfa::from_table(sigma, 0, vec![false, true, true], delta)
}
