//! Checks a hand-written candidate invariant with the exact teacher and
//! with the bounded one, then repairs it.
//!
//! cargo run --example check_invariant

use hornstr::automata::{regex_to_nfa, Regex};
use hornstr::chc::parse_script;
use hornstr::oracle::{bounded_check, exact_check_all, TeacherVerdict};

const PARITY: &str = include_str!("../benchmarks/parity.smt2");

fn main() {
    let sys = parse_script(PARITY).expect("benchmark parses");
    // Words of a's only: initial and closed, but it meets the bad words.
    let loose = Regex::star(Regex::Sym('a'));
    // Even runs of a's.
    let tight = Regex::star(Regex::literal("aa"));
    for (name, re) in [("a*", loose), ("(aa)*", tight)] {
        let h = regex_to_nfa(&re, &sys.alphabet).unwrap().determinize().unwrap().minimize();
        println!("candidate {name}:");
        for r in exact_check_all(&h, &sys).unwrap() {
            match r.cex {
                Some(c) => println!("  clause {} fails: {c}", r.clause_index),
                None => println!("  clause {} holds", r.clause_index),
            }
        }
        let bounded = match bounded_check(&h, &sys, 6) {
            TeacherVerdict::Passed => "passes".to_string(),
            TeacherVerdict::Cex(c) => format!("fails: {c}"),
        };
        println!("  up to length 6 it {bounded}");
    }
}
