mod common;

use std::cell::{Cell, RefCell};
use std::collections::HashSet;

use hornstr::automata::{Alphabet, Dfa, Equivalence};
use hornstr::lstar::{learn, resolve_implication, LstarError, ObservationTable, Resolution};
use hornstr::oracle::{Membership, ReachConfig, Reachability};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use common::*;

/// Learns `target` exactly; panics if the membership oracle is asked the
/// same word twice.
fn learn_target(target: &Dfa) -> (Dfa, usize, usize) {
    let asked = RefCell::new(HashSet::new());
    let mut mem = |w: &str| {
        assert!(asked.borrow_mut().insert(w.to_string()), "{w:?} asked twice");
        Ok(target.accepts(w))
    };
    let mut equiv = |h: &Dfa| match h.equivalent(target).unwrap() {
        Equivalence::Equal => None,
        Equivalence::Witness(w) => Some(w),
    };
    let (h, eqs) = learn(target.alphabet(), &mut mem, &mut equiv, 64).unwrap();
    let queries = asked.borrow().len();
    (h, eqs, queries)
}

#[test]
fn counting_modulo_three() {
    let sigma = Alphabet::new("ab".chars());
    let target = Dfa::from_fn(sigma.clone(), 3, 0, |q, a| if a == 0 { (q + 1) % 3 } else { q }, |q| q == 0);
    let (h, _, _) = learn_target(&target);
    assert_eq!(h.num_states(), 3);
    assert_eq!(h.equivalent(&target).unwrap(), Equivalence::Equal);

    let mut table = ObservationTable::new(sigma);
    let mut mem = |w: &str| Ok(w.matches('a').count().is_multiple_of(3));
    table.close_and_make_consistent(&mut mem).unwrap();
    assert!(table.is_closed_and_consistent());
    // With the single column for the empty suffix only two rows differ;
    // the third shows up once a counterexample is processed.
    let first = table.hypothesis().unwrap();
    assert_eq!(first.num_states(), 2);
    let Equivalence::Witness(cex) = first.equivalent(&target).unwrap() else { panic!("hypothesis already exact") };
    table.process_counterexample(&cex, &mut mem).unwrap();
    assert_eq!(table.hypothesis().unwrap().equivalent(&target).unwrap(), Equivalence::Equal);
    let rows: HashSet<Vec<bool>> = table.prefixes().iter().map(|u| table.row(u)).collect();
    assert_eq!(rows.len(), 3);
}

#[test]
fn recorded_answers_conflict() {
    let mut table = ObservationTable::new(Alphabet::new("ab".chars()));
    table.record("ab", true).unwrap();
    table.record("ab", true).unwrap();
    assert_eq!(table.record("ab", false), Err(LstarError::Conflict { word: "ab".into(), cached: true, new: false }));
    assert_eq!(table.cached("ab"), Some(true));
}

#[test]
fn round_limit_is_reported() {
    let sigma = Alphabet::new("a".chars());
    let mut mem = |w: &str| Ok(w.len().is_multiple_of(2));
    // An equivalence oracle that never agrees.
    let mut equiv = |_: &Dfa| Some("a".repeat(5));
    assert_eq!(learn(&sigma, &mut mem, &mut equiv, 3).unwrap_err(), LstarError::RoundLimit(3));
}

#[test]
fn implication_resolution() {
    let mu = bench("mu");
    let reach = Reachability::new(&mu, ReachConfig::default());
    let calls = Cell::new(0);
    let mut oracle = |w: &str| {
        calls.set(calls.get() + 1);
        reach.member(w)
    };
    match resolve_implication("MI", "MIU", false, &mut oracle) {
        Resolution::Positive(w, Some(d)) => {
            assert_eq!(w, "MIU");
            assert_eq!(d.last(), "MI");
        }
        other => panic!("{other:?}"),
    }
    assert_eq!(resolve_implication("UM", "UMU", false, &mut oracle), Resolution::Negative("UM".into()));
    assert_eq!(calls.get(), 2);
    assert_eq!(resolve_implication("anything", "MIU", true, &mut oracle), Resolution::Positive("MIU".into(), None));
    assert_eq!(calls.get(), 2);
    let mut unsure = |_: &str| Membership::Inconclusive;
    assert_eq!(resolve_implication("MI", "MIU", false, &mut unsure), Resolution::Inconclusive);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn learns_minimal_automaton(seed in any::<u64>()) {
        let target = random_dfa(&mut ChaCha8Rng::seed_from_u64(seed), 6, 3);
        let (h, eqs, _) = learn_target(&target);
        let min = target.minimize();
        prop_assert_eq!(h.equivalent(&target).unwrap(), Equivalence::Equal);
        prop_assert_eq!(h.num_states(), min.num_states());
        // Each counterexample adds at least one state.
        prop_assert!(eqs <= min.num_states());
    }
}
