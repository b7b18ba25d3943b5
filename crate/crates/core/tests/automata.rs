mod common;

use hornstr::automata::{
    dfa_to_regex, post_image, regex_to_nfa, rule_violation, simplify_regex, Alphabet, Dfa, Equivalence, Regex,
};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use common::*;

fn regex_strategy() -> impl Strategy<Value = Regex> {
    let leaf = prop_oneof![
        Just(Regex::Sym('a')),
        Just(Regex::Sym('b')),
        Just(Regex::Epsilon),
        Just(Regex::None),
        Just(Regex::AllChar),
        Just(Regex::range('a', 'b')),
    ];
    leaf.prop_recursive(4, 24, 3, |inner| {
        prop_oneof![
            proptest::collection::vec(inner.clone(), 2..4).prop_map(Regex::concat),
            proptest::collection::vec(inner.clone(), 2..4).prop_map(Regex::union),
            inner.clone().prop_map(Regex::star),
            inner.clone().prop_map(Regex::plus),
            inner.prop_map(Regex::opt),
        ]
    })
}

fn dfa_strategy(max_states: usize) -> impl Strategy<Value = Dfa> {
    (any::<u64>()).prop_map(move |seed| random_dfa(&mut ChaCha8Rng::seed_from_u64(seed), max_states, 3))
}

fn random_dfa_over(rng: &mut ChaCha8Rng, sigma: &Alphabet, max_states: usize) -> Dfa {
    use rand::Rng;
    let n = rng.gen_range(1..=max_states);
    let delta = (0..n * sigma.len()).map(|_| rng.gen_range(0..n)).collect();
    let accepting = (0..n).map(|_| rng.gen_bool(0.5)).collect();
    Dfa::from_table(sigma.clone(), 0, accepting, delta)
}

fn sigma_ab() -> Alphabet {
    Alphabet::new("ab".chars())
}

/// First word in shortlex order on which `f` holds.
fn first_word(sigma: &Alphabet, max_len: usize, f: impl Fn(&str) -> bool) -> Option<String> {
    sigma.words_up_to(max_len).into_iter().find(|w| f(w))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn thompson_and_subsets_match_derivatives(r in regex_strategy()) {
        let sigma = sigma_ab();
        let nfa = regex_to_nfa(&r, &sigma).unwrap();
        let dfa = nfa.determinize().unwrap();
        let min = dfa.minimize();
        for w in sigma.words_up_to(6) {
            let expected = r.matches(&w, &sigma);
            prop_assert_eq!(nfa.accepts(&w), expected, "{} on {:?}", r, w);
            prop_assert_eq!(dfa.accepts(&w), expected);
            prop_assert_eq!(min.accepts(&w), expected);
        }
    }

    #[test]
    fn simplification_preserves_language(r in regex_strategy()) {
        let sigma = sigma_ab();
        let s = simplify_regex(&r);
        prop_assert!(s.size() <= r.size());
        for w in sigma.words_up_to(6) {
            prop_assert_eq!(s.matches(&w, &sigma), r.matches(&w, &sigma), "{} vs {} on {:?}", r, s, w);
        }
    }

    #[test]
    fn minimize_is_canonical(d in dfa_strategy(6)) {
        let m = d.minimize();
        prop_assert_eq!(&m.minimize(), &m);
        // A language-equal but structurally different machine.
        let other = d.to_nfa().determinize().unwrap();
        prop_assert_eq!(&other.minimize(), &m);
        prop_assert_eq!(d.equivalent(&m).unwrap(), Equivalence::Equal);
        for w in d.alphabet().words_up_to(7) {
            prop_assert_eq!(m.accepts(&w), d.accepts(&w));
        }
    }

    #[test]
    fn equivalence_witness_is_least_difference(a in dfa_strategy(5), seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut b = random_dfa(&mut rng, 5, 3);
        if b.alphabet() != a.alphabet() {
            b = Dfa::trivial(a.alphabet().clone(), seed % 2 == 0);
        }
        let sigma = a.alphabet().clone();
        // Two machines of at most 5 states each that differ do so on a
        // word of length at most 8.
        let brute = first_word(&sigma, 8, |w| a.accepts(w) != b.accepts(w));
        match a.equivalent(&b).unwrap() {
            Equivalence::Equal => prop_assert_eq!(brute, None),
            Equivalence::Witness(w) => prop_assert_eq!(brute, Some(w)),
        }
    }

    #[test]
    fn boolean_operations(a in dfa_strategy(4), seed in any::<u64>()) {
        let b = random_dfa_over(&mut ChaCha8Rng::seed_from_u64(seed), a.alphabet(), 4);
        let i = a.intersect(&b).unwrap();
        let u = a.union(&b).unwrap();
        let c = a.complement();
        for w in a.alphabet().words_up_to(6) {
            prop_assert_eq!(i.accepts(&w), a.accepts(&w) && b.accepts(&w));
            prop_assert_eq!(u.accepts(&w), a.accepts(&w) || b.accepts(&w));
            prop_assert_eq!(c.accepts(&w), !a.accepts(&w));
        }
        prop_assert_eq!(c.complement().equivalent(&a).unwrap(), Equivalence::Equal);
        let sigma = a.alphabet().clone();
        prop_assert_eq!(a.shortest_word(), first_word(&sigma, 6, |w| a.accepts(w)));
        let outside = |w: &str| a.accepts(w) && !b.accepts(w);
        match a.included_in(&b).unwrap() {
            Some(w) => {
                let n = w.chars().count();
                prop_assert!(outside(&w));
                prop_assert_eq!(first_word(&sigma, n, outside), Some(w));
            }
            None => prop_assert_eq!(first_word(&sigma, 8, outside), None),
        }
    }

    #[test]
    fn state_elimination_round_trips(d in dfa_strategy(6)) {
        let r = dfa_to_regex(&d);
        let back = regex_to_nfa(&r, d.alphabet()).unwrap().determinize().unwrap();
        prop_assert_eq!(back.equivalent(&d).unwrap(), Equivalence::Equal);
        let s = simplify_regex(&r);
        let back = regex_to_nfa(&s, d.alphabet()).unwrap().determinize().unwrap();
        prop_assert_eq!(back.equivalent(&d).unwrap(), Equivalence::Equal);
    }
}

/// Post-images of every benchmark rule agree with applying the rule to
/// each word of the hypothesis, and violations are found exactly when
/// enumeration finds one.
#[test]
fn post_image_matches_rule_application() {
    const OUT_LEN: usize = 4;
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for name in ["mu", "eqdist", "token_pass", "coffee_can", "parity", "anbn"] {
        let sys = bench(name);
        let sigma = &sys.alphabet;
        // Longest source whose image under a copy-free rule can have
        // length OUT_LEN.
        let shrink = sys
            .rules()
            .map(|(_, r)| {
                let len = |f: Vec<Vec<char>>| f.iter().map(Vec::len).sum::<usize>();
                len(r.lhs_frames()).saturating_sub(r.rhs_frames().map(len).unwrap_or(usize::MAX))
            })
            .max()
            .unwrap_or(0);
        let sources = sigma.words_up_to(OUT_LEN + shrink);
        for _ in 0..4 {
            let h = random_dfa_over(&mut rng, sigma, 3);
            for (idx, rule) in sys.rules() {
                let mut image: Vec<String> =
                    sources.iter().filter(|u| h.accepts(u)).flat_map(|u| rule.apply(u)).collect();
                image.sort();
                image.dedup();
                match post_image(&h, rule) {
                    Ok(nfa) => {
                        for w in sigma.words_up_to(OUT_LEN) {
                            assert_eq!(nfa.accepts(&w), image.contains(&w), "{name} clause {idx} on {w:?}");
                        }
                    }
                    Err(_) => assert!(!rule.is_copy_free(), "{name} clause {idx}"),
                }
                // Copies and deletions included.
                let brute = image.iter().any(|w| !h.accepts(w));
                match rule_violation(&h, rule).unwrap() {
                    Some(v) => {
                        assert!(h.accepts(&v.w_in) && !h.accepts(&v.w_out), "{name} clause {idx}");
                        assert!(rule.relates(&v.w_in, &v.w_out));
                        assert_eq!(rule.instantiate(&v.assignment), (v.w_in.clone(), v.w_out.clone()));
                    }
                    None => assert!(!brute, "{name} clause {idx}: missed violation"),
                }
            }
        }
    }
}

#[test]
fn mu_mod3_minimizes_to_three_states() {
    let sigma = Alphabet::new("IMU".chars());
    // Six states: #I mod 3, doubled by a parity bit on M that does not
    // affect acceptance.
    let delta_of = |q: usize, a: usize| {
        let (m, p) = (q % 3, q / 3);
        match a {
            0 => (m + 1) % 3 + 3 * p,
            1 => m + 3 * (1 - p),
            _ => q,
        }
    };
    let d = Dfa::from_fn(sigma, 6, 0, delta_of, |q| q % 3 != 0);
    let m = d.minimize();
    assert_eq!(m.num_states(), 3);
    assert_eq!(m.equivalent(&mu_mod3_invariant()).unwrap(), Equivalence::Equal);
}

#[test]
fn concrete_queries() {
    let sigma = Alphabet::new("bnr".chars());
    let bnr = Regex::concat(vec![Regex::Sym('b'), Regex::star(Regex::Sym('n')), Regex::Sym('r')]);
    let d = regex_to_nfa(&bnr, &sigma).unwrap().determinize().unwrap();
    assert_eq!(d.shortest_word().as_deref(), Some("br"));

    let sigma = Alphabet::new("a".chars());
    let star = regex_to_nfa(&Regex::star(Regex::Sym('a')), &sigma).unwrap().determinize().unwrap();
    let plus = regex_to_nfa(&Regex::concat(vec![Regex::star(Regex::Sym('a')), Regex::Sym('a')]), &sigma)
        .unwrap()
        .determinize()
        .unwrap();
    assert_eq!(star.equivalent(&plus).unwrap(), Equivalence::Witness(String::new()));
    assert_eq!(plus.included_in(&star).unwrap(), None);
    assert_eq!(star.included_in(&plus).unwrap(), Some(String::new()));
}
