//! Smallest automaton consistent with positive, negative and implication
//! examples, as the SAT learner computes it.
//!
//! cargo run --example sat_learner

use hornstr::automata::{dfa_to_regex, simplify_regex, Alphabet};
use hornstr::oracle::{CexKind, Counterexample};
use hornstr::sat::{consistent, next_hypothesis, Sample};

fn main() {
    let sigma = Alphabet::new("IMU".chars());
    let mut sample = Sample::new();
    let evidence = [
        (CexKind::Positive("MI".into()), 1),
        (CexKind::Negative("MU".into()), 6),
        (CexKind::Implication { w_in: "MI".into(), w_out: "MII".into() }, 3),
        (CexKind::Implication { w_in: "MII".into(), w_out: "MIIII".into() }, 3),
        (CexKind::Negative("MIII".into()), 6),
    ];
    for (kind, clause_index) in evidence {
        sample.add(&Counterexample { kind, clause_index });
        let (h, n) = next_hypothesis(&sample, &sigma, 1, 8).expect("sample is consistent");
        assert!(consistent(&h, &sample));
        println!("{:2} constraints -> {n} states: {}", sample.len(), simplify_regex(&dfa_to_regex(&h.minimize())));
    }
    // An implication from a positive word into a negative one admits no
    // automaton at all; the sample reports the chain.
    sample.add(&Counterexample {
        kind: CexKind::Implication { w_in: "MIIII".into(), w_out: "MIII".into() },
        clause_index: 4,
    });
    if let Some(c) = sample.contradiction() {
        println!("contradiction: {:?} then negative by clause {}", c.chain, c.neg_clause);
    }
}
