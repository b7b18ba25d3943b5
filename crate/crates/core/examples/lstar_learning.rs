//! Angluin-style learning of "the number of a's is divisible by 3" from
//! membership and equivalence queries.
//!
//! cargo run --example lstar_learning

use std::cell::Cell;

use hornstr::automata::{Alphabet, Dfa, Equivalence};
use hornstr::lstar::learn;

fn main() {
    let sigma = Alphabet::new("ab".chars());
    let target = Dfa::from_fn(sigma.clone(), 3, 0, |q, a| if a == 0 { (q + 1) % 3 } else { q }, |q| q == 0);

    let asked = Cell::new(0);
    let mut mem = |w: &str| {
        asked.set(asked.get() + 1);
        Ok(target.accepts(w))
    };
    let mut equiv = |h: &Dfa| match h.equivalent(&target).unwrap() {
        Equivalence::Equal => None,
        Equivalence::Witness(w) => {
            println!("hypothesis with {} states rejected on {w:?}", h.num_states());
            Some(w)
        }
    };
    let (h, rounds) = learn(&sigma, &mut mem, &mut equiv, 20).expect("target is regular");
    println!("learned {} states in {rounds} equivalence and {} membership queries", h.num_states(), asked.get());
    print!("{}", h.to_dot("mod3"));
}
