//! Regex compilation, minimization, language comparison and post-images of
//! a rewrite rule.
//!
//! cargo run --example automata_ops

use hornstr::automata::{dfa_to_regex, post_image, regex_to_nfa, rule_violation, simplify_regex, Alphabet, Regex};
use hornstr::rule::{RewriteRule, Segment};

fn main() {
    let sigma = Alphabet::new("bnr".chars());
    // r n (n n)* b: the token pair at odd distance.
    let re = Regex::concat(vec![Regex::literal("rn"), Regex::star(Regex::literal("nn")), Regex::Sym('b')]);
    let nfa = regex_to_nfa(&re, &sigma).unwrap();
    let dfa = nfa.determinize().unwrap();
    let min = dfa.minimize();
    println!("{re}: nfa {} states, dfa {}, minimal {}", nfa.num_states(), dfa.num_states(), min.num_states());
    println!("shortest word {:?}", min.shortest_word());
    println!("back to a regex: {}", simplify_regex(&dfa_to_regex(&min)));

    // x "rn" y -> x "nr" y moves r one cell right.
    let rule = RewriteRule::new(
        vec![Segment::Var(0), Segment::Const("rn".into()), Segment::Var(1)],
        vec![Segment::Var(0), Segment::Const("nr".into()), Segment::Var(1)],
    )
    .unwrap();
    let image = post_image(&min, &rule).unwrap().determinize().unwrap().minimize();
    println!("image under {rule}: {}", simplify_regex(&dfa_to_regex(&image)));
    match min.included_in(&image).unwrap() {
        Some(w) => println!("{w:?} is initial but not in the image"),
        None => println!("initial words are all images"),
    }
    if let Some(v) = rule_violation(&min, &rule).unwrap() {
        println!("not closed: {:?} -> {:?} with x, y = {:?}", v.w_in, v.w_out, v.assignment);
    }
}
