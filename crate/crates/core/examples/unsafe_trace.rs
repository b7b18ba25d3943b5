//! Finds a derivation reaching a bad word and replays it step by step.
//!
//! cargo run --example unsafe_trace

use hornstr::chc::parse_script;
use hornstr::engine::{solve, RunConfig, TeacherKind, Verdict};
use hornstr::oracle::{Membership, ReachConfig, Reachability};

const MU_UNSAFE: &str = include_str!("../benchmarks/mu_unsafe.smt2");

fn main() {
    let sys = parse_script(MU_UNSAFE).expect("benchmark parses");
    let cfg = RunConfig { teacher: TeacherKind::Exact, ..RunConfig::default() };
    let Verdict::Unsafe(trace) = solve(&sys, &cfg) else {
        panic!("the variant is expected to be unsafe");
    };
    for (k, (w, clause)) in trace.derivation.steps.iter().enumerate() {
        println!("step {k}: {w:<6} via clause {clause}");
    }
    println!("ends in bad clause {}", trace.bad_clause);
    trace.replay(&sys).expect("every step is checked against its clause");

    // The membership oracle behind the trace, asked directly.
    let reach = Reachability::new(&sys, ReachConfig::default());
    for w in ["MIIU", "MU", "UM"] {
        let answer = match reach.member(w) {
            Membership::Reachable(d) => format!("reachable in {} steps", d.steps.len() - 1),
            Membership::Unreachable => "unreachable".into(),
            Membership::Inconclusive => "unknown".into(),
        };
        println!("{w:>5}: {answer}");
    }
}
