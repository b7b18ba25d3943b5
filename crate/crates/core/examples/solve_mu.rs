//! Proves that MU is not derivable in Hofstadter's MIU system by learning a
//! three-state invariant, printing each hypothesis the teacher rejects.
//!
//! cargo run --example solve_mu

use hornstr::chc::parse_script;
use hornstr::engine::{emit, solve_observed, RunConfig, TeacherKind, Verdict};
use hornstr::oracle::TeacherVerdict;

const MU: &str = include_str!("../benchmarks/mu.smt2");

fn main() {
    let sys = parse_script(MU).expect("benchmark parses");
    println!("alphabet {}, {} rules", sys.alphabet, sys.trans_clauses.len());
    for (i, rule) in sys.rules() {
        println!("  clause {i}: {rule}");
    }
    let cfg = RunConfig { teacher: TeacherKind::Exact, ..RunConfig::default() };
    let report = solve_observed(&sys, &cfg, &mut |r| match &r.verdict {
        TeacherVerdict::Cex(c) => println!("round {:2}: {} states, {c}", r.index, r.learner_size),
        TeacherVerdict::Passed => println!("round {:2}: {} states, inductive", r.index, r.learner_size),
    });
    if let Verdict::Safe { regex, .. } = &report.verdict {
        println!("invariant: {regex}");
    }
    print!("{}", emit(&report.verdict, &sys));
}
