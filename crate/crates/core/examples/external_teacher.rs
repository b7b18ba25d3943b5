//! Solves MU with every equivalence query sent to a solver subprocess over
//! SMT-LIB. Without an argument the example starts itself as the solver,
//! answering with the built-in bounded responder; pass a solver command
//! line (for instance `cvc5 --lang smt2 --incremental`) to use a real one.
//!
//! cargo run --example external_teacher [SOLVER ARGS...]

use std::time::Duration;

use hornstr::chc::parse_script;
use hornstr::engine::{emit, solve_observed, RunConfig, TeacherKind};
use hornstr::smtlib::{serve, SolverConfig};

const MU: &str = include_str!("../benchmarks/mu.smt2");

fn main() {
    let args: Vec<String> = std::env::args().skip(1).collect();
    if args.first().map(String::as_str) == Some("--serve") {
        serve(std::io::stdin().lock(), std::io::stdout().lock(), 8).expect("stdio");
        return;
    }
    let solver = match args.split_first() {
        Some((cmd, rest)) => SolverConfig::new(cmd.clone(), rest.to_vec()),
        None => {
            let me = std::env::current_exe().expect("own path").to_string_lossy().into_owned();
            SolverConfig::new(me, vec!["--serve".into()])
        }
    };
    let sys = parse_script(MU).expect("benchmark parses");
    let cfg = RunConfig {
        teacher: TeacherKind::External,
        solver: Some(solver),
        timeout: Duration::from_secs(120),
        ..RunConfig::default()
    };
    let report = solve_observed(&sys, &cfg, &mut |r| println!("round {:2}: {:?}", r.index, r.verdict));
    for n in &report.notes {
        println!("note: {n}");
    }
    print!("{}", emit(&report.verdict, &sys));
}
