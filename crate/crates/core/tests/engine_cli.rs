mod common;

use std::path::Path;
use std::process::{Command, Output};
use std::time::Duration;

use hornstr::automata::{regex_to_nfa, Dfa, Equivalence};
use hornstr::chc::{parse_regex, ClauseSystem};
use hornstr::engine::{emit, exit_code, solve, solve_observed, LearnerKind, RunConfig, TeacherKind, Verdict};
use hornstr::oracle::{bounded_check, exact_check, TeacherVerdict};
use hornstr::sexp::parse_all;

use common::*;

fn exact(learner: LearnerKind) -> RunConfig {
    RunConfig { learner, teacher: TeacherKind::Exact, ..RunConfig::default() }
}

fn bench_path(name: &str) -> String {
    format!("{}/benchmarks/{name}.smt2", env!("CARGO_MANIFEST_DIR"))
}

fn cli(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_horn-str")).args(args).output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn write_mock_config(dir: &Path) -> String {
    let path = dir.join("mock.cfg");
    std::fs::write(&path, format!("command={}\nargs=--serve-smtlib --serve-bound 8\n", mock_solver_command())).unwrap();
    path.to_string_lossy().into_owned()
}

/// The regex inside `(define-fun p ((w String)) Bool (str.in_re w RE))`.
fn emitted_invariant(text: &str, sys: &ClauseSystem) -> Dfa {
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("sat"));
    let forms = parse_all(&lines.collect::<Vec<_>>().join("\n")).unwrap();
    let def = forms[0].list().unwrap();
    assert_eq!(def[0].atom(), Some("define-fun"));
    assert_eq!(def[1].atom(), Some(sys.predicate_name.as_str()));
    let body = def[4].list().unwrap();
    assert_eq!(body[0].atom(), Some("str.in_re"));
    let re = parse_regex(&body[2]).unwrap();
    regex_to_nfa(&re, &sys.alphabet).unwrap().determinize().unwrap()
}

/// Printed MU answers are inductive and as small as the minimal one.
fn assert_mu_invariant(text: &str) {
    let mu = bench("mu");
    let dfa = emitted_invariant(text, &mu);
    assert_eq!(exact_check(&dfa, &mu).unwrap(), TeacherVerdict::Passed);
    assert_eq!(dfa.minimize().num_states(), mu_mod3_invariant().num_states());
}

#[test]
fn safe_results_are_invariants() {
    for name in ["mu", "token_pass", "coffee_can", "parity", "anbn"] {
        let sys = bench(name);
        let v = solve(&sys, &exact(LearnerKind::Sat));
        let Verdict::Safe { dfa, regex, learner_size } = &v else { panic!("{name}: {v:?}") };
        assert!(dfa.num_states() <= *learner_size);
        assert_eq!(exact_check(dfa, &sys).unwrap(), TeacherVerdict::Passed, "{name}");
        assert_eq!(bounded_check(dfa, &sys, 7), TeacherVerdict::Passed, "{name}");
        let from_regex = regex_to_nfa(regex, &sys.alphabet).unwrap().determinize().unwrap();
        assert_eq!(from_regex.equivalent(dfa).unwrap(), Equivalence::Equal);
        let printed = emitted_invariant(&emit(&v, &sys), &sys);
        assert_eq!(printed.equivalent(dfa).unwrap(), Equivalence::Equal, "{name}");
        assert_eq!(exit_code(&v), 0);
    }
}

#[test]
fn runs_are_deterministic() {
    let sys = bench("mu");
    let mut first = Vec::new();
    let a =
        solve_observed(&sys, &exact(LearnerKind::Sat), &mut |r| first.push((r.hypothesis.clone(), r.verdict.clone())));
    let mut second = Vec::new();
    let b =
        solve_observed(&sys, &exact(LearnerKind::Sat), &mut |r| second.push((r.hypothesis.clone(), r.verdict.clone())));
    assert_eq!(first, second);
    assert_eq!(a.rounds, b.rounds);
    assert_eq!(emit(&a.verdict, &sys), emit(&b.verdict, &sys));
}

#[test]
fn unsafe_trace_replays() {
    let sys = bench("mu_unsafe");
    let v = solve(&sys, &exact(LearnerKind::Sat));
    let Verdict::Unsafe(trace) = &v else { panic!("{v:?}") };
    trace.replay(&sys).unwrap();
    assert_eq!(exit_code(&v), 1);
    let text = emit(&v, &sys);
    assert!(text.starts_with("unsat\n"));
    assert_eq!(text.lines().filter(|l| l.starts_with("; step")).count(), trace.derivation.steps.len());
}

#[test]
fn budgets_give_unknown() {
    let sys = bench("mu");
    let v = solve(&sys, &RunConfig { iteration_cap: 0, ..exact(LearnerKind::Sat) });
    match &v {
        Verdict::Unknown { reason, .. } => assert_eq!(reason, "budget"),
        other => panic!("{other:?}"),
    }
    assert_eq!(exit_code(&v), 2);
    assert_eq!(emit(&v, &sys), "unknown\n; budget\n");

    let v = solve(&sys, &RunConfig { timeout: Duration::from_millis(1), ..exact(LearnerKind::Lstar) });
    assert!(matches!(v, Verdict::Unknown { .. }), "{v:?}");

    // Two states cannot separate MI from MU under the MU rules.
    let v = solve(&sys, &RunConfig { max_states: 2, ..exact(LearnerKind::Sat) });
    assert!(matches!(v, Verdict::Unknown { .. }), "{v:?}");
}

#[test]
fn lstar_learner() {
    for name in ["token_pass", "coffee_can"] {
        let sys = bench(name);
        let v = solve(&sys, &RunConfig { timeout: Duration::from_secs(20), ..exact(LearnerKind::Lstar) });
        let Verdict::Safe { dfa, .. } = &v else { panic!("{name}: {v:?}") };
        assert_eq!(exact_check(dfa, &sys).unwrap(), TeacherVerdict::Passed);
    }
    let sys = bench("mu_unsafe");
    let v = solve(&sys, &exact(LearnerKind::Lstar));
    let Verdict::Unsafe(trace) = &v else { panic!("{v:?}") };
    trace.replay(&sys).unwrap();
}

#[test]
fn hybrid_teacher_falls_back() {
    let sys = bench("mu");
    let broken = hornstr::smtlib::SolverConfig::new("/nonexistent/solver", Vec::new());
    let cfg = RunConfig { teacher: TeacherKind::Hybrid, solver: Some(broken.clone()), ..RunConfig::default() };
    let report = solve_observed(&sys, &cfg, &mut |_| {});
    assert!(report.verdict.is_safe());
    assert!(report.notes.iter().any(|n| n.contains("external solver")), "{:?}", report.notes);

    let cfg = RunConfig { teacher: TeacherKind::External, solver: Some(broken), ..RunConfig::default() };
    assert!(matches!(solve(&sys, &cfg), Verdict::Unknown { .. }));
}

#[test]
fn query_dumping() {
    let sys = bench("token_pass");
    let dir = tempfile::tempdir().unwrap();
    let cfg =
        RunConfig { dump_dir: Some(dir.path().to_path_buf()), benchmark: "tok".into(), ..exact(LearnerKind::Sat) };
    let report = solve_observed(&sys, &cfg, &mut |_| {});
    assert!(report.verdict.is_safe());
    let files: Vec<_> = std::fs::read_dir(dir.path()).unwrap().collect();
    // Four clauses per round.
    assert_eq!(files.len(), report.dumped);
    assert_eq!(report.dumped, 4 * report.rounds);

    let report = solve_observed(&sys, &exact(LearnerKind::Sat), &mut |_| {});
    assert_eq!(report.dumped, 0);
}

#[test]
fn cli_exit_codes() {
    let o = cli(&["--teacher", "exact", &bench_path("mu")]);
    assert_eq!(o.status.code(), Some(0));
    assert_mu_invariant(&stdout(&o));

    let o = cli(&["--teacher", "exact", &bench_path("mu_unsafe")]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).starts_with("unsat\n; step 0: MI via clause 1\n; step 1: MIU via clause 2\n"), "{}", stdout(&o));

    let o = cli(&["--iteration-cap", "0", &bench_path("mu")]);
    assert_eq!(o.status.code(), Some(2));
    assert_eq!(stdout(&o), "unknown\n; budget\n");

    assert_eq!(cli(&["/nonexistent/file.smt2"]).status.code(), Some(3));
    let dir = tempfile::tempdir().unwrap();
    let garbage = dir.path().join("bad.smt2");
    std::fs::write(&garbage, "(assert (forall ((x Int)) (=> (> x 0) false)))").unwrap();
    assert_eq!(cli(&[garbage.to_str().unwrap()]).status.code(), Some(3));
    assert_eq!(cli(&["--timeout", "0", &bench_path("mu")]).status.code(), Some(3));
}

#[test]
fn cli_outputs_and_external_solver() {
    let dir = tempfile::tempdir().unwrap();
    let dot = dir.path().join("inv.dot");
    let dumps = dir.path().join("queries");
    std::fs::create_dir(&dumps).unwrap();
    let cfg = write_mock_config(dir.path());
    let o = cli(&[
        "--teacher",
        "external",
        "--solver-config",
        &cfg,
        "--dot",
        dot.to_str().unwrap(),
        "--dump-queries",
        dumps.to_str().unwrap(),
        &bench_path("token_pass"),
    ]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let graph = std::fs::read_to_string(&dot).unwrap();
    assert!(graph.starts_with("digraph"));
    let names: Vec<String> =
        std::fs::read_dir(&dumps).unwrap().map(|e| e.unwrap().file_name().to_string_lossy().into_owned()).collect();
    assert!(names.iter().any(|n| n == "token_pass_init_0.smt2"), "{names:?}");

    for extra in [&["--single-session"][..], &["--no-incremental"][..]] {
        let mut args = vec!["--teacher", "external", "--solver-config", &cfg];
        args.extend_from_slice(extra);
        let path = bench_path("mu");
        args.push(&path);
        let o = cli(&args);
        assert_eq!(o.status.code(), Some(0), "{extra:?}");
        assert_mu_invariant(&stdout(&o));
    }
}
