//! The eight acceptance criteria. Each prints one PASS/FAIL line; the test
//! fails if any criterion fails.

mod common;

use std::time::{Duration, Instant};

use hornstr::automata::{dfa_to_regex, regex_to_nfa, Alphabet, Dfa, Equivalence, Regex};
use hornstr::chc::ClauseSystem;
use hornstr::engine::{solve, solve_observed, LearnerKind, RunConfig, TeacherKind, Verdict};
use hornstr::lstar::learn;
use hornstr::oracle::{bounded_check, exact_check, validate_counterexample, TeacherVerdict};
use hornstr::smtlib::{evaluate, parse_query_script, ExternalTeacher, SatStatus, SolverConfig};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use common::*;

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: impl Into<String>) -> Outcome {
    Outcome { pass, detail: detail.into() }
}

fn exact_sat() -> RunConfig {
    RunConfig { learner: LearnerKind::Sat, teacher: TeacherKind::Exact, ..RunConfig::default() }
}

/// Runs `sys` with the exact teacher, keeping every checked hypothesis.
fn observed_run(sys: &ClauseSystem, cfg: &RunConfig) -> (Verdict, Vec<Dfa>, Duration) {
    let mut hyps = Vec::new();
    let report = solve_observed(sys, cfg, &mut |r| hyps.push(r.hypothesis.clone()));
    (report.verdict, hyps, report.elapsed)
}

fn criterion_1(run: &(Verdict, Vec<Dfa>, Duration)) -> Outcome {
    let (v, _, elapsed) = run;
    match v {
        Verdict::Safe { dfa, learner_size, .. } => outcome(
            *learner_size == 3 && dfa.accepts("MI") && !dfa.accepts("MU") && *elapsed < Duration::from_secs(60),
            format!("MU safe, learner size {learner_size}, {elapsed:?}"),
        ),
        other => outcome(false, format!("MU not safe: {other:?}")),
    }
}

/// `n* Σ (n(nn)*) Σ n*` with Σ = {r, b, n}.
fn eqdist_witness() -> Regex {
    let n = Regex::Sym('n');
    let any = Regex::union(vec![Regex::Sym('r'), Regex::Sym('b'), Regex::Sym('n')]);
    Regex::concat(vec![
        Regex::star(n.clone()),
        any.clone(),
        n.clone(),
        Regex::star(Regex::literal("nn")),
        any,
        Regex::star(n),
    ])
}

fn criterion_2(sys: &ClauseSystem, run: &(Verdict, Vec<Dfa>, Duration)) -> Outcome {
    let (v, _, elapsed) = run;
    let witness = regex_to_nfa(&eqdist_witness(), &sys.alphabet).unwrap().determinize().unwrap();
    let witness_check = exact_check(&witness, sys).unwrap();
    let Verdict::Safe { dfa, learner_size, .. } = v else {
        return outcome(false, format!("EqDist not safe: {v:?}"));
    };
    let learned_ok = exact_check(dfa, sys).unwrap().is_passed();
    outcome(
        *learner_size == 3 && learned_ok && witness_check.is_passed(),
        format!(
            "EqDist safe, learner size {learner_size} (expected 3), learned invariant {}, literal witness {}, {elapsed:?}",
            if learned_ok { "passes" } else { "fails" },
            match &witness_check {
                TeacherVerdict::Passed => "passes".to_string(),
                TeacherVerdict::Cex(c) => format!("fails with {c}"),
            }
        ),
    )
}

fn criterion_3() -> Outcome {
    let mut details = Vec::new();
    let mut pass = true;
    for name in ["parity", "anbn", "token_pass"] {
        let sys = bench(name);
        let minimal = brute_force_min_invariant(&sys, 4);
        let learned = match solve(&sys, &exact_sat()) {
            Verdict::Safe { learner_size, .. } => Some(learner_size),
            _ => None,
        };
        pass &= minimal.is_some() && minimal == learned;
        details.push(format!("{name}: sat {learned:?} brute {minimal:?}"));
    }
    outcome(pass, details.join(", "))
}

fn criterion_4() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let mut failures = Vec::new();
    for i in 0..50 {
        let target = random_dfa(&mut rng, 5, 3);
        let t = target.clone();
        let mut mem = move |w: &str| Ok(t.accepts(w));
        let mut equiv = |h: &Dfa| match h.equivalent(&target).unwrap() {
            Equivalence::Equal => None,
            Equivalence::Witness(w) => Some(w),
        };
        match learn(target.alphabet(), &mut mem, &mut equiv, 100) {
            Ok((h, eqs)) => {
                let minimal = target.minimize().num_states();
                if h.num_states() != minimal || eqs > h.num_states() {
                    failures.push(format!("#{i}: {} states ({minimal} minimal), {eqs} queries", h.num_states()));
                }
            }
            Err(e) => failures.push(format!("#{i}: {e}")),
        }
    }
    outcome(failures.is_empty(), format!("50 targets, failures: {failures:?}"))
}

fn criterion_5(runs: &[(&ClauseSystem, &[Dfa])]) -> Outcome {
    let mut checked = 0;
    let mut problems = Vec::new();
    for (sys, hyps) in runs {
        for h in hyps.iter() {
            let exact = exact_check(h, sys).unwrap();
            let bounded = bounded_check(h, sys, 10);
            checked += 1;
            if exact.is_passed() != bounded.is_passed() {
                problems.push(format!("disagreement: exact {exact:?}, bounded {bounded:?}"));
            }
            for v in [&exact, &bounded] {
                if let TeacherVerdict::Cex(c) = v {
                    if let Err(e) = validate_counterexample(c, h, sys) {
                        problems.push(format!("invalid {c}: {e}"));
                    }
                }
            }
        }
    }
    outcome(problems.is_empty(), format!("{checked} hypotheses, problems: {problems:?}"))
}

fn criterion_6() -> Outcome {
    let sys = bench("mu_unsafe");
    let start = Instant::now();
    let v = solve(&sys, &exact_sat());
    let elapsed = start.elapsed();
    match v {
        Verdict::Unsafe(trace) => {
            let replay = trace.replay(&sys);
            let steps = trace.derivation.steps.len() - 1;
            outcome(
                replay.is_ok() && steps == 1 && elapsed < Duration::from_secs(1),
                format!("unsafe, {steps}-step trace {:?}, replay {replay:?}, {elapsed:?}", trace.derivation.steps),
            )
        }
        other => outcome(false, format!("not unsafe: {other:?}")),
    }
}

fn criterion_7(mu: &ClauseSystem, hyps: &[Dfa]) -> Outcome {
    let dir = tempfile::tempdir().unwrap();
    let cfg = RunConfig { dump_dir: Some(dir.path().to_path_buf()), benchmark: "mu".into(), ..exact_sat() };
    let report = solve_observed(mu, &cfg, &mut |_| {});
    let mut files: Vec<_> = std::fs::read_dir(dir.path()).unwrap().map(|e| e.unwrap().path()).collect();
    files.sort();
    let mut problems = Vec::new();
    let mut dumped_status = Vec::new();
    for f in &files {
        let text = std::fs::read_to_string(f).unwrap();
        match parse_query_script(&text) {
            Err(e) => problems.push(format!("{}: {e}", f.display())),
            Ok(s) => {
                let bounded = match evaluate(&s.consts, &s.constraints, 8).unwrap() {
                    Some(_) => "sat",
                    None => "unsat",
                };
                if s.status.as_deref() != Some(bounded) {
                    problems.push(format!("{}: status {:?}, bounded {bounded}", f.display(), s.status));
                }
                let name = f.file_name().unwrap().to_string_lossy().into_owned();
                let counter: usize = name.rsplit('_').next().unwrap().trim_end_matches(".smt2").parse().unwrap();
                dumped_status.push((counter, s.status.unwrap_or_default()));
            }
        }
    }
    dumped_status.sort();
    // Live statuses from incremental sessions with the bundled responder.
    let solver = SolverConfig {
        args: vec!["--serve-smtlib".into(), "--serve-bound".into(), "8".into()],
        timeout: Duration::from_secs(30),
        ..SolverConfig::new(mock_solver_command(), vec![])
    };
    let mut live = Vec::new();
    match ExternalTeacher::new(mu, &solver, true) {
        Err(e) => problems.push(format!("session: {e}")),
        Ok(mut teacher) => {
            for h in hyps {
                for (_, answer) in teacher.check_all(h) {
                    live.push(match answer {
                        Ok((SatStatus::Sat, _)) => "sat".to_string(),
                        Ok((SatStatus::Unsat, _)) => "unsat".to_string(),
                        other => format!("{other:?}"),
                    });
                }
            }
        }
    }
    let dumped: Vec<String> = dumped_status.into_iter().map(|(_, s)| s).collect();
    if dumped != live {
        problems.push(format!("live statuses {live:?} differ from dumped {dumped:?}"));
    }
    outcome(
        files.len() >= 20 && report.dumped == files.len() && problems.is_empty(),
        format!("{} files, problems: {problems:?}", files.len()),
    )
}

fn criterion_8() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let mut failures = 0;
    for _ in 0..500 {
        let d = random_dfa(&mut rng, 6, 3);
        let back = regex_to_nfa(&dfa_to_regex(&d), d.alphabet()).unwrap().determinize().unwrap();
        if back.equivalent(&d).unwrap() != Equivalence::Equal {
            failures += 1;
        }
    }
    outcome(failures == 0, format!("500 DFAs, {failures} failures"))
}

#[test]
fn acceptance() {
    let mu = bench("mu");
    let eqdist = bench("eqdist");
    assert_eq!(eqdist.alphabet, Alphabet::new("bnr".chars()));
    let mu_run = observed_run(&mu, &exact_sat());
    let eq_run = observed_run(&eqdist, &exact_sat());
    let results = [
        criterion_1(&mu_run),
        criterion_2(&eqdist, &eq_run),
        criterion_3(),
        criterion_4(),
        criterion_5(&[(&mu, &mu_run.1), (&eqdist, &eq_run.1)]),
        criterion_6(),
        criterion_7(&mu, &mu_run.1),
        criterion_8(),
    ];
    let mut failed = Vec::new();
    for (i, r) in results.iter().enumerate() {
        println!("criterion {}: {} ({})", i + 1, if r.pass { "PASS" } else { "FAIL" }, r.detail);
        if !r.pass {
            failed.push(i + 1);
        }
    }
    assert!(failed.is_empty(), "failed criteria: {failed:?}");
}
