//! The SMT-LIB scripts the external teacher sends for one hypothesis,
//! written to a directory and decided by the built-in bounded evaluator.
//!
//! cargo run --example smtlib_queries [OUT_DIR]

use hornstr::chc::parse_script;
use hornstr::engine::{solve, RunConfig, TeacherKind, Verdict};
use hornstr::smtlib::{evaluate, kind_name, parse_query_script, ClauseQuery, ExternalTeacher, QueryDumper};

const TOKEN: &str = include_str!("../benchmarks/token_pass.smt2");

fn main() -> std::io::Result<()> {
    let out = std::env::args().nth(1).map_or_else(|| std::env::temp_dir().join("hornstr-queries"), Into::into);
    std::fs::create_dir_all(&out)?;
    let sys = parse_script(TOKEN).expect("benchmark parses");
    let cfg = RunConfig { teacher: TeacherKind::Exact, ..RunConfig::default() };
    let Verdict::Safe { dfa, .. } = solve(&sys, &cfg) else { panic!("token passing is safe") };

    let term = ExternalTeacher::hypothesis_term(&dfa, &sys);
    println!("hypothesis term: {term}");
    let mut dumper = QueryDumper::new(&out, "token_pass", "QF_S")?;
    for q in ClauseQuery::for_system(&sys, &term) {
        let path = dumper.dump(&q, Some("unsat"))?;
        let script = parse_query_script(&std::fs::read_to_string(&path)?).expect("own output reparses");
        let model = evaluate(&script.consts, &script.constraints, 6).expect("query is in the fragment");
        println!(
            "clause {} ({}): {} -> {}",
            q.clause_index,
            kind_name(q.kind),
            path.display(),
            if model.is_some() { "sat" } else { "unsat up to length 6" }
        );
    }
    Ok(())
}
