use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Duration;

use clap::{Parser, ValueEnum};

use hornstr::chc::parse_script;
use hornstr::engine::{emit, exit_code, solve_observed, LearnerKind, RunConfig, TeacherKind, Verdict};
use hornstr::sat::{CnfInstance, SatBackend, VarisatBackend};
use hornstr::smtlib::{serve, SessionMode, SolverConfig};

#[derive(Clone, Copy, ValueEnum)]
enum Learner {
    Sat,
    Lstar,
}

#[derive(Clone, Copy, ValueEnum)]
enum Teacher {
    Exact,
    External,
    Hybrid,
}

/// Synthesizes a regular invariant for constrained Horn clauses over
/// strings, or finds an unsafe trace.
#[derive(Parser)]
#[command(name = "horn-str", version)]
struct Cli {
    /// SMT-LIB file with the clauses.
    file: Option<PathBuf>,
    #[arg(long, value_enum, default_value = "sat")]
    learner: Learner,
    #[arg(long, value_enum, default_value = "hybrid")]
    teacher: Teacher,
    /// key=value file describing an external string solver.
    #[arg(long, value_name = "FILE")]
    solver_config: Option<PathBuf>,
    /// Wall-clock budget in seconds.
    #[arg(long, value_name = "SECS", default_value_t = 60.0)]
    timeout: f64,
    #[arg(long, value_name = "N", default_value_t = hornstr::sat::DEFAULT_MAX_STATES)]
    max_states: usize,
    /// Extra length allowed when searching for a derivation of a word.
    #[arg(long, value_name = "C", default_value_t = 2)]
    length_slack: usize,
    #[arg(long, value_name = "N", default_value_t = 500)]
    iteration_cap: usize,
    /// Write every equivalence query as a standalone script into DIR.
    #[arg(long, value_name = "DIR")]
    dump_queries: Option<PathBuf>,
    /// Write the invariant automaton in Graphviz format.
    #[arg(long, value_name = "FILE")]
    dot: Option<PathBuf>,
    /// Run each solver query in a fresh process.
    #[arg(long)]
    no_incremental: bool,
    /// Share one solver session between all clauses.
    #[arg(long)]
    single_session: bool,
    /// Print round statistics and notes to standard error.
    #[arg(long, short)]
    verbose: bool,
    /// Act as an SMT-LIB responder on stdin/stdout.
    #[arg(long, hide = true)]
    serve_smtlib: bool,
    /// Length bound of the responder's model search.
    #[arg(long, hide = true, default_value_t = 8)]
    serve_bound: usize,
    /// Solve the DIMACS file given as FILE, answering in competition format.
    #[arg(long, hide = true)]
    serve_dimacs: bool,
}

fn input_error(msg: impl std::fmt::Display) -> ExitCode {
    eprintln!("horn-str: {msg}");
    ExitCode::from(3)
}

fn serve_dimacs(path: &PathBuf) -> ExitCode {
    let text = match std::fs::read_to_string(path) {
        Ok(t) => t,
        Err(e) => return input_error(format!("{}: {e}", path.display())),
    };
    let cnf = match CnfInstance::from_dimacs(&text) {
        Ok(c) => c,
        Err(e) => return input_error(e),
    };
    match VarisatBackend.solve(&cnf) {
        Ok(Some(model)) => {
            println!("s SATISFIABLE");
            let lits: Vec<String> =
                (1..=cnf.num_vars).map(|v| if model[v] { v.to_string() } else { format!("-{v}") }).collect();
            println!("v {} 0", lits.join(" "));
            ExitCode::from(10)
        }
        Ok(None) => {
            println!("s UNSATISFIABLE");
            ExitCode::from(20)
        }
        Err(e) => input_error(e),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if cli.serve_smtlib {
        let stdin = std::io::stdin().lock();
        return match serve(stdin, std::io::stdout().lock(), cli.serve_bound) {
            Ok(()) => ExitCode::SUCCESS,
            Err(e) => input_error(e),
        };
    }
    let Some(file) = &cli.file else { return input_error("no input file") };
    if cli.serve_dimacs {
        return serve_dimacs(file);
    }
    let text = match std::fs::read_to_string(file) {
        Ok(t) => t,
        Err(e) => return input_error(format!("{}: {e}", file.display())),
    };
    let sys = match parse_script(&text) {
        Ok(s) => s,
        Err(e) => return input_error(format!("{}: {e}", file.display())),
    };
    let mut solver = match &cli.solver_config {
        None => None,
        Some(p) => match SolverConfig::load(p) {
            Ok(c) => Some(c),
            Err(e) => return input_error(e),
        },
    };
    if cli.single_session {
        if let Some(s) = &mut solver {
            s.session_mode = SessionMode::Single;
        }
    }
    if !cli.timeout.is_finite() || cli.timeout <= 0.0 || cli.max_states == 0 {
        return input_error("timeout and max-states must be positive");
    }
    let cfg = RunConfig {
        learner: match cli.learner {
            Learner::Sat => LearnerKind::Sat,
            Learner::Lstar => LearnerKind::Lstar,
        },
        teacher: match cli.teacher {
            Teacher::Exact => TeacherKind::Exact,
            Teacher::External => TeacherKind::External,
            Teacher::Hybrid => TeacherKind::Hybrid,
        },
        solver,
        timeout: Duration::from_secs_f64(cli.timeout),
        max_states: cli.max_states,
        length_slack: cli.length_slack,
        dump_dir: cli.dump_queries.clone(),
        benchmark: file.file_stem().map_or("query".into(), |s| s.to_string_lossy().into_owned()),
        iteration_cap: cli.iteration_cap,
        incremental: !cli.no_incremental,
        symmetry_breaking: false,
    };
    let verbose = cli.verbose;
    let report = solve_observed(&sys, &cfg, &mut |r| {
        if verbose {
            eprintln!("round {}: {} states, {:?}", r.index, r.learner_size, r.verdict);
        }
    });
    if verbose {
        for n in &report.notes {
            eprintln!("note: {n}");
        }
        eprintln!("{} rounds, {} dumped queries, {:?}", report.rounds, report.dumped, report.elapsed);
    }
    print!("{}", emit(&report.verdict, &sys));
    if let (Some(path), Verdict::Safe { dfa, .. }) = (&cli.dot, &report.verdict) {
        if let Err(e) = std::fs::write(path, dfa.to_dot(&sys.predicate_name)) {
            return input_error(format!("{}: {e}", path.display()));
        }
    }
    ExitCode::from(exit_code(&report.verdict) as u8)
}
