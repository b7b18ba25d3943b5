use crate::chc::ClauseSystem;
use crate::smtlib::serialize_regex_over;

use super::Verdict;

/// Text written to standard output for a verdict.
pub fn emit(v: &Verdict, sys: &ClauseSystem) -> String {
    match v {
        Verdict::Safe { regex, .. } => format!(
            "sat\n(define-fun {} ((w String)) Bool (str.in_re w {}))\n",
            sys.predicate_name,
            serialize_regex_over(regex, &sys.alphabet)
        ),
        Verdict::Unsafe(trace) => {
            let mut out = String::from("unsat\n");
            for (k, (w, i)) in trace.derivation.steps.iter().enumerate() {
                out.push_str(&format!("; step {k}: {w} via clause {i}\n"));
            }
            out
        }
        Verdict::Unknown { reason, .. } => format!("unknown\n; {reason}\n"),
    }
}

/// 0 sat, 1 unsat, 2 unknown.
pub fn exit_code(v: &Verdict) -> i32 {
    match v {
        Verdict::Safe { .. } => 0,
        Verdict::Unsafe(_) => 1,
        Verdict::Unknown { .. } => 2,
    }
}
