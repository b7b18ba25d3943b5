use super::{Atom, ClauseKind, ClauseSystem, TransBody};
use crate::rule::Segment;
use crate::sexp::encode_string_literal;
use crate::smtlib::serialize_regex;

pub(crate) fn term(side: &[Segment], name: &dyn Fn(usize) -> String) -> String {
    let parts: Vec<String> = side
        .iter()
        .map(|s| match s {
            Segment::Var(x) => name(*x),
            Segment::Const(c) => encode_string_literal(c),
        })
        .collect();
    match parts.len() {
        0 => "\"\"".to_string(),
        1 => parts.into_iter().next().unwrap(),
        _ => format!("(str.++ {})", parts.join(" ")),
    }
}

fn binders(names: &[String]) -> String {
    names.iter().map(|n| format!("({n} String)")).collect::<Vec<_>>().join(" ")
}

/// Renders the system as an SMT-LIB script that parses back to an equal
/// system (clause indices are renumbered consecutively).
pub fn write_system(sys: &ClauseSystem) -> String {
    let p = &sys.predicate_name;
    let mut out = String::from("(set-logic HORN)\n");
    out.push_str(&format!("(declare-fun {p} (String) Bool)\n"));
    for (index, kind) in sys.clause_order() {
        let clause = match kind {
            ClauseKind::Init | ClauseKind::Bad => {
                let list = if kind == ClauseKind::Init { &sys.init_clauses } else { &sys.bad_clauses };
                let c = list.iter().find(|c| c.clause_index == index).unwrap();
                let re = serialize_regex(&c.language);
                if kind == ClauseKind::Init {
                    format!("(forall ((V String)) (=> (str.in_re V {re}) ({p} V)))")
                } else {
                    format!("(forall ((V String)) (=> (and ({p} V) (str.in_re V {re})) false))")
                }
            }
            ClauseKind::Trans => {
                let t = sys.trans_clauses.iter().find(|c| c.clause_index == index).unwrap();
                match &t.body {
                    TransBody::Rule(rule) => {
                        let mut names = vec!["V_in".to_string(), "V_out".to_string()];
                        names.extend((0..rule.num_vars()).map(|j| format!("x{j}")));
                        let name = |j: usize| format!("x{j}");
                        format!(
                            "(forall ({}) (=> (and ({p} V_in) (= V_in {}) (= V_out {})) ({p} V_out)))",
                            binders(&names),
                            term(rule.lhs(), &name),
                            term(rule.rhs(), &name)
                        )
                    }
                    TransBody::Raw(raw) => {
                        let name = |j: usize| match j {
                            0 => "V_in".to_string(),
                            1 => "V_out".to_string(),
                            _ => format!("x{j}"),
                        };
                        let names: Vec<String> = (0..raw.num_vars).map(name).collect();
                        let atoms: Vec<String> = raw
                            .atoms
                            .iter()
                            .map(|a| match a {
                                Atom::Eq(l, r) => format!("(= {} {})", term(l, &name), term(r, &name)),
                                Atom::InRe(t, re) => {
                                    format!("(str.in_re {} {})", term(t, &name), serialize_regex(re))
                                }
                            })
                            .collect();
                        let body = if atoms.is_empty() {
                            format!("({p} V_in)")
                        } else {
                            format!("(and ({p} V_in) {})", atoms.join(" "))
                        };
                        format!("(forall ({}) (=> {body} ({p} V_out)))", binders(&names))
                    }
                }
            }
        };
        out.push_str(&format!("(assert {clause})\n"));
    }
    out.push_str("(check-sat)\n");
    out
}
