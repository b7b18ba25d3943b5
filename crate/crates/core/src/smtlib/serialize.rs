use crate::automata::{Alphabet, Regex};
use crate::chc::{Atom, ClauseKind, ClauseSystem, TransBody};
use crate::rule::Segment;
use crate::sexp::encode_string_literal;

fn to_re(word: &str) -> String {
    format!("(str.to_re {})", encode_string_literal(word))
}

fn write_regex(r: &Regex, sigma: Option<&Alphabet>, out: &mut String) {
    let nary = |op: &str, items: &[Regex], out: &mut String| {
        out.push('(');
        out.push_str(op);
        for item in items {
            out.push(' ');
            write_regex(item, sigma, out);
        }
        out.push(')');
    };
    match r {
        Regex::None => out.push_str("re.none"),
        Regex::Epsilon => out.push_str(&to_re("")),
        Regex::Sym(c) => out.push_str(&to_re(&c.to_string())),
        Regex::Range(lo, hi) => out.push_str(&format!(
            "(re.range {} {})",
            encode_string_literal(&lo.to_string()),
            encode_string_literal(&hi.to_string())
        )),
        Regex::AllChar => match sigma {
            None => out.push_str("re.allchar"),
            Some(a) => {
                let syms: Vec<Regex> = a.symbols().iter().map(|&c| Regex::Sym(c)).collect();
                write_regex(&Regex::union(syms), None, out)
            }
        },
        Regex::Star(inner) if **inner == Regex::AllChar && sigma.is_none() => out.push_str("re.all"),
        Regex::Concat(items) => {
            // Runs of symbols become one literal.
            let mut fused: Vec<Result<String, &Regex>> = Vec::new();
            for item in items {
                match (item, fused.last_mut()) {
                    (Regex::Sym(c), Some(Ok(word))) => word.push(*c),
                    (Regex::Sym(c), _) => fused.push(Ok(c.to_string())),
                    (other, _) => fused.push(Err(other)),
                }
            }
            let mut parts = fused.into_iter().map(|f| match f {
                Ok(word) => to_re(&word),
                Err(r) => {
                    let mut s = String::new();
                    write_regex(r, sigma, &mut s);
                    s
                }
            });
            if items.len() >= 2 && items.iter().all(|i| matches!(i, Regex::Sym(_))) {
                out.push_str(&parts.next().unwrap());
            } else {
                out.push_str("(re.++");
                for p in parts {
                    out.push(' ');
                    out.push_str(&p);
                }
                out.push(')');
            }
        }
        Regex::Union(items) => nary("re.union", items, out),
        Regex::Star(inner) => nary("re.*", std::slice::from_ref(inner.as_ref()), out),
        Regex::Plus(inner) => nary("re.+", std::slice::from_ref(inner.as_ref()), out),
        Regex::Opt(inner) => nary("re.opt", std::slice::from_ref(inner.as_ref()), out),
    }
}

/// SMT-LIB 2.6 regex term; `re.allchar` is kept as is.
pub fn serialize_regex(r: &Regex) -> String {
    let mut out = String::new();
    write_regex(r, None, &mut out);
    out
}

/// Like [`serialize_regex`] but `re.allchar` is written as the union of the
/// symbols of `sigma`, so solver models stay inside the alphabet.
pub fn serialize_regex_over(r: &Regex, sigma: &Alphabet) -> String {
    let mut out = String::new();
    write_regex(r, Some(sigma), &mut out);
    out
}

/// `Σ*` over an explicit alphabet.
pub fn sigma_star(sigma: &Alphabet) -> String {
    serialize_regex_over(&Regex::all(), sigma)
}

/// One clause check, split into the part fixed by the clause and the part
/// that depends on the hypothesis.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ClauseQuery {
    pub kind: ClauseKind,
    pub clause_index: usize,
    /// Declared string constants, in declaration order.
    pub consts: Vec<String>,
    pub fixed: Vec<String>,
    pub hypothesis: Vec<String>,
    /// Constants whose values form the counterexample.
    pub witness: Vec<String>,
}

fn seg_term(side: &[Segment], name: &dyn Fn(usize) -> String) -> String {
    crate::chc::write::term(side, name)
}

impl ClauseQuery {
    /// Queries for every clause of `sys`, in clause order. The hypothesis
    /// assertions mention the regex term `h`.
    pub fn for_system(sys: &ClauseSystem, h: &str) -> Vec<ClauseQuery> {
        let sigma = &sys.alphabet;
        let in_h = |v: &str| format!("(str.in_re {v} {h})");
        let not_in_h = |v: &str| format!("(not (str.in_re {v} {h}))");
        let mut out = Vec::new();
        for (index, kind) in sys.clause_order() {
            let q = match kind {
                ClauseKind::Init => {
                    let c = sys.init_clauses.iter().find(|c| c.clause_index == index).unwrap();
                    ClauseQuery {
                        kind,
                        clause_index: index,
                        consts: vec!["var_in".into()],
                        fixed: vec![format!("(str.in_re var_in {})", serialize_regex_over(&c.language, sigma))],
                        hypothesis: vec![not_in_h("var_in")],
                        witness: vec!["var_in".into()],
                    }
                }
                ClauseKind::Bad => {
                    let c = sys.bad_clauses.iter().find(|c| c.clause_index == index).unwrap();
                    ClauseQuery {
                        kind,
                        clause_index: index,
                        consts: vec!["var_out".into()],
                        fixed: vec![format!("(str.in_re var_out {})", serialize_regex_over(&c.language, sigma))],
                        hypothesis: vec![in_h("var_out")],
                        witness: vec!["var_out".into()],
                    }
                }
                ClauseKind::Trans => {
                    let t = sys.trans_clauses.iter().find(|c| c.clause_index == index).unwrap();
                    let mut consts = vec!["var_in".to_string(), "var_out".to_string()];
                    let mut fixed = Vec::new();
                    match &t.body {
                        TransBody::Rule(rule) => {
                            let name = |j: usize| format!("seg{j}");
                            consts.extend((0..rule.num_vars()).map(name));
                            fixed.push(format!("(= var_in {})", seg_term(rule.lhs(), &name)));
                            fixed.push(format!("(= var_out {})", seg_term(rule.rhs(), &name)));
                        }
                        TransBody::Raw(raw) => {
                            let name = |j: usize| match j {
                                0 => "var_in".to_string(),
                                1 => "var_out".to_string(),
                                _ => format!("seg{}", j - 2),
                            };
                            consts.extend((2..raw.num_vars).map(name));
                            for atom in &raw.atoms {
                                fixed.push(match atom {
                                    Atom::Eq(l, r) => {
                                        format!("(= {} {})", seg_term(l, &name), seg_term(r, &name))
                                    }
                                    Atom::InRe(t, re) => format!(
                                        "(str.in_re {} {})",
                                        seg_term(t, &name),
                                        serialize_regex_over(re, sigma)
                                    ),
                                });
                            }
                        }
                    }
                    let star = sigma_star(sigma);
                    for c in consts.iter().skip(2) {
                        fixed.push(format!("(str.in_re {c} {star})"));
                    }
                    ClauseQuery {
                        kind,
                        clause_index: index,
                        consts,
                        fixed,
                        hypothesis: vec![in_h("var_in"), not_in_h("var_out")],
                        witness: vec!["var_in".into(), "var_out".into()],
                    }
                }
            };
            out.push(q);
        }
        out
    }

    pub fn declarations(&self) -> Vec<String> {
        self.consts.iter().map(|c| format!("(declare-const {c} String)")).collect()
    }

    /// Standalone non-incremental script. `status` is recorded with
    /// `set-info` when known.
    pub fn script(&self, logic: &str, status: Option<&str>) -> String {
        let mut out = String::new();
        if let Some(s) = status {
            out.push_str(&format!("(set-info :status {s})\n"));
        }
        out.push_str(&format!("(set-logic {logic})\n"));
        for d in self.declarations() {
            out.push_str(&d);
            out.push('\n');
        }
        for a in self.fixed.iter().chain(&self.hypothesis) {
            out.push_str(&format!("(assert {a})\n"));
        }
        out.push_str("(check-sat)\n(exit)\n");
        out
    }
}

pub fn kind_name(kind: ClauseKind) -> &'static str {
    match kind {
        ClauseKind::Init => "init",
        ClauseKind::Bad => "bad",
        ClauseKind::Trans => "trans",
    }
}
