use std::collections::{HashMap, HashSet};

use super::{infer_alphabet, Atom, ChcError, ClauseSystem, ConstraintClause, RawConstraint, TransBody, TransClause};
use crate::automata::{Alphabet, Regex};
use crate::rule::{RewriteRule, RuleError, Segment};
use crate::sexp::{parse_all, Sexp};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum ClauseKind {
    Init,
    Bad,
    Trans,
}

/// Why a transition body stays raw.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum NotInFragment {
    /// Equations do not determine both arguments as concatenations.
    Shape(String),
    Rule(RuleError),
}

fn unsupported(what: impl Into<String>) -> ChcError {
    ChcError::UnsupportedConstruct(what.into())
}

const REJECTED_OPS: &[&str] = &[
    "str.len",
    "str.<",
    "str.<=",
    "str.at",
    "str.substr",
    "str.prefixof",
    "str.suffixof",
    "str.contains",
    "str.indexof",
    "str.replace",
    "str.replace_all",
    "str.to_int",
    "str.from_int",
    "str.to.int",
    "int.to.str",
    "+",
    "-",
    "*",
    "<",
    "<=",
    ">",
    ">=",
    "div",
    "mod",
];

fn describe(e: &Sexp) -> String {
    let s = e.to_string();
    if s.chars().count() > 60 {
        format!("{}...", s.chars().take(60).collect::<String>())
    } else {
        s
    }
}

fn check_rejected(e: &Sexp) -> Result<(), ChcError> {
    match e {
        Sexp::Atom(a) if a.chars().all(|c| c.is_ascii_digit()) => Err(unsupported(format!("integer term {a}"))),
        Sexp::Atom(a) if REJECTED_OPS.contains(&a.as_str()) => Err(unsupported(a.clone())),
        Sexp::List(items) => items.iter().try_for_each(check_rejected),
        _ => Ok(()),
    }
}

fn literal(e: &Sexp) -> Option<&str> {
    match e {
        Sexp::Str(s) => Some(s),
        _ => None,
    }
}

fn single_char(s: &str) -> Option<char> {
    let mut it = s.chars();
    match (it.next(), it.next()) {
        (Some(c), None) => Some(c),
        _ => None,
    }
}

fn numeral(e: &Sexp) -> Option<usize> {
    e.atom().and_then(|a| a.parse().ok())
}

/// Reads an SMT-LIB regular expression term.
pub fn parse_regex(e: &Sexp) -> Result<Regex, ChcError> {
    match e {
        Sexp::Atom(a) => match a.as_str() {
            "re.allchar" => Ok(Regex::AllChar),
            "re.all" => Ok(Regex::all()),
            "re.none" | "re.nostr" => Ok(Regex::None),
            _ => Err(unsupported(format!("regex {a}"))),
        },
        Sexp::Str(_) => Err(unsupported(format!("string literal {} in regex position", describe(e)))),
        Sexp::List(items) => {
            let args = &items[1..];
            let sub = || args.iter().map(parse_regex).collect::<Result<Vec<_>, _>>();
            let one = |f: fn(Regex) -> Regex| -> Result<Regex, ChcError> {
                match args {
                    [r] => Ok(f(parse_regex(r)?)),
                    _ => Err(unsupported(describe(e))),
                }
            };
            match items.first() {
                Some(Sexp::List(indexed)) => parse_indexed_regex(indexed, args, e),
                Some(h) => match h.atom().unwrap_or("") {
                    "str.to_re" | "str.to.re" => match args {
                        [Sexp::Str(s)] => Ok(Regex::literal(s)),
                        _ => Err(unsupported(format!("non-literal argument in {}", describe(e)))),
                    },
                    "re.++" if !args.is_empty() => Ok(Regex::concat(sub()?)),
                    "re.union" if !args.is_empty() => Ok(Regex::union(sub()?)),
                    "re.*" => one(Regex::star),
                    "re.+" => one(Regex::plus),
                    "re.opt" => one(Regex::opt),
                    "re.range" => match args {
                        [lo, hi] => {
                            let (lo, hi) = literal(lo).zip(literal(hi)).ok_or_else(|| unsupported(describe(e)))?;
                            Ok(match (single_char(lo), single_char(hi)) {
                                (Some(lo), Some(hi)) => Regex::range(lo, hi),
                                _ => Regex::None,
                            })
                        }
                        _ => Err(unsupported(describe(e))),
                    },
                    _ => Err(unsupported(format!("regex {}", describe(e)))),
                },
                None => Err(unsupported("empty list")),
            }
        }
    }
}

/// `((_ re.loop i j) r)` and `((_ re.^ n) r)`, expanded.
fn parse_indexed_regex(indexed: &[Sexp], args: &[Sexp], whole: &Sexp) -> Result<Regex, ChcError> {
    let bad = || unsupported(format!("regex {}", describe(whole)));
    let [r] = args else { return Err(bad()) };
    let r = parse_regex(r)?;
    let (lo, hi) = match indexed {
        [u, op, n] if u.is_atom("_") && op.is_atom("re.^") => {
            let n = numeral(n).ok_or_else(bad)?;
            (n, n)
        }
        [u, op, i, j] if u.is_atom("_") && op.is_atom("re.loop") => {
            (numeral(i).ok_or_else(bad)?, numeral(j).ok_or_else(bad)?)
        }
        _ => return Err(bad()),
    };
    if lo > hi {
        return Ok(Regex::None);
    }
    let mut parts = vec![r.clone(); lo];
    parts.extend(std::iter::repeat_n(Regex::opt(r), hi - lo));
    Ok(Regex::concat(parts))
}

/// Reads a string term as a flat concatenation. `resolve` maps variable
/// names to ids and returns `None` for unknown symbols.
pub fn parse_term(e: &Sexp, resolve: &mut dyn FnMut(&str) -> Option<usize>) -> Result<Vec<Segment>, ChcError> {
    check_rejected(e)?;
    match e {
        Sexp::Str(s) => Ok(if s.is_empty() { Vec::new() } else { vec![Segment::Const(s.clone())] }),
        Sexp::Atom(a) => match resolve(a) {
            Some(id) => Ok(vec![Segment::Var(id)]),
            None => Err(unsupported(format!("undeclared symbol {a}"))),
        },
        Sexp::List(items) if e.head() == Some("str.++") && items.len() >= 2 => {
            let mut out = Vec::new();
            for part in &items[1..] {
                out.extend(parse_term(part, resolve)?);
            }
            Ok(out)
        }
        Sexp::List(_) => Err(unsupported(format!("string term {}", describe(e)))),
    }
}

/// Clause in normalized Horn form, still over variable names.
struct HornShape<'a> {
    declared: HashSet<&'a str>,
    body_args: Vec<&'a str>,
    atoms: Vec<&'a Sexp>,
    /// `None` for `false`.
    head_arg: Option<&'a str>,
}

fn pred_arg<'a>(e: &'a Sexp, pred: &str) -> Option<Result<&'a str, ChcError>> {
    if e.head() != Some(pred) {
        return None;
    }
    Some(match e.list().unwrap() {
        [_, Sexp::Atom(v)] => Ok(v.as_str()),
        _ => Err(unsupported(format!("predicate application {}", describe(e)))),
    })
}

fn horn_shape<'a>(assertion: &'a Sexp, pred: &str, index: usize) -> Result<HornShape<'a>, ChcError> {
    let non_horn = |reason: &str| ChcError::NonHornShape { index, reason: reason.into() };
    let mut declared = HashSet::new();
    let mut body = assertion;
    if assertion.head() == Some("forall") {
        let items = assertion.list().unwrap();
        let [_, Sexp::List(binders), inner] = items else {
            return Err(unsupported(format!("quantifier {}", describe(assertion))));
        };
        for b in binders {
            match b.list() {
                Some([Sexp::Atom(v), s]) if s.is_atom("String") => {
                    declared.insert(v.as_str());
                }
                _ => return Err(unsupported(format!("binder {}", describe(b)))),
            }
        }
        body = inner;
    }
    let (antecedent, head): (Vec<&Sexp>, &Sexp) = match body.list() {
        Some([imp, lhs, rhs]) if imp.is_atom("=>") => {
            let conj = if lhs.head() == Some("and") { lhs.list().unwrap()[1..].iter().collect() } else { vec![lhs] };
            (conj, rhs)
        }
        _ => (Vec::new(), body),
    };
    let head_arg = if head.is_atom("false") {
        None
    } else if let Some(arg) = pred_arg(head, pred) {
        Some(arg?)
    } else if head.head() == Some("not") {
        return Err(non_horn("negated head"));
    } else {
        return Err(non_horn("head is neither the predicate nor false"));
    };
    let mut body_args = Vec::new();
    let mut atoms = Vec::new();
    for a in antecedent {
        if let Some(arg) = pred_arg(a, pred) {
            body_args.push(arg?);
            continue;
        }
        match a.head() {
            Some("forall") | Some("exists") => return Err(unsupported("nested quantifier")),
            Some("not") if a.list().unwrap().get(1).and_then(|x| pred_arg(x, pred)).is_some() => {
                return Err(non_horn("negated predicate in body"))
            }
            Some("=") | Some("str.in_re") | Some("str.in.re") => atoms.push(a),
            Some("and") => return Err(unsupported("nested conjunction")),
            _ if a.is_atom("true") => {}
            _ => {
                check_rejected(a)?;
                return Err(unsupported(format!("body atom {}", describe(a))));
            }
        }
    }
    for name in body_args.iter().chain(head_arg.iter()) {
        if !declared.contains(name) {
            return Err(unsupported(format!("predicate argument {name} is not a bound variable")));
        }
    }
    Ok(HornShape { declared, body_args, atoms, head_arg })
}

fn kind_of(shape: &HornShape<'_>, index: usize) -> Result<ClauseKind, ChcError> {
    let non_horn = |reason: &str| ChcError::NonHornShape { index, reason: reason.into() };
    match (shape.body_args.len(), shape.head_arg.is_some()) {
        (0, true) => Ok(ClauseKind::Init),
        (1, false) => Ok(ClauseKind::Bad),
        (1, true) => Ok(ClauseKind::Trans),
        (0, false) => Err(non_horn("no predicate occurs in the clause")),
        _ => Err(non_horn("more than one predicate atom in the body")),
    }
}

/// Classifies one asserted formula with respect to predicate `pred`.
pub fn classify_clause(assertion: &Sexp, pred: &str) -> Result<ClauseKind, ChcError> {
    kind_of(&horn_shape(assertion, pred, 0)?, 0)
}

struct Vars<'a> {
    declared: &'a HashSet<&'a str>,
    ids: HashMap<String, usize>,
}

impl<'a> Vars<'a> {
    fn new(declared: &'a HashSet<&'a str>, fixed: &[&str]) -> Self {
        let mut ids = HashMap::new();
        for name in fixed {
            let next = ids.len();
            ids.entry(name.to_string()).or_insert(next);
        }
        Vars { declared, ids }
    }

    fn resolve(&mut self, name: &str) -> Option<usize> {
        if !self.declared.contains(name) {
            return None;
        }
        let next = self.ids.len();
        Some(*self.ids.entry(name.to_string()).or_insert(next))
    }

    fn len(&self) -> usize {
        self.ids.len()
    }
}

fn read_atoms(shape: &HornShape<'_>, vars: &mut Vars<'_>) -> Result<Vec<Atom>, ChcError> {
    let mut out = Vec::new();
    for a in &shape.atoms {
        let items = a.list().unwrap();
        let mut resolve = |n: &str| vars.resolve(n);
        match items {
            [op, l, r] if op.is_atom("=") => {
                out.push(Atom::Eq(parse_term(l, &mut resolve)?, parse_term(r, &mut resolve)?));
            }
            [_, t, re] => {
                out.push(Atom::InRe(parse_term(t, &mut resolve)?, parse_regex(re)?));
            }
            _ => return Err(unsupported(format!("atom {}", describe(a)))),
        }
    }
    Ok(out)
}

fn term_regex(term: &[Segment], constraints: &HashMap<usize, Regex>) -> Regex {
    Regex::concat(
        term.iter()
            .map(|s| match s {
                Segment::Const(c) => Regex::literal(c),
                Segment::Var(x) => constraints.get(x).cloned().unwrap_or_else(Regex::all),
            })
            .collect(),
    )
}

fn single_var(term: &[Segment]) -> Option<usize> {
    match term {
        [Segment::Var(x)] => Some(*x),
        _ => None,
    }
}

/// Language of variable 0 under `atoms`, which may mention auxiliary
/// variables only through one defining equation and their own regex
/// constraints.
fn constraint_language(atoms: &[Atom]) -> Result<Regex, ChcError> {
    let mut regex_of: HashMap<usize, Regex> = HashMap::new();
    let mut equation: Option<Vec<Segment>> = None;
    for atom in atoms {
        match atom {
            Atom::InRe(t, r) => {
                let x = single_var(t).ok_or_else(|| unsupported("regex constraint on a compound term"))?;
                if regex_of.insert(x, r.clone()).is_some() {
                    return Err(unsupported("several regex constraints on one variable"));
                }
            }
            Atom::Eq(l, r) => {
                let t = if single_var(l) == Some(0) {
                    r
                } else if single_var(r) == Some(0) {
                    l
                } else {
                    return Err(unsupported("equation not defining the predicate argument"));
                };
                if equation.replace(t.clone()).is_some() {
                    return Err(unsupported("several equations for the predicate argument"));
                }
            }
        }
    }
    match equation {
        Some(t) => {
            let mut seen = HashSet::new();
            for s in &t {
                if let Segment::Var(x) = s {
                    if *x == 0 || !seen.insert(*x) {
                        return Err(unsupported("variable repeated in a constraint term"));
                    }
                }
            }
            if regex_of.contains_key(&0) || regex_of.keys().any(|x| !seen.contains(x)) {
                return Err(unsupported("regex constraint on a variable outside the defining term"));
            }
            Ok(term_regex(&t, &regex_of))
        }
        None => {
            if regex_of.keys().any(|&x| x != 0) {
                return Err(unsupported("regex constraint on an auxiliary variable"));
            }
            Ok(regex_of.remove(&0).unwrap_or_else(Regex::all))
        }
    }
}

fn mentions(term: &[Segment], x: usize) -> bool {
    term.contains(&Segment::Var(x))
}

/// Turns a transition body (variable 0 in, 1 out) into a rewrite rule when
/// it consists of one equation per argument whose other side is a
/// concatenation of constants and auxiliary variables.
pub fn extract_rewrite_rule(raw: &RawConstraint) -> Result<RewriteRule, NotInFragment> {
    let shape = |m: &str| Err(NotInFragment::Shape(m.into()));
    let mut t_in: Option<&Vec<Segment>> = None;
    let mut t_out: Option<&Vec<Segment>> = None;
    for atom in &raw.atoms {
        let Atom::Eq(l, r) = atom else { return shape("regex guard in transition") };
        let oriented = [(l, r), (r, l)];
        if let Some((_, t)) =
            oriented.iter().find(|(v, t)| single_var(v) == Some(0) && !mentions(t, 0) && !mentions(t, 1))
        {
            if t_in.replace(t).is_some() {
                return shape("input defined twice");
            }
        } else if let Some((_, t)) = oriented.iter().find(|(v, t)| single_var(v) == Some(1) && !mentions(t, 1)) {
            if t_out.replace(t).is_some() {
                return shape("output defined twice");
            }
        } else {
            return shape("equation defines neither argument");
        }
    }
    let input = [Segment::Var(0)];
    let t_in: &[Segment] = t_in.map(|t| t.as_slice()).unwrap_or(&input);
    let t_out = t_out.ok_or(NotInFragment::Shape("output unconstrained".into()))?;
    if t_in != input && mentions(t_out, 0) {
        return shape("output refers to the input argument");
    }
    RewriteRule::new(t_in.to_vec(), t_out.clone()).map_err(NotInFragment::Rule)
}

fn predicate_of(cmd: &Sexp) -> Result<String, ChcError> {
    match cmd.list().unwrap() {
        [_, Sexp::Atom(name), Sexp::List(args), ret]
            if ret.is_atom("Bool") && args.len() == 1 && args[0].is_atom("String") =>
        {
            Ok(name.clone())
        }
        _ => Err(unsupported(format!("declaration {}", describe(cmd)))),
    }
}

/// Parses a CHC script into a validated clause system.
pub fn parse_script(text: &str) -> Result<ClauseSystem, ChcError> {
    let commands = parse_all(text)?;
    let mut pred: Option<String> = None;
    let mut assertions = Vec::new();
    for cmd in &commands {
        match cmd.head() {
            Some("set-logic" | "set-info" | "set-option" | "check-sat" | "get-model" | "exit") => {}
            Some("declare-fun") => {
                let name = predicate_of(cmd)?;
                if let Some(first) = &pred {
                    return Err(ChcError::MultiplePredicates(format!("{first}, {name}")));
                }
                pred = Some(name);
            }
            Some("assert") => match cmd.list().unwrap() {
                [_, f] => assertions.push(f),
                _ => return Err(unsupported(describe(cmd))),
            },
            _ => return Err(unsupported(format!("command {}", describe(cmd)))),
        }
    }
    let pred = pred.ok_or(ChcError::EmptySystem("predicate declaration"))?;
    if assertions.is_empty() {
        return Err(ChcError::EmptySystem("clauses"));
    }
    let mut sys = ClauseSystem {
        predicate_name: pred.clone(),
        alphabet: Alphabet::default(),
        init_clauses: Vec::new(),
        bad_clauses: Vec::new(),
        trans_clauses: Vec::new(),
    };
    for (i, a) in assertions.into_iter().enumerate() {
        let index = i + 1;
        let shape = horn_shape(a, &pred, index)?;
        match kind_of(&shape, index)? {
            ClauseKind::Init => {
                let mut vars = Vars::new(&shape.declared, &[shape.head_arg.unwrap()]);
                let atoms = read_atoms(&shape, &mut vars)?;
                let language = constraint_language(&atoms)?;
                sys.init_clauses.push(ConstraintClause { clause_index: index, language });
            }
            ClauseKind::Bad => {
                let mut vars = Vars::new(&shape.declared, &[shape.body_args[0]]);
                let atoms = read_atoms(&shape, &mut vars)?;
                let language = constraint_language(&atoms)?;
                sys.bad_clauses.push(ConstraintClause { clause_index: index, language });
            }
            ClauseKind::Trans => {
                let (vin, vout) = (shape.body_args[0], shape.head_arg.unwrap());
                let mut vars = Vars::new(&shape.declared, &[vin]);
                let mut atoms = Vec::new();
                if vin == vout {
                    // Id 1 still denotes the head argument, equal to the input.
                    vars.ids.insert(String::from("\0head"), 1);
                    atoms.push(Atom::Eq(vec![Segment::Var(1)], vec![Segment::Var(0)]));
                } else {
                    vars.ids.insert(vout.to_string(), 1);
                }
                atoms.extend(read_atoms(&shape, &mut vars)?);
                let raw = RawConstraint { num_vars: vars.len(), atoms };
                let body = match extract_rewrite_rule(&raw) {
                    Ok(rule) => TransBody::Rule(rule),
                    Err(_) => TransBody::Raw(raw),
                };
                sys.trans_clauses.push(TransClause { clause_index: index, body });
            }
        }
    }
    if sys.init_clauses.is_empty() {
        return Err(ChcError::EmptySystem("Init clause"));
    }
    sys.alphabet = infer_alphabet(&sys)?;
    Ok(sys)
}
