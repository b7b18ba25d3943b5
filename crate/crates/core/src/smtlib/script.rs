//! Reader and bounded evaluator for the query scripts this crate emits.
//!
//! The evaluator decides satisfiability by enumerating the undefined
//! constants up to a total length. Within that bound a `None` answer is
//! exact; beyond it the answer is only a bounded unsat.

use std::collections::{BTreeSet, HashMap};

use crate::automata::{regex_to_nfa, Alphabet, Dfa, Regex};
use crate::chc::{parse_regex, parse_term};
use crate::rule::Segment;
use crate::sexp::{parse_all, Sexp};

use super::SmtError;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Constraint {
    Eq(Vec<Segment>, Vec<Segment>),
    InRe { term: Vec<Segment>, re: Regex, positive: bool },
}

impl Constraint {
    fn vars(&self) -> impl Iterator<Item = usize> + '_ {
        let (a, b): (&[Segment], &[Segment]) = match self {
            Constraint::Eq(l, r) => (l, r),
            Constraint::InRe { term, .. } => (term, &[]),
        };
        a.iter().chain(b).filter_map(|s| match s {
            Segment::Var(v) => Some(*v),
            Segment::Const(_) => None,
        })
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct QueryScript {
    /// Value of `(set-info :status ...)`, if present.
    pub status: Option<String>,
    pub logic: Option<String>,
    pub consts: Vec<String>,
    pub constraints: Vec<Constraint>,
    pub check_sat: bool,
}

fn unsupported(m: impl Into<String>) -> SmtError {
    SmtError::Unsupported(m.into())
}

/// Declared name of a `declare-const` / nullary `declare-fun` of sort String.
pub(crate) fn declared_const(cmd: &Sexp) -> Result<String, SmtError> {
    let items = cmd.list().unwrap_or_default();
    let ok = match (cmd.head(), items.len()) {
        (Some("declare-const"), 3) => items[2].is_atom("String"),
        (Some("declare-fun"), 4) => items[2].list() == Some(&[]) && items[3].is_atom("String"),
        _ => false,
    };
    match items.get(1).and_then(Sexp::atom) {
        Some(name) if ok => Ok(name.to_string()),
        _ => Err(unsupported(format!("declaration {cmd}"))),
    }
}

/// Reads one asserted formula over the declared constants.
pub(crate) fn parse_assertion(e: &Sexp, consts: &[String]) -> Result<Constraint, SmtError> {
    let mut resolve = |name: &str| consts.iter().position(|c| c == name);
    let term = |t: &Sexp, r: &mut dyn FnMut(&str) -> Option<usize>| {
        parse_term(t, r).map_err(|err| unsupported(err.to_string()))
    };
    let items = e.list().unwrap_or_default();
    match (e.head(), items.len()) {
        (Some("="), 3) => Ok(Constraint::Eq(term(&items[1], &mut resolve)?, term(&items[2], &mut resolve)?)),
        (Some("str.in_re" | "str.in.re"), 3) => Ok(Constraint::InRe {
            term: term(&items[1], &mut resolve)?,
            re: parse_regex(&items[2]).map_err(|err| unsupported(err.to_string()))?,
            positive: true,
        }),
        (Some("not"), 2) => match parse_assertion(&items[1], consts)? {
            Constraint::InRe { term, re, positive } => Ok(Constraint::InRe { term, re, positive: !positive }),
            Constraint::Eq(..) => Err(unsupported("disequality")),
        },
        _ => Err(unsupported(format!("assertion {e}"))),
    }
}

/// Parses a standalone, non-incremental query script.
pub fn parse_query_script(text: &str) -> Result<QueryScript, SmtError> {
    let cmds = parse_all(text).map_err(|e| unsupported(e.to_string()))?;
    let mut out = QueryScript::default();
    for cmd in &cmds {
        let items = cmd.list().unwrap_or_default();
        match cmd.head() {
            Some("set-info") if items.len() == 3 && items[1].is_atom(":status") => {
                out.status = items[2].atom().map(String::from);
            }
            Some("set-logic") => out.logic = items.get(1).and_then(Sexp::atom).map(String::from),
            Some("set-info" | "set-option" | "exit" | "get-value" | "get-model") => {}
            Some("declare-const" | "declare-fun") => out.consts.push(declared_const(cmd)?),
            Some("assert") if items.len() == 2 => {
                out.constraints.push(parse_assertion(&items[1], &out.consts)?);
            }
            Some("check-sat") => out.check_sat = true,
            _ => return Err(unsupported(format!("command {cmd}"))),
        }
    }
    Ok(out)
}

struct Compiled {
    dfa: Dfa,
    live: Vec<bool>,
}

fn compile(re: &Regex, sigma: &Alphabet) -> Result<Compiled, SmtError> {
    let dfa = regex_to_nfa(re, sigma).and_then(|n| n.determinize()).map_err(|e| unsupported(e.to_string()))?;
    // States from which an accepting state is reachable.
    let mut live: Vec<bool> = (0..dfa.num_states()).map(|q| dfa.is_accepting(q)).collect();
    let mut changed = true;
    while changed {
        changed = false;
        for q in 0..dfa.num_states() {
            if !live[q] && (0..sigma.len()).any(|a| live[dfa.step(q, a)]) {
                live[q] = true;
                changed = true;
            }
        }
    }
    Ok(Compiled { dfa, live })
}

fn concat(side: &[Segment], values: &[Vec<usize>], sigma: &Alphabet) -> Option<Vec<usize>> {
    let mut out = Vec::new();
    for s in side {
        match s {
            Segment::Var(v) => out.extend_from_slice(&values[*v]),
            Segment::Const(c) => out.extend(sigma.encode(c)?),
        }
    }
    Some(out)
}

struct Search<'a> {
    sigma: Alphabet,
    constraints: &'a [Constraint],
    compiled: Vec<Option<Compiled>>,
    /// `definitions[v]`: the constraint index fixing `v` by an equation.
    definitions: Vec<Option<(usize, bool)>>,
    order: Vec<usize>,
    free: Vec<usize>,
    /// Regexes constraining a free variable on its own.
    own: HashMap<usize, Vec<usize>>,
    values: Vec<Vec<usize>>,
}

impl Search<'_> {
    fn holds(&self, i: usize) -> bool {
        match &self.constraints[i] {
            Constraint::Eq(l, r) => {
                concat(l, &self.values, &self.sigma).is_some()
                    && concat(l, &self.values, &self.sigma) == concat(r, &self.values, &self.sigma)
            }
            Constraint::InRe { term, positive, .. } => {
                let c = self.compiled[i].as_ref().unwrap();
                let w = match concat(term, &self.values, &self.sigma) {
                    Some(w) => w,
                    None => return !positive,
                };
                c.dfa.is_accepting(c.dfa.run_indices(c.dfa.initial(), &w)) == *positive
            }
        }
    }

    fn leaf(&mut self) -> bool {
        for &v in &self.order.clone() {
            let (i, lhs_is_var) = self.definitions[v].unwrap();
            let Constraint::Eq(l, r) = &self.constraints[i] else { unreachable!() };
            let t = if lhs_is_var { r } else { l };
            match concat(t, &self.values, &self.sigma) {
                Some(w) => self.values[v] = w,
                None => return false,
            }
        }
        (0..self.constraints.len()).all(|i| self.holds(i))
    }

    /// Assigns free variables `k..` with total length exactly `budget`.
    fn assign(&mut self, k: usize, budget: usize) -> bool {
        if k == self.free.len() {
            return budget == 0 && self.leaf();
        }
        let v = self.free[k];
        let lens: Vec<usize> = if k + 1 == self.free.len() { vec![budget] } else { (0..=budget).collect() };
        for len in lens {
            let starts: Vec<usize> =
                self.own[&v].iter().map(|&i| self.compiled[i].as_ref().unwrap().dfa.initial()).collect();
            self.values[v].clear();
            if self.word(k, v, len, budget - len, starts) {
                return true;
            }
        }
        false
    }

    fn word(&mut self, k: usize, v: usize, left: usize, rest: usize, states: Vec<usize>) -> bool {
        let own = self.own[&v].clone();
        if left == 0 {
            let accepted =
                own.iter().zip(&states).all(|(&i, &q)| self.compiled[i].as_ref().unwrap().dfa.is_accepting(q));
            return accepted && self.assign(k + 1, rest);
        }
        for a in 0..self.sigma.len() {
            let next: Vec<usize> =
                own.iter().zip(&states).map(|(&i, &q)| self.compiled[i].as_ref().unwrap().dfa.step(q, a)).collect();
            if own.iter().zip(&next).any(|(&i, &q)| !self.compiled[i].as_ref().unwrap().live[q]) {
                continue;
            }
            self.values[v].push(a);
            if self.word(k, v, left - 1, rest, next) {
                return true;
            }
            self.values[v].pop();
        }
        false
    }
}

/// Searches for a model whose undefined constants have total length at
/// most `max_len`, shortest first. Returns the value of every constant.
pub fn evaluate(
    consts: &[String],
    constraints: &[Constraint],
    max_len: usize,
) -> Result<Option<Vec<String>>, SmtError> {
    let mut symbols: BTreeSet<char> = BTreeSet::new();
    for c in constraints {
        let (sides, re): (Vec<&[Segment]>, Option<&Regex>) = match c {
            Constraint::Eq(l, r) => (vec![l, r], None),
            Constraint::InRe { term, re, .. } => (vec![term], Some(re)),
        };
        for seg in sides.into_iter().flatten() {
            if let Segment::Const(s) = seg {
                symbols.extend(s.chars());
            }
        }
        if let Some(re) = re {
            symbols.extend(re.symbols());
        }
    }
    if symbols.is_empty() {
        symbols.insert('a');
    }
    let sigma = Alphabet::new(symbols);
    let compiled = constraints
        .iter()
        .map(|c| match c {
            Constraint::InRe { re, .. } => compile(re, &sigma).map(Some),
            Constraint::Eq(..) => Ok(None),
        })
        .collect::<Result<Vec<_>, _>>()?;

    // Equations `x = t` with `x` outside the closure of `t` define `x`.
    let n = consts.len();
    let mut definitions: Vec<Option<(usize, bool)>> = vec![None; n];
    let mut deps: Vec<BTreeSet<usize>> = vec![BTreeSet::new(); n];
    let closure = |vars: &mut dyn Iterator<Item = usize>, deps: &[BTreeSet<usize>]| {
        let mut seen = BTreeSet::new();
        let mut stack: Vec<usize> = vars.collect();
        while let Some(v) = stack.pop() {
            if seen.insert(v) {
                stack.extend(deps[v].iter().copied());
            }
        }
        seen
    };
    for (i, c) in constraints.iter().enumerate() {
        let Constraint::Eq(l, r) = c else { continue };
        for (side, other, lhs_is_var) in [(l, r, true), (r, l, false)] {
            let [Segment::Var(x)] = side.as_slice() else { continue };
            if definitions[*x].is_some() {
                continue;
            }
            let reach = closure(
                &mut other.iter().filter_map(|s| match s {
                    Segment::Var(v) => Some(*v),
                    Segment::Const(_) => None,
                }),
                &deps,
            );
            if reach.contains(x) {
                continue;
            }
            definitions[*x] = Some((i, lhs_is_var));
            deps[*x] = reach;
            break;
        }
    }
    let used: BTreeSet<usize> = constraints.iter().flat_map(|c| c.vars()).collect();
    let free: Vec<usize> = (0..n).filter(|v| definitions[*v].is_none() && used.contains(v)).collect();
    let mut order: Vec<usize> = (0..n).filter(|v| definitions[*v].is_some()).collect();
    order.sort_by_key(|v| deps[*v].len());
    let mut own: HashMap<usize, Vec<usize>> = free.iter().map(|&v| (v, Vec::new())).collect();
    for (i, c) in constraints.iter().enumerate() {
        if let Constraint::InRe { term, positive: true, .. } = c {
            if let [Segment::Var(v)] = term.as_slice() {
                if let Some(list) = own.get_mut(v) {
                    list.push(i);
                }
            }
        }
    }
    let mut search =
        Search { sigma, constraints, compiled, definitions, order, free, own, values: vec![Vec::new(); n] };
    for total in 0..=max_len {
        if search.assign(0, total) {
            return Ok(Some(search.values.iter().map(|w| search.sigma.decode(w)).collect()));
        }
    }
    Ok(None)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn init_membership_query() {
        let s = parse_query_script(
            "(set-info :status sat)(set-logic QF_S)(declare-const var_in String)\
             (assert (str.in_re var_in (re.++ (str.to_re \"rn\") (re.* (str.to_re \"nn\")) (str.to_re \"b\"))))\
             (assert (not (str.in_re var_in re.none)))(check-sat)(exit)",
        )
        .unwrap();
        assert_eq!(s.status.as_deref(), Some("sat"));
        assert!(s.check_sat);
        let m = evaluate(&s.consts, &s.constraints, 8).unwrap().unwrap();
        assert_eq!(m, ["rnb"]);
    }

    #[test]
    fn transition_query_uses_definitions() {
        // xI -> xIU leaves M I* out of M I*.
        let s = parse_query_script(
            "(declare-const var_in String)(declare-const var_out String)(declare-const seg0 String)\
             (assert (= var_in (str.++ seg0 \"I\")))(assert (= var_out (str.++ seg0 \"IU\")))\
             (assert (str.in_re seg0 (re.* (re.union (str.to_re \"I\") (str.to_re \"M\") (str.to_re \"U\")))))\
             (assert (str.in_re var_in (re.++ (str.to_re \"M\") (re.* (str.to_re \"I\")))))\
             (assert (not (str.in_re var_out (re.++ (str.to_re \"M\") (re.* (str.to_re \"I\"))))))(check-sat)",
        )
        .unwrap();
        let m = evaluate(&s.consts, &s.constraints, 6).unwrap().unwrap();
        assert_eq!(m, ["MI", "MIU", "M"]);
    }

    #[test]
    fn bounded_unsat() {
        let s = parse_query_script(
            "(declare-const x String)(assert (str.in_re x (re.+ (str.to_re \"a\"))))\
             (assert (not (str.in_re x (re.* (str.to_re \"a\")))))",
        )
        .unwrap();
        assert_eq!(evaluate(&s.consts, &s.constraints, 6).unwrap(), None);
    }

    #[test]
    fn rejects_foreign_commands() {
        assert!(parse_query_script("(push 1)").is_err());
        assert!(parse_query_script("(declare-fun x () Int)").is_err());
        assert!(parse_query_script("(declare-const x String)(assert (not (= x \"a\")))").is_err());
    }
}
