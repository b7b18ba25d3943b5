//! Enumeration-based teacher and a brute-force word-equation matcher. Shares
//! no code with the automata constructions it cross-checks.

use std::collections::BTreeSet;

use super::{CexKind, Counterexample, TeacherVerdict};
use crate::automata::{Alphabet, Dfa};
use crate::chc::{Atom, ClauseSystem, TransBody, TransClause};
use crate::rule::{RewriteRule, Segment};

/// `V_in = lhs`, `V_out = rhs` with rule variable `j` renumbered `j + 2`.
pub fn equations_of_rule(rule: &RewriteRule) -> Vec<Atom> {
    let shift = |side: &[Segment]| -> Vec<Segment> {
        side.iter()
            .map(|s| match s {
                Segment::Var(j) => Segment::Var(j + 2),
                c => c.clone(),
            })
            .collect()
    };
    vec![Atom::Eq(vec![Segment::Var(0)], shift(rule.lhs())), Atom::Eq(vec![Segment::Var(1)], shift(rule.rhs()))]
}

type Assignment = Vec<Option<Vec<char>>>;

fn value(side: &[Segment], a: &Assignment) -> Option<Vec<char>> {
    let mut out = Vec::new();
    for s in side {
        match s {
            Segment::Const(c) => out.extend(c.chars()),
            Segment::Var(x) => out.extend(a[*x].as_ref()?),
        }
    }
    Some(out)
}

/// Every way of matching `pattern` against `word`, extending `a`.
fn match_pattern(pattern: &[Segment], word: &[char], a: &mut Assignment, out: &mut Vec<Assignment>) {
    let Some((first, rest)) = pattern.split_first() else {
        if word.is_empty() {
            out.push(a.clone());
        }
        return;
    };
    match first {
        Segment::Const(c) => {
            let c: Vec<char> = c.chars().collect();
            if word.starts_with(&c) {
                match_pattern(rest, &word[c.len()..], a, out);
            }
        }
        Segment::Var(x) => match a[*x].clone() {
            Some(v) => {
                if word.starts_with(&v) {
                    match_pattern(rest, &word[v.len()..], a, out);
                }
            }
            None => {
                for split in 0..=word.len() {
                    a[*x] = Some(word[..split].to_vec());
                    match_pattern(rest, &word[split..], a, out);
                }
                a[*x] = None;
            }
        },
    }
}

fn holds(atom: &Atom, a: &Assignment, sigma: &Alphabet) -> Option<bool> {
    match atom {
        Atom::Eq(l, r) => Some(value(l, a)? == value(r, a)?),
        Atom::InRe(t, re) => {
            let w: String = value(t, a)?.into_iter().collect();
            Some(re.matches(&w, sigma))
        }
    }
}

fn atom_vars(atom: &Atom) -> impl Iterator<Item = usize> + '_ {
    let (l, r): (&[Segment], &[Segment]) = match atom {
        Atom::Eq(l, r) => (l, r),
        Atom::InRe(t, _) => (t, &[]),
    };
    l.iter().chain(r).filter_map(|s| match s {
        Segment::Var(x) => Some(*x),
        _ => None,
    })
}

fn solve(atoms: &[Atom], a: &mut Assignment, sigma: &Alphabet, max_len: usize, out: &mut Vec<Assignment>) {
    // Drop atoms that are fully assigned, failing on a false one.
    let mut pending = Vec::new();
    for atom in atoms {
        match holds(atom, a, sigma) {
            Some(true) => {}
            Some(false) => return,
            None => pending.push(atom.clone()),
        }
    }
    if pending.is_empty() {
        let mut done = a.clone();
        for v in done.iter_mut() {
            v.get_or_insert_with(Vec::new);
        }
        out.push(done);
        return;
    }
    // Split a known side against its counterpart.
    for (i, atom) in pending.iter().enumerate() {
        if let Atom::Eq(l, r) = atom {
            let known = value(l, a).map(|w| (w, r)).or_else(|| value(r, a).map(|w| (w, l)));
            if let Some((word, pattern)) = known {
                let mut matches = Vec::new();
                match_pattern(pattern, &word, a, &mut matches);
                let rest: Vec<Atom> =
                    pending.iter().enumerate().filter(|(j, _)| *j != i).map(|(_, x)| x.clone()).collect();
                for mut m in matches {
                    solve(&rest, &mut m, sigma, max_len, out);
                }
                return;
            }
        }
    }
    // Nothing determined: enumerate the first open variable.
    let x = pending.iter().flat_map(atom_vars).find(|&x| a[x].is_none()).unwrap();
    for w in sigma.words_up_to(max_len) {
        a[x] = Some(w.chars().collect());
        solve(&pending, a, sigma, max_len, out);
    }
    a[x] = None;
}

/// All solutions of `atoms` over `num_vars` variables, with `fixed[i]`
/// pinning variable `i`. Variables not determined by an equation range over
/// words of length at most `max_len`; variables in no atom are set to "".
pub fn solve_equations(
    atoms: &[Atom],
    num_vars: usize,
    fixed: &[Option<&str>],
    sigma: &Alphabet,
    max_len: usize,
) -> Vec<Vec<String>> {
    let mut a: Assignment = vec![None; num_vars];
    for (i, f) in fixed.iter().enumerate() {
        a[i] = f.map(|w| w.chars().collect());
    }
    let mut out = Vec::new();
    solve(atoms, &mut a, sigma, max_len, &mut out);
    out.into_iter().map(|s| s.into_iter().map(|v| v.unwrap().into_iter().collect()).collect()).collect()
}

/// Words related to `w_in` by a transition clause, sorted.
pub fn clause_successors(t: &TransClause, w_in: &str, sigma: &Alphabet, max_len: usize) -> BTreeSet<String> {
    let (atoms, n) = match &t.body {
        TransBody::Rule(r) => (equations_of_rule(r), 2 + r.num_vars()),
        TransBody::Raw(raw) => (raw.atoms.clone(), raw.num_vars),
    };
    solve_equations(&atoms, n, &[Some(w_in)], sigma, max_len).into_iter().map(|mut s| s.swap_remove(1)).collect()
}

/// Same contract as the exact teacher restricted to words of length at most
/// `max_len`: Init clauses first, then Bad, then transitions, each in clause
/// order, with the shortlex-least witness per clause.
pub fn bounded_check(h: &Dfa, sys: &ClauseSystem, max_len: usize) -> TeacherVerdict {
    let sigma = &sys.alphabet;
    let words = sigma.words_up_to(max_len);
    let cex = |kind, clause_index| TeacherVerdict::Cex(Counterexample { kind, clause_index });
    for c in &sys.init_clauses {
        if let Some(w) = words.iter().find(|w| !h.accepts(w) && c.language.matches(w, sigma)) {
            return cex(CexKind::Positive(w.clone()), c.clause_index);
        }
    }
    for c in &sys.bad_clauses {
        if let Some(w) = words.iter().find(|w| h.accepts(w) && c.language.matches(w, sigma)) {
            return cex(CexKind::Negative(w.clone()), c.clause_index);
        }
    }
    let accepted: Vec<&String> = words.iter().filter(|w| h.accepts(w)).collect();
    for t in &sys.trans_clauses {
        for w_in in &accepted {
            if let Some(w_out) = clause_successors(t, w_in, sigma, max_len).into_iter().find(|w| !h.accepts(w)) {
                return cex(CexKind::Implication { w_in: (*w_in).clone(), w_out }, t.clause_index);
            }
        }
    }
    TeacherVerdict::Passed
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rule::Segment::*;

    #[test]
    fn matcher_handles_copies() {
        let sigma = Alphabet::new("IMU".chars());
        let double =
            RewriteRule::new(vec![Const("M".into()), Var(0)], vec![Const("M".into()), Var(0), Var(0)]).unwrap();
        let sols = solve_equations(&equations_of_rule(&double), 3, &[Some("MIU")], &sigma, 5);
        assert_eq!(sols, vec![vec!["MIU".to_string(), "MIUIU".to_string(), "IU".to_string()]]);
        assert!(solve_equations(&equations_of_rule(&double), 3, &[Some("IM")], &sigma, 5).is_empty());
    }

    #[test]
    fn matcher_enumerates_unconstrained_output() {
        let sigma = Alphabet::new("ab".chars());
        // V_out only constrained by a regex: all words up to the bound.
        let atoms = vec![Atom::InRe(vec![Var(1)], crate::automata::Regex::star(crate::automata::Regex::Sym('a')))];
        let sols = solve_equations(&atoms, 2, &[Some("b")], &sigma, 2);
        let outs: Vec<&str> = sols.iter().map(|s| s[1].as_str()).collect();
        assert_eq!(outs, vec!["", "a", "aa"]);
    }
}
