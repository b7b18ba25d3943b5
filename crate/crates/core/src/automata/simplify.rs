use std::collections::BTreeSet;

use super::{regex_to_nfa, Alphabet, Equivalence, Regex};

/// Language-preserving algebraic rewriting, applied bottom-up to a fixpoint.
/// Mostly aimed at flattening nested stars: `(r*)*`, `(ε|r)*`, `(r*s*)*`,
/// `r r*`, plus unit and absorption laws. The result is checked against the
/// input with automata before it is returned.
pub fn simplify_regex(r: &Regex) -> Regex {
    let mut cur = r.clone();
    loop {
        let next = rewrite(&cur);
        if next == cur {
            break;
        }
        cur = next;
    }
    let alphabet = verification_alphabet(r);
    let lang = |x: &Regex| {
        regex_to_nfa(x, &alphabet)
            .and_then(|n| n.determinize())
            .expect("symbols of the input are in the verification alphabet")
    };
    assert_eq!(
        lang(&cur).equivalent(&lang(r)).unwrap(),
        Equivalence::Equal,
        "simplification changed the language of {r}"
    );
    cur
}

/// Symbols of `r`, plus one extra symbol standing for any character not
/// mentioned when `r` uses `AllChar`.
fn verification_alphabet(r: &Regex) -> Alphabet {
    let mut syms: BTreeSet<char> = r.symbols();
    if r.contains_allchar() {
        let fresh = ('\u{E000}'..='\u{F8FF}').find(|c| !syms.contains(c)).unwrap();
        syms.insert(fresh);
    }
    Alphabet::new(syms)
}

fn strip_star(r: Regex) -> Regex {
    match r {
        Regex::Star(inner) | Regex::Plus(inner) | Regex::Opt(inner) => strip_star(*inner),
        other => other,
    }
}

fn rewrite(r: &Regex) -> Regex {
    match r {
        Regex::Concat(parts) => {
            let parts: Vec<Regex> = parts.iter().map(rewrite).collect();
            let mut out: Vec<Regex> = Vec::with_capacity(parts.len());
            for p in Regex::concat(parts).into_parts() {
                match (out.last(), &p) {
                    // r* r* -> r*
                    (Some(Regex::Star(a)), Regex::Star(b)) if a == b => {}
                    // r r* -> r+
                    (Some(prev), Regex::Star(b)) if **b == *prev => {
                        let prev = out.pop().unwrap();
                        out.push(Regex::plus(prev));
                    }
                    // r* r -> r+
                    (Some(Regex::Star(a)), q) if **a == *q => {
                        let star = out.pop().unwrap();
                        if let Regex::Star(a) = star {
                            out.push(Regex::plus(*a));
                        }
                    }
                    _ => out.push(p),
                }
            }
            Regex::concat(out)
        }
        Regex::Union(parts) => {
            let parts: Vec<Regex> = parts.iter().map(rewrite).collect();
            let u = Regex::union(parts);
            match u {
                Regex::Union(items) if items.contains(&Regex::Epsilon) => {
                    let rest: Vec<Regex> = items.into_iter().filter(|x| *x != Regex::Epsilon).collect();
                    let rest = Regex::union(rest);
                    if rest.nullable() {
                        rest
                    } else {
                        Regex::opt(rest)
                    }
                }
                other => other,
            }
        }
        Regex::Star(inner) => {
            let inner = rewrite(inner);
            match inner {
                Regex::None | Regex::Epsilon => Regex::Epsilon,
                Regex::Star(_) | Regex::Plus(_) | Regex::Opt(_) => Regex::star(strip_star(inner)),
                // (r* s*)* and (r1 | s* | ..)* -> (r | s | ..)*
                Regex::Concat(ref items) if items.iter().all(|x| matches!(x, Regex::Star(_))) => {
                    Regex::star(Regex::union(items.iter().cloned().map(strip_star).collect()))
                }
                Regex::Union(items) => {
                    let items: Vec<Regex> =
                        items.into_iter().filter(|x| *x != Regex::Epsilon).map(strip_star).collect();
                    Regex::star(Regex::union(items))
                }
                other => Regex::star(other),
            }
        }
        Regex::Plus(inner) => {
            let inner = rewrite(inner);
            match inner {
                Regex::None => Regex::None,
                Regex::Epsilon => Regex::Epsilon,
                Regex::Star(_) => inner,
                Regex::Plus(_) => inner,
                Regex::Opt(x) => Regex::star(*x),
                other if other.nullable() => Regex::star(other),
                other => Regex::plus(other),
            }
        }
        Regex::Opt(inner) => {
            let inner = rewrite(inner);
            match inner {
                Regex::None | Regex::Epsilon => Regex::Epsilon,
                Regex::Plus(x) => Regex::star(*x),
                other if other.nullable() => other,
                other => Regex::opt(other),
            }
        }
        other => other.clone(),
    }
}

impl Regex {
    fn into_parts(self) -> Vec<Regex> {
        match self {
            Regex::Concat(v) => v,
            Regex::Epsilon => Vec::new(),
            other => vec![other],
        }
    }
}
