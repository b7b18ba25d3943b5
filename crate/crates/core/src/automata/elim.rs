use super::{regex_to_nfa, Dfa, Equivalence, Regex};

/// State elimination on the generalized automaton of `d`.
///
/// Useless states are trimmed first. Each step removes the remaining state
/// with the fewest in-edges × out-edges (self-loops excluded), lowest state
/// number first on ties. The result is checked for language equality with
/// `d` before returning.
pub fn dfa_to_regex(d: &Dfa) -> Regex {
    let r = eliminate(d);
    let back =
        regex_to_nfa(&r, d.alphabet()).and_then(|n| n.determinize()).expect("regex built from the alphabet of the DFA");
    assert_eq!(
        back.equivalent(d).expect("same alphabet"),
        Equivalence::Equal,
        "state elimination produced a regex for a different language: {r}"
    );
    r
}

fn useful_states(d: &Dfa) -> Vec<bool> {
    let n = d.num_states();
    let k = d.alphabet().len();
    let mut reach = vec![false; n];
    for q in d.reachable_states() {
        reach[q] = true;
    }
    let mut coreach: Vec<bool> = (0..n).map(|q| d.is_accepting(q)).collect();
    loop {
        let mut changed = false;
        for q in 0..n {
            if !coreach[q] && (0..k).any(|a| coreach[d.step(q, a)]) {
                coreach[q] = true;
                changed = true;
            }
        }
        if !changed {
            break;
        }
    }
    (0..n).map(|q| reach[q] && coreach[q]).collect()
}

fn eliminate(d: &Dfa) -> Regex {
    let n = d.num_states();
    let useful = useful_states(d);
    if !useful[d.initial()] {
        return Regex::None;
    }
    let start = n;
    let fin = n + 1;
    let mut edge: Vec<Vec<Option<Regex>>> = vec![vec![None; n + 2]; n + 2];
    let add = |edge: &mut Vec<Vec<Option<Regex>>>, i: usize, j: usize, r: Regex| {
        let cur = edge[i][j].take();
        edge[i][j] = Some(match cur {
            None => r,
            Some(c) => Regex::union(vec![c, r]),
        });
    };
    add(&mut edge, start, d.initial(), Regex::Epsilon);
    for q in (0..n).filter(|&q| useful[q]) {
        if d.is_accepting(q) {
            add(&mut edge, q, fin, Regex::Epsilon);
        }
        for (a, &c) in d.alphabet().symbols().iter().enumerate() {
            let t = d.step(q, a);
            if useful[t] {
                add(&mut edge, q, t, Regex::Sym(c));
            }
        }
    }
    let mut remaining: Vec<usize> = (0..n).filter(|&q| useful[q]).collect();
    while !remaining.is_empty() {
        let alive = |x: usize, remaining: &[usize]| x == start || x == fin || remaining.contains(&x);
        let degree = |k: usize| {
            let ins = (0..n + 2).filter(|&i| i != k && alive(i, &remaining) && edge[i][k].is_some()).count();
            let outs = (0..n + 2).filter(|&j| j != k && alive(j, &remaining) && edge[k][j].is_some()).count();
            ins * outs
        };
        let (pos, &k) = remaining.iter().enumerate().min_by_key(|&(_, &q)| (degree(q), q)).unwrap();
        remaining.remove(pos);
        let loop_re = edge[k][k].take().map(Regex::star);
        let ins: Vec<usize> = (0..n + 2).filter(|&i| i != k && edge[i][k].is_some()).collect();
        let outs: Vec<usize> = (0..n + 2).filter(|&j| j != k && edge[k][j].is_some()).collect();
        for &i in &ins {
            for &j in &outs {
                let mut parts = vec![edge[i][k].clone().unwrap()];
                if let Some(l) = &loop_re {
                    parts.push(l.clone());
                }
                parts.push(edge[k][j].clone().unwrap());
                add(&mut edge, i, j, Regex::concat(parts));
            }
        }
        for i in 0..n + 2 {
            edge[i][k] = None;
            edge[k][i] = None;
        }
    }
    edge[start][fin].take().unwrap_or(Regex::None)
}
