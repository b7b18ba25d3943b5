//! Images of regular languages under one rewrite step.

use std::collections::HashMap;

use super::search::lex_bfs;
use super::{AutomataError, Dfa, Nfa};
use crate::rule::{RewriteRule, Segment};

fn check_alphabet(h: &Dfa, rule: &RewriteRule) -> Result<(), AutomataError> {
    let covered = rule.lhs().iter().chain(rule.rhs()).all(|s| match s {
        Segment::Const(c) => c.chars().all(|ch| h.alphabet().contains(ch)),
        Segment::Var(_) => true,
    });
    if covered {
        Ok(())
    } else {
        Err(AutomataError::AlphabetMismatch)
    }
}

fn run(h: &Dfa, from: usize, word: &[char]) -> usize {
    h.run_from(from, word).expect("constants checked against the alphabet")
}

/// NFA for `{ rhs(σ) : lhs(σ) ∈ L(h) }` of a copy-free rule.
///
/// States are `(block, h-state, progress)`: while inside a variable the input
/// letter drives `h` as usual; inside the constant pair `(u_j, v_j)` the
/// input must spell `v_j` while `h` jumps over `u_j` in one go.
pub fn post_image(h: &Dfa, rule: &RewriteRule) -> Result<Nfa, AutomataError> {
    check_alphabet(h, rule)?;
    let v = rule.rhs_frames().ok_or(AutomataError::NonRegularImage)?;
    let u = rule.lhs_frames();
    let k = rule.num_vars();
    let n = h.num_states();
    let alphabet = h.alphabet().clone();
    let mut nfa = Nfa::new(alphabet.clone());
    // const_state[j][p][t]: after entering block j (h already past u_j at p),
    // t letters of v_j emitted.
    let mut const_state = vec![vec![Vec::new(); n]; k + 1];
    for (j, frame) in v.iter().enumerate() {
        for p in 0..n {
            for t in 0..=frame.len() {
                let done = t == frame.len() && j == k;
                let id = nfa.add_state(done && h.is_accepting(p));
                const_state[j][p].push(id);
            }
        }
    }
    // var_state[j][p] for variables 1..=k (index 0 unused).
    let mut var_state = vec![Vec::new(); k + 1];
    for states in var_state.iter_mut().skip(1) {
        for _ in 0..n {
            states.push(nfa.add_state(false));
        }
    }
    for (j, frame) in v.iter().enumerate() {
        for p in 0..n {
            for (t, &c) in frame.iter().enumerate() {
                let a = alphabet.index_of(c).unwrap();
                nfa.add_transition(const_state[j][p][t], Some(a), const_state[j][p][t + 1]);
            }
            if j < k {
                nfa.add_transition(const_state[j][p][frame.len()], None, var_state[j + 1][p]);
            }
        }
    }
    for j in 1..=k {
        for p in 0..n {
            for a in 0..alphabet.len() {
                nfa.add_transition(var_state[j][p], Some(a), var_state[j][h.step(p, a)]);
            }
            let jumped = run(h, p, &u[j]);
            nfa.add_transition(var_state[j][p], None, const_state[j][jumped][0]);
        }
    }
    let entry = run(h, h.initial(), &u[0]);
    nfa.add_initial(const_state[0][entry][0]);
    Ok(nfa)
}

/// A pair `(w_in, w_out)` related by a rule with `w_in ∈ L(h)`, `w_out ∉ L(h)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RuleViolation {
    pub w_in: String,
    pub w_out: String,
    /// Words assigned to the rule variables.
    pub assignment: Vec<String>,
}

struct RhsShape {
    prefix: Vec<char>,
    /// (variable, constant following this occurrence)
    occurrences: Vec<(usize, Vec<char>)>,
}

fn rhs_shape(rule: &RewriteRule) -> RhsShape {
    let mut shape = RhsShape { prefix: Vec::new(), occurrences: Vec::new() };
    for seg in rule.rhs() {
        match seg {
            Segment::Var(x) => shape.occurrences.push((*x, Vec::new())),
            Segment::Const(c) => match shape.occurrences.last_mut() {
                Some((_, after)) => after.extend(c.chars()),
                None => shape.prefix.extend(c.chars()),
            },
        }
    }
    shape
}

/// Searches for a pair of words related by `rule` leaving `L(h)`.
///
/// Variables are read one after another. While reading `x_j` the search
/// tracks the state transformation induced by the prefix of `x_j` read so
/// far, restricted to the states where its occurrences may start (all states
/// when `x_j` is copied), so copies and deletions on the right-hand side need
/// no guessing. The witness minimizes the total length of the assignment,
/// ties broken lexicographically.
pub fn rule_violation(h: &Dfa, rule: &RewriteRule) -> Result<Option<RuleViolation>, AutomataError> {
    check_alphabet(h, rule)?;
    let u = rule.lhs_frames();
    let k = rule.num_vars();
    let shape = rhs_shape(rule);
    let n = h.num_states();
    let copies: Vec<usize> = (0..k).map(|j| shape.occurrences.iter().filter(|(x, _)| *x == j).count()).collect();
    // Node layout: [phase, p_entry, r_entry, images of the tracked domain...].
    // phase in 0..k reads x_phase; phase == k is terminal, holding the final
    // lhs/rhs states.
    let domain = |phase: usize, p: u32, r: u32| -> Vec<u32> {
        if copies[phase] >= 2 {
            (0..n as u32).collect()
        } else {
            vec![p, r]
        }
    };
    let open = |phase: usize, p: u32, r: u32| -> Vec<u32> {
        let mut node = vec![phase as u32, p, r];
        if phase < k {
            node.extend(domain(phase, p, r));
        }
        node
    };
    let image = |node: &[u32], s: u32| -> u32 {
        let phase = node[0] as usize;
        if copies[phase] >= 2 {
            node[3 + s as usize]
        } else if s == node[1] {
            node[3]
        } else {
            debug_assert_eq!(s, node[2]);
            node[4]
        }
    };
    let mut ids: HashMap<Vec<u32>, usize> = HashMap::new();
    let mut nodes: Vec<Vec<u32>> = Vec::new();
    let intern = |node: Vec<u32>, ids: &mut HashMap<Vec<u32>, usize>, nodes: &mut Vec<Vec<u32>>| {
        *ids.entry(node.clone()).or_insert_with(|| {
            nodes.push(node);
            nodes.len() - 1
        })
    };
    let p0 = run(h, h.initial(), &u[0]) as u32;
    let r0 = run(h, h.initial(), &shape.prefix) as u32;
    let start = intern(open(0, p0, r0), &mut ids, &mut nodes);
    let nodes = std::cell::RefCell::new(nodes);
    let ids = std::cell::RefCell::new(ids);
    let close = |node: &[u32]| -> Vec<u32> {
        let phase = node[0] as usize;
        let p_end = image(node, node[1]);
        let p_next = run(h, p_end as usize, &u[phase + 1]) as u32;
        let mut r = node[2];
        for (x, after) in &shape.occurrences {
            if *x == phase {
                r = image(node, r);
                r = run(h, r as usize, after) as u32;
            }
        }
        open(phase + 1, p_next, r)
    };
    let found = lex_bfs(
        [start],
        h.alphabet().len(),
        |id| {
            let node = nodes.borrow()[id].clone();
            if node[0] as usize >= k {
                return Vec::new();
            }
            let next = close(&node);
            vec![intern(next, &mut ids.borrow_mut(), &mut nodes.borrow_mut())]
        },
        |id, a| {
            let mut node = nodes.borrow()[id].clone();
            if node[0] as usize >= k {
                return Vec::new();
            }
            for img in node[3..].iter_mut() {
                *img = h.step(*img as usize, a) as u32;
            }
            vec![intern(node, &mut ids.borrow_mut(), &mut nodes.borrow_mut())]
        },
        |id| {
            let node = &nodes.borrow()[id];
            node[0] as usize == k && h.is_accepting(node[1] as usize) && !h.is_accepting(node[2] as usize)
        },
    );
    let Some(found) = found else { return Ok(None) };
    let nodes = nodes.borrow();
    let mut assignment = vec![String::new(); k];
    for (label, id) in &found.path {
        if let Some(a) = label {
            assignment[nodes[*id][0] as usize].push(h.alphabet().symbol(*a));
        }
    }
    let (w_in, w_out) = rule.instantiate(&assignment);
    debug_assert!(h.accepts(&w_in) && !h.accepts(&w_out));
    Ok(Some(RuleViolation { w_in, w_out, assignment }))
}
