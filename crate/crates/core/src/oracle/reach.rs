//! Forward reachability inside a length window.
//!
//! A word `w` is looked up in the window of length `|w| + slack`: every
//! initial word up to that length is explored with every rule, dropping
//! successors longer than the window. Exhausting the window answers
//! `Unreachable`; this is exact for length-preserving systems and a
//! heuristic otherwise.

use std::collections::HashMap;
use std::sync::{Arc, Mutex};

use super::bounded::clause_successors;
use crate::automata::{regex_to_nfa, Dfa};
use crate::chc::{ClauseSystem, TransBody};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ReachConfig {
    pub slack: usize,
    pub depth_cap: usize,
    pub node_cap: usize,
}

impl Default for ReachConfig {
    fn default() -> Self {
        ReachConfig { slack: 2, depth_cap: 64, node_cap: 1_000_000 }
    }
}

/// Words from an initial word to the last one; each word carries the clause
/// that produced it (its Init clause for the first).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Derivation {
    pub steps: Vec<(String, usize)>,
}

impl Derivation {
    pub fn last(&self) -> &str {
        &self.steps.last().unwrap().0
    }

    /// Re-checks every step against the clause it names.
    pub fn replay(&self, sys: &ClauseSystem) -> Result<(), String> {
        let Some((first, init)) = self.steps.first() else { return Err("empty derivation".into()) };
        let c = sys
            .init_clauses
            .iter()
            .find(|c| c.clause_index == *init)
            .ok_or_else(|| format!("clause {init} is not an Init clause"))?;
        if !c.language.matches(first, &sys.alphabet) {
            return Err(format!("{first:?} is not an initial word of clause {init}"));
        }
        for pair in self.steps.windows(2) {
            let ((prev, _), (next, idx)) = (&pair[0], &pair[1]);
            let t = sys
                .trans_clauses
                .iter()
                .find(|t| t.clause_index == *idx)
                .ok_or_else(|| format!("clause {idx} is not a transition"))?;
            let bound = prev.chars().count().max(next.chars().count());
            if !clause_successors(t, prev, &sys.alphabet, bound).contains(next) {
                return Err(format!("clause {idx} does not rewrite {prev:?} to {next:?}"));
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Membership {
    Reachable(Derivation),
    Unreachable,
    Inconclusive,
}

#[derive(Debug)]
struct Window {
    /// (word, parent node, clause index), in discovery order.
    nodes: Vec<(String, Option<usize>, usize)>,
    index: HashMap<String, usize>,
    complete: bool,
}

impl Window {
    fn derivation(&self, mut node: usize) -> Derivation {
        let mut steps = Vec::new();
        loop {
            let (w, parent, clause) = &self.nodes[node];
            steps.push((w.clone(), *clause));
            match parent {
                Some(p) => node = *p,
                None => break,
            }
        }
        steps.reverse();
        Derivation { steps }
    }
}

/// Words of `lang` up to `max_len` in shortlex order; `None` past `cap`.
fn enumerate(lang: &Dfa, max_len: usize, cap: usize) -> Option<Vec<String>> {
    // States that can still reach acceptance.
    let n = lang.num_states();
    let k = lang.alphabet().len();
    let mut live: Vec<bool> = (0..n).map(|q| lang.is_accepting(q)).collect();
    loop {
        let mut changed = false;
        for q in 0..n {
            if !live[q] && (0..k).any(|a| live[lang.step(q, a)]) {
                live[q] = true;
                changed = true;
            }
        }
        if !changed {
            break;
        }
    }
    let mut out = Vec::new();
    let mut layer = vec![(String::new(), lang.initial())];
    for len in 0..=max_len {
        let mut next = Vec::new();
        for (w, q) in &layer {
            if lang.is_accepting(*q) {
                out.push(w.clone());
            }
            if len < max_len {
                for a in 0..k {
                    let t = lang.step(*q, a);
                    if live[t] {
                        next.push((format!("{w}{}", lang.alphabet().symbol(a)), t));
                    }
                }
            }
            if out.len() + next.len() > cap {
                return None;
            }
        }
        layer = next;
    }
    Some(out)
}

/// Reachability oracle with one cached window per length bound.
pub struct Reachability<'a> {
    sys: &'a ClauseSystem,
    cfg: ReachConfig,
    init: Vec<(usize, Dfa)>,
    windows: Mutex<HashMap<usize, Arc<Window>>>,
}

impl<'a> Reachability<'a> {
    pub fn new(sys: &'a ClauseSystem, cfg: ReachConfig) -> Self {
        let init = sys
            .init_clauses
            .iter()
            .map(|c| {
                let dfa = regex_to_nfa(&c.language, &sys.alphabet)
                    .and_then(|n| n.determinize())
                    .expect("init languages are over the system alphabet");
                (c.clause_index, dfa.minimize())
            })
            .collect();
        Reachability { sys, cfg, init, windows: Mutex::new(HashMap::new()) }
    }

    pub fn config(&self) -> ReachConfig {
        self.cfg
    }

    fn window(&self, max_len: usize) -> Arc<Window> {
        if let Some(w) = self.windows.lock().unwrap().get(&max_len) {
            return Arc::clone(w);
        }
        let w = Arc::new(self.explore(max_len));
        Arc::clone(self.windows.lock().unwrap().entry(max_len).or_insert(w))
    }

    fn explore(&self, max_len: usize) -> Window {
        let mut win = Window { nodes: Vec::new(), index: HashMap::new(), complete: true };
        let mut depth = Vec::new();
        for (clause, lang) in &self.init {
            let Some(words) = enumerate(lang, max_len, self.cfg.node_cap) else {
                win.complete = false;
                return win;
            };
            for w in words {
                if !win.index.contains_key(&w) {
                    win.index.insert(w.clone(), win.nodes.len());
                    win.nodes.push((w, None, *clause));
                    depth.push(0);
                }
            }
        }
        let mut head = 0;
        while head < win.nodes.len() {
            if win.nodes.len() > self.cfg.node_cap {
                win.complete = false;
                break;
            }
            if depth[head] >= self.cfg.depth_cap {
                win.complete = false;
                head += 1;
                continue;
            }
            let word = win.nodes[head].0.clone();
            for t in &self.sys.trans_clauses {
                let succs: Vec<String> = match &t.body {
                    TransBody::Rule(r) => r.apply(&word),
                    TransBody::Raw(_) => clause_successors(t, &word, &self.sys.alphabet, max_len).into_iter().collect(),
                };
                for s in succs {
                    if s.chars().count() <= max_len && !win.index.contains_key(&s) {
                        win.index.insert(s.clone(), win.nodes.len());
                        win.nodes.push((s, Some(head), t.clause_index));
                        depth.push(depth[head] + 1);
                    }
                }
            }
            head += 1;
        }
        win
    }

    /// Membership of `w` in the window `|w| + slack`.
    pub fn member(&self, w: &str) -> Membership {
        let win = self.window(w.chars().count() + self.cfg.slack);
        match win.index.get(w) {
            Some(&node) => Membership::Reachable(win.derivation(node)),
            None if win.complete => Membership::Unreachable,
            None => Membership::Inconclusive,
        }
    }
}

/// A derivation ending in a word of the Bad clause `bad_clause`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct UnsafeTrace {
    pub derivation: Derivation,
    pub bad_clause: usize,
}

impl UnsafeTrace {
    pub fn replay(&self, sys: &ClauseSystem) -> Result<(), String> {
        self.derivation.replay(sys)?;
        let last = self.derivation.last();
        let c = sys
            .bad_clauses
            .iter()
            .find(|c| c.clause_index == self.bad_clause)
            .ok_or_else(|| format!("clause {} is not a Bad clause", self.bad_clause))?;
        if c.language.matches(last, &sys.alphabet) {
            Ok(())
        } else {
            Err(format!("{last:?} is not a bad word"))
        }
    }
}

/// Explores windows of length 0, 1, 2, ... until a bad word shows up.
/// Gives up when a window hits a cap, when the nodes explored over all
/// windows exceed `cfg.node_cap`, or past length `cfg.depth_cap`.
/// `cfg.slack` is ignored.
pub fn find_unsafe_trace(sys: &ClauseSystem, cfg: ReachConfig) -> Option<UnsafeTrace> {
    let bad: Vec<(usize, Dfa)> = sys
        .bad_clauses
        .iter()
        .map(|c| {
            let d = regex_to_nfa(&c.language, &sys.alphabet)
                .and_then(|n| n.determinize())
                .expect("bad languages are over the system alphabet");
            (c.clause_index, d)
        })
        .collect();
    let reach = Reachability::new(sys, cfg);
    let mut spent = 0;
    for len in 0..=cfg.depth_cap {
        let win = reach.explore(len);
        spent += win.nodes.len();
        for (node, (w, _, _)) in win.nodes.iter().enumerate() {
            if let Some((idx, _)) = bad.iter().find(|(_, d)| d.accepts(w)) {
                return Some(UnsafeTrace { derivation: win.derivation(node), bad_clause: *idx });
            }
        }
        if !win.complete || spent > cfg.node_cap {
            break;
        }
    }
    None
}
