//! Breadth-first witness search returning the lexicographically least among
//! the shortest accepted words.
//!
//! Layers are kept sorted by the least word reaching each node; epsilon
//! successors are inserted directly behind the node that reaches them, so
//! they share its rank.

use std::collections::HashMap;
use std::hash::Hash;

pub(crate) struct Found<N> {
    /// Symbols read along the path.
    pub word: Vec<usize>,
    /// Nodes visited, each with the label of the edge entering it
    /// (`None` for the start node and for epsilon edges).
    pub path: Vec<(Option<usize>, N)>,
}

pub(crate) fn lex_bfs<N, E, S, G>(
    starts: impl IntoIterator<Item = N>,
    num_symbols: usize,
    mut eps: E,
    mut step: S,
    mut goal: G,
) -> Option<Found<N>>
where
    N: Copy + Eq + Hash,
    E: FnMut(N) -> Vec<N>,
    S: FnMut(N, usize) -> Vec<N>,
    G: FnMut(N) -> bool,
{
    let mut parent: HashMap<N, Option<(N, Option<usize>)>> = HashMap::new();
    let mut layer = Vec::new();
    for s in starts {
        discover(s, None, &mut parent, &mut layer, &mut eps);
    }
    while !layer.is_empty() {
        if let Some(&hit) = layer.iter().find(|&&n| goal(n)) {
            return Some(reconstruct(hit, &parent));
        }
        let mut next = Vec::new();
        for &node in &layer {
            for a in 0..num_symbols {
                for succ in step(node, a) {
                    discover(succ, Some((node, Some(a))), &mut parent, &mut next, &mut eps);
                }
            }
        }
        layer = next;
    }
    None
}

fn discover<N, E>(
    node: N,
    via: Option<(N, Option<usize>)>,
    parent: &mut HashMap<N, Option<(N, Option<usize>)>>,
    layer: &mut Vec<N>,
    eps: &mut E,
) where
    N: Copy + Eq + Hash,
    E: FnMut(N) -> Vec<N>,
{
    if parent.contains_key(&node) {
        return;
    }
    parent.insert(node, via);
    layer.push(node);
    for succ in eps(node) {
        discover(succ, Some((node, None)), parent, layer, eps);
    }
}

fn reconstruct<N: Copy + Eq + Hash>(hit: N, parent: &HashMap<N, Option<(N, Option<usize>)>>) -> Found<N> {
    let mut path = Vec::new();
    let mut cur = hit;
    loop {
        match parent[&cur] {
            None => {
                path.push((None, cur));
                break;
            }
            Some((prev, label)) => {
                path.push((label, cur));
                cur = prev;
            }
        }
    }
    path.reverse();
    let word = path.iter().filter_map(|(l, _)| *l).collect();
    Found { word, path }
}
