use std::collections::BTreeMap;
use std::fmt::Write;

use super::Dfa;

impl Dfa {
    /// Graphviz rendering: one node per state, accepting states doubly
    /// circled, parallel edges merged into one comma-separated label.
    pub fn to_dot(&self, name: &str) -> String {
        let mut out = String::new();
        writeln!(out, "digraph \"{}\" {{", name.replace('"', "\\\"")).unwrap();
        writeln!(out, "  rankdir=LR;").unwrap();
        writeln!(out, "  __start [shape=point];").unwrap();
        for q in 0..self.num_states() {
            let shape = if self.is_accepting(q) { "doublecircle" } else { "circle" };
            writeln!(out, "  q{q} [shape={shape}];").unwrap();
        }
        writeln!(out, "  __start -> q{};", self.initial()).unwrap();
        for q in 0..self.num_states() {
            let mut edges: BTreeMap<usize, Vec<char>> = BTreeMap::new();
            for (a, &c) in self.alphabet().symbols().iter().enumerate() {
                edges.entry(self.step(q, a)).or_default().push(c);
            }
            for (t, syms) in edges {
                let label: Vec<String> =
                    syms.iter().map(|c| c.escape_default().to_string().replace('"', "\\\"")).collect();
                writeln!(out, "  q{q} -> q{t} [label=\"{}\"];", label.join(",")).unwrap();
            }
        }
        out.push_str("}\n");
        out
    }
}

#[cfg(test)]
mod tests {
    use crate::automata::{Alphabet, Dfa};

    #[test]
    fn groups_symbols_per_edge() {
        let d = Dfa::from_fn(Alphabet::new("ab".chars()), 2, 0, |q, a| if a == 0 { 1 - q } else { q }, |q| q == 1);
        let dot = d.to_dot("parity");
        assert!(dot.contains("q1 [shape=doublecircle]"));
        assert!(dot.contains("q0 -> q1 [label=\"a\"]"));
        assert!(dot.contains("q0 -> q0 [label=\"b\"]"));
        let all = Dfa::trivial(Alphabet::new("ab".chars()), true);
        assert!(all.to_dot("x").contains("q0 -> q0 [label=\"a,b\"]"));
    }
}
