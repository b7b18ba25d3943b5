use std::collections::{BTreeMap, BTreeSet, HashMap, VecDeque};

use crate::oracle::{CexKind, Counterexample};

/// Learning evidence. Each word keeps the clause it came from.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Sample {
    pub pos: BTreeMap<String, usize>,
    pub neg: BTreeMap<String, usize>,
    pub imp: BTreeSet<(String, String, usize)>,
}

/// Chain from a positive word through implications to a negative word.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Contradiction {
    /// `(word, clause)`: the first word with the clause that made it
    /// positive, then each implication target with its clause.
    pub chain: Vec<(String, usize)>,
    /// Clause that made the last word negative.
    pub neg_clause: usize,
}

impl Sample {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn is_empty(&self) -> bool {
        self.pos.is_empty() && self.neg.is_empty() && self.imp.is_empty()
    }

    pub fn len(&self) -> usize {
        self.pos.len() + self.neg.len() + self.imp.len()
    }

    /// Adds the evidence; returns false if it was already present.
    pub fn add(&mut self, cex: &Counterexample) -> bool {
        let i = cex.clause_index;
        match &cex.kind {
            CexKind::Positive(w) => self.pos.insert(w.clone(), i).is_none(),
            CexKind::Negative(w) => self.neg.insert(w.clone(), i).is_none(),
            CexKind::Implication { w_in, w_out } => self.imp.insert((w_in.clone(), w_out.clone(), i)),
        }
    }

    /// Every word mentioned, deduplicated, in sorted order.
    pub fn words(&self) -> BTreeSet<&str> {
        let mut out: BTreeSet<&str> = self.pos.keys().chain(self.neg.keys()).map(String::as_str).collect();
        for (a, b, _) in &self.imp {
            out.insert(a);
            out.insert(b);
        }
        out
    }

    /// A positive word forced into a negative one by implications, found by
    /// breadth-first search so the chain is shortest.
    pub fn contradiction(&self) -> Option<Contradiction> {
        let mut succ: HashMap<&str, Vec<(&str, usize)>> = HashMap::new();
        for (a, b, i) in &self.imp {
            succ.entry(a.as_str()).or_default().push((b.as_str(), *i));
        }
        let mut parent: HashMap<&str, Option<(&str, usize)>> = HashMap::new();
        let mut queue = VecDeque::new();
        for w in self.pos.keys() {
            parent.insert(w, None);
            queue.push_back(w.as_str());
        }
        while let Some(w) = queue.pop_front() {
            if let Some(&neg_clause) = self.neg.get(w) {
                let mut chain = Vec::new();
                let mut cur = w;
                while let Some((prev, clause)) = parent[cur] {
                    chain.push((cur.to_string(), clause));
                    cur = prev;
                }
                chain.push((cur.to_string(), self.pos[cur]));
                chain.reverse();
                return Some(Contradiction { chain, neg_clause });
            }
            for &(next, clause) in succ.get(w).map(Vec::as_slice).unwrap_or(&[]) {
                if !parent.contains_key(next) {
                    parent.insert(next, Some((w, clause)));
                    queue.push_back(next);
                }
            }
        }
        None
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cex(kind: CexKind, clause_index: usize) -> Counterexample {
        Counterexample { kind, clause_index }
    }

    #[test]
    fn contradiction_chain() {
        let mut s = Sample::new();
        s.add(&cex(CexKind::Positive("MI".into()), 1));
        s.add(&cex(CexKind::Implication { w_in: "MI".into(), w_out: "MIU".into() }, 2));
        assert_eq!(s.contradiction(), None);
        assert!(!s.add(&cex(CexKind::Positive("MI".into()), 1)));
        s.add(&cex(CexKind::Negative("MIU".into()), 6));
        let c = s.contradiction().unwrap();
        assert_eq!(c.chain, vec![("MI".to_string(), 1), ("MIU".to_string(), 2)]);
        assert_eq!(c.neg_clause, 6);
    }
}
