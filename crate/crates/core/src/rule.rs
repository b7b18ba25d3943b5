//! Structured string rewrite rules extracted from transition clauses.
//!
//! A rule `u0 X1 u1 .. Xk uk -> rhs` relates `w_in` to `w_out` when some
//! assignment of words to `X1..Xk` spells `w_in` on the left and `w_out` on
//! the right. Left-hand variables are pairwise distinct. The right-hand side
//! mentions them in non-decreasing order, so a variable may be copied
//! (`M x -> M x x`) or dropped, but never moved past another one.

use std::collections::BTreeSet;
use std::fmt;

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Segment {
    Var(usize),
    Const(String),
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct RewriteRule {
    lhs: Vec<Segment>,
    rhs: Vec<Segment>,
}

#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum RuleError {
    #[error("right-hand side reorders variables")]
    VariableOrder,
    #[error("right-hand side uses a variable absent from the left-hand side")]
    UnboundVariable,
    #[error("variable occurs more than once on the left-hand side")]
    RepeatedVariable,
    #[error("both sides of the rule are empty")]
    EmptyRule,
}

fn normalize(side: Vec<Segment>) -> Vec<Segment> {
    let mut out: Vec<Segment> = Vec::with_capacity(side.len());
    for seg in side {
        match seg {
            Segment::Const(c) if c.is_empty() => {}
            Segment::Const(c) => {
                if let Some(Segment::Const(prev)) = out.last_mut() {
                    prev.push_str(&c);
                } else {
                    out.push(Segment::Const(c));
                }
            }
            v => out.push(v),
        }
    }
    out
}

fn vars(side: &[Segment]) -> Vec<usize> {
    side.iter()
        .filter_map(|s| match s {
            Segment::Var(v) => Some(*v),
            _ => None,
        })
        .collect()
}

impl RewriteRule {
    /// Builds a normalized rule: empty constants are dropped, adjacent
    /// constants fused, and variables renumbered `0..k` in left-hand order.
    pub fn new(lhs: Vec<Segment>, rhs: Vec<Segment>) -> Result<Self, RuleError> {
        let lhs = normalize(lhs);
        let rhs = normalize(rhs);
        let lv = vars(&lhs);
        if lv.iter().collect::<BTreeSet<_>>().len() != lv.len() {
            return Err(RuleError::RepeatedVariable);
        }
        if lhs.is_empty() && rhs.is_empty() {
            return Err(RuleError::EmptyRule);
        }
        let index = |v: usize| lv.iter().position(|&x| x == v);
        let mut last = 0;
        for v in vars(&rhs) {
            let i = index(v).ok_or(RuleError::UnboundVariable)?;
            if i < last {
                return Err(RuleError::VariableOrder);
            }
            last = i;
        }
        let rename = |side: Vec<Segment>| -> Vec<Segment> {
            side.into_iter()
                .map(|s| match s {
                    Segment::Var(v) => Segment::Var(index(v).unwrap()),
                    c => c,
                })
                .collect()
        };
        Ok(RewriteRule { lhs: rename(lhs), rhs: rename(rhs) })
    }

    pub fn lhs(&self) -> &[Segment] {
        &self.lhs
    }

    pub fn rhs(&self) -> &[Segment] {
        &self.rhs
    }

    pub fn num_vars(&self) -> usize {
        vars(&self.lhs).len()
    }

    /// Left-hand constant frames `u0..uk` around the `k` variables.
    pub fn lhs_frames(&self) -> Vec<Vec<char>> {
        let mut frames = vec![Vec::new()];
        for seg in &self.lhs {
            match seg {
                Segment::Var(_) => frames.push(Vec::new()),
                Segment::Const(c) => frames.last_mut().unwrap().extend(c.chars()),
            }
        }
        frames
    }

    /// Right-hand side frames, when it uses every variable exactly once:
    /// `v0..vk` with `rhs = v0 X1 v1 .. Xk vk`.
    pub fn rhs_frames(&self) -> Option<Vec<Vec<char>>> {
        if !self.is_copy_free() {
            return None;
        }
        let mut frames = vec![Vec::new()];
        for seg in &self.rhs {
            match seg {
                Segment::Var(_) => frames.push(Vec::new()),
                Segment::Const(c) => frames.last_mut().unwrap().extend(c.chars()),
            }
        }
        Some(frames)
    }

    /// Both sides mention the same variables once each.
    pub fn is_copy_free(&self) -> bool {
        vars(&self.lhs) == vars(&self.rhs)
    }

    /// True when the rule never changes word length.
    pub fn is_length_preserving(&self) -> bool {
        let Some(v) = self.rhs_frames() else { return false };
        self.lhs_frames().iter().zip(&v).all(|(a, b)| a.len() == b.len())
    }

    /// Every word obtained by applying the rule once to `word`, at any match
    /// position, in ascending order.
    pub fn apply(&self, word: &str) -> Vec<String> {
        let w: Vec<char> = word.chars().collect();
        let mut out = BTreeSet::new();
        for binding in match_frames(&w, &self.lhs_frames()) {
            out.insert(self.instantiate_rhs(&w, &binding));
        }
        out.into_iter().collect()
    }

    pub(crate) fn instantiate_rhs(&self, w: &[char], binding: &[(usize, usize)]) -> String {
        let mut s = String::new();
        for seg in &self.rhs {
            match seg {
                Segment::Var(v) => {
                    let (a, b) = binding[*v];
                    s.extend(&w[a..b]);
                }
                Segment::Const(c) => s.push_str(c),
            }
        }
        s
    }

    /// Builds `(lhs, rhs)` words from an assignment of the variables.
    pub fn instantiate(&self, assignment: &[String]) -> (String, String) {
        let side = |segs: &[Segment]| {
            let mut s = String::new();
            for seg in segs {
                match seg {
                    Segment::Var(v) => s.push_str(&assignment[*v]),
                    Segment::Const(c) => s.push_str(c),
                }
            }
            s
        };
        (side(&self.lhs), side(&self.rhs))
    }

    pub fn relates(&self, w_in: &str, w_out: &str) -> bool {
        self.apply(w_in).iter().any(|w| w == w_out)
    }
}

/// All ways of splitting `w` as `u0 x1 u1 .. xk uk`; each result lists the
/// `[start, end)` span of every `x_j`.
pub(crate) fn match_frames(w: &[char], u: &[Vec<char>]) -> Vec<Vec<(usize, usize)>> {
    let k = u.len() - 1;
    let mut out = Vec::new();
    if !w.starts_with(&u[0]) {
        return out;
    }
    if k == 0 {
        if w.len() == u[0].len() {
            out.push(Vec::new());
        }
        return out;
    }
    let mut spans = Vec::with_capacity(k);
    split_rest(w, u, 1, u[0].len(), &mut spans, &mut out);
    out
}

fn split_rest(
    w: &[char],
    u: &[Vec<char>],
    j: usize,
    pos: usize,
    spans: &mut Vec<(usize, usize)>,
    out: &mut Vec<Vec<(usize, usize)>>,
) {
    let k = u.len() - 1;
    let frame = &u[j];
    if j == k {
        if w.len() >= pos + frame.len() && w.ends_with(frame) {
            spans.push((pos, w.len() - frame.len()));
            out.push(spans.clone());
            spans.pop();
        }
        return;
    }
    if w.len() < frame.len() {
        return;
    }
    for start in pos..=w.len() - frame.len() {
        if w[start..].starts_with(frame) {
            spans.push((pos, start));
            split_rest(w, u, j + 1, start + frame.len(), spans, out);
            spans.pop();
        }
    }
}

impl fmt::Display for Segment {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Segment::Var(v) => write!(f, "x{v}"),
            Segment::Const(c) => write!(f, "{c:?}"),
        }
    }
}

impl fmt::Display for RewriteRule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let side = |f: &mut fmt::Formatter<'_>, s: &[Segment]| -> fmt::Result {
            if s.is_empty() {
                return f.write_str("\"\"");
            }
            for (i, seg) in s.iter().enumerate() {
                if i > 0 {
                    f.write_str(" ")?;
                }
                write!(f, "{seg}")?;
            }
            Ok(())
        };
        side(f, &self.lhs)?;
        f.write_str(" -> ")?;
        side(f, &self.rhs)
    }
}
