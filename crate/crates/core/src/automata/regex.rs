use std::collections::BTreeSet;
use std::fmt;

use super::Alphabet;

/// Regular expression AST.
///
/// The associated constructors keep expressions normalized: nested `Concat`
/// and `Union` are flattened, `Epsilon` is dropped from concatenations,
/// `None` absorbs concatenations and vanishes from unions, duplicate union
/// branches are removed, and no list is left with fewer than two children.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Regex {
    None,
    Epsilon,
    Sym(char),
    Range(char, char),
    AllChar,
    Concat(Vec<Regex>),
    Union(Vec<Regex>),
    Star(Box<Regex>),
    Plus(Box<Regex>),
    Opt(Box<Regex>),
}

impl Regex {
    pub fn literal(word: &str) -> Regex {
        Regex::concat(word.chars().map(Regex::Sym).collect())
    }

    /// Inverted ranges denote the empty language, as in SMT-LIB.
    pub fn range(lo: char, hi: char) -> Regex {
        match lo.cmp(&hi) {
            std::cmp::Ordering::Greater => Regex::None,
            std::cmp::Ordering::Equal => Regex::Sym(lo),
            std::cmp::Ordering::Less => Regex::Range(lo, hi),
        }
    }

    pub fn concat(parts: Vec<Regex>) -> Regex {
        let mut out = Vec::with_capacity(parts.len());
        for p in parts {
            match p {
                Regex::None => return Regex::None,
                Regex::Epsilon => {}
                Regex::Concat(inner) => out.extend(inner),
                other => out.push(other),
            }
        }
        match out.len() {
            0 => Regex::Epsilon,
            1 => out.pop().unwrap(),
            _ => Regex::Concat(out),
        }
    }

    pub fn union(parts: Vec<Regex>) -> Regex {
        let mut out: Vec<Regex> = Vec::with_capacity(parts.len());
        for p in parts {
            let items = match p {
                Regex::None => continue,
                Regex::Union(inner) => inner,
                other => vec![other],
            };
            for item in items {
                if !out.contains(&item) {
                    out.push(item);
                }
            }
        }
        match out.len() {
            0 => Regex::None,
            1 => out.pop().unwrap(),
            _ => Regex::Union(out),
        }
    }

    pub fn star(r: Regex) -> Regex {
        Regex::Star(Box::new(r))
    }

    pub fn plus(r: Regex) -> Regex {
        Regex::Plus(Box::new(r))
    }

    pub fn opt(r: Regex) -> Regex {
        Regex::Opt(Box::new(r))
    }

    /// `Σ*` written with `AllChar`.
    pub fn all() -> Regex {
        Regex::star(Regex::AllChar)
    }

    /// Number of AST nodes.
    pub fn size(&self) -> usize {
        match self {
            Regex::Concat(v) | Regex::Union(v) => 1 + v.iter().map(Regex::size).sum::<usize>(),
            Regex::Star(r) | Regex::Plus(r) | Regex::Opt(r) => 1 + r.size(),
            _ => 1,
        }
    }

    /// Symbols mentioned literally, with ranges expanded.
    pub fn symbols(&self) -> BTreeSet<char> {
        let mut out = BTreeSet::new();
        self.collect_symbols(&mut out);
        out
    }

    fn collect_symbols(&self, out: &mut BTreeSet<char>) {
        match self {
            Regex::Sym(c) => {
                out.insert(*c);
            }
            Regex::Range(lo, hi) => out.extend(*lo..=*hi),
            Regex::Concat(v) | Regex::Union(v) => v.iter().for_each(|r| r.collect_symbols(out)),
            Regex::Star(r) | Regex::Plus(r) | Regex::Opt(r) => r.collect_symbols(out),
            Regex::None | Regex::Epsilon | Regex::AllChar => {}
        }
    }

    pub fn contains_allchar(&self) -> bool {
        match self {
            Regex::AllChar => true,
            Regex::Concat(v) | Regex::Union(v) => v.iter().any(Regex::contains_allchar),
            Regex::Star(r) | Regex::Plus(r) | Regex::Opt(r) => r.contains_allchar(),
            _ => false,
        }
    }

    pub fn nullable(&self) -> bool {
        match self {
            Regex::Epsilon | Regex::Star(_) | Regex::Opt(_) => true,
            Regex::None | Regex::Sym(_) | Regex::Range(..) | Regex::AllChar => false,
            Regex::Concat(v) => v.iter().all(Regex::nullable),
            Regex::Union(v) => v.iter().any(Regex::nullable),
            Regex::Plus(r) => r.nullable(),
        }
    }

    /// Brzozowski derivative with respect to `c`; `AllChar` ranges over
    /// `alphabet`.
    pub fn derivative(&self, c: char, alphabet: &Alphabet) -> Regex {
        match self {
            Regex::None | Regex::Epsilon => Regex::None,
            Regex::Sym(s) => {
                if *s == c {
                    Regex::Epsilon
                } else {
                    Regex::None
                }
            }
            Regex::Range(lo, hi) => {
                if *lo <= c && c <= *hi {
                    Regex::Epsilon
                } else {
                    Regex::None
                }
            }
            Regex::AllChar => {
                if alphabet.contains(c) {
                    Regex::Epsilon
                } else {
                    Regex::None
                }
            }
            Regex::Union(v) => Regex::union(v.iter().map(|r| r.derivative(c, alphabet)).collect()),
            Regex::Concat(v) => {
                let mut branches = Vec::new();
                for i in 0..v.len() {
                    let mut parts = vec![v[i].derivative(c, alphabet)];
                    parts.extend(v[i + 1..].iter().cloned());
                    branches.push(Regex::concat(parts));
                    if !v[i].nullable() {
                        break;
                    }
                }
                Regex::union(branches)
            }
            Regex::Star(r) => Regex::concat(vec![r.derivative(c, alphabet), self.clone()]),
            Regex::Plus(r) => Regex::concat(vec![r.derivative(c, alphabet), Regex::star((**r).clone())]),
            Regex::Opt(r) => r.derivative(c, alphabet),
        }
    }

    /// Membership by repeated derivation; independent of the automaton
    /// constructions.
    pub fn matches(&self, word: &str, alphabet: &Alphabet) -> bool {
        let mut r = self.clone();
        for c in word.chars() {
            r = r.derivative(c, alphabet);
            if r == Regex::None {
                return false;
            }
        }
        r.nullable()
    }
}

fn precedence(r: &Regex) -> u8 {
    match r {
        Regex::Union(_) => 0,
        Regex::Concat(_) => 1,
        Regex::Star(_) | Regex::Plus(_) | Regex::Opt(_) => 2,
        _ => 3,
    }
}

fn write_child(f: &mut fmt::Formatter<'_>, r: &Regex, min: u8) -> fmt::Result {
    if precedence(r) < min {
        write!(f, "({r})")
    } else {
        write!(f, "{r}")
    }
}

/// Compact human-readable notation, e.g. `rn(nn)*b`.
impl fmt::Display for Regex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Regex::None => f.write_str("∅"),
            Regex::Epsilon => f.write_str("ε"),
            Regex::Sym(c) => match c {
                '(' | ')' | '|' | '*' | '+' | '?' | '.' | '[' | ']' | '\\' => write!(f, "\\{c}"),
                _ => write!(f, "{c}"),
            },
            Regex::Range(lo, hi) => write!(f, "[{lo}-{hi}]"),
            Regex::AllChar => f.write_str("."),
            Regex::Concat(v) => v.iter().try_for_each(|r| write_child(f, r, 2)),
            Regex::Union(v) => {
                for (i, r) in v.iter().enumerate() {
                    if i > 0 {
                        f.write_str("|")?;
                    }
                    write_child(f, r, 1)?;
                }
                Ok(())
            }
            Regex::Star(r) => {
                write_child(f, r, 3)?;
                f.write_str("*")
            }
            Regex::Plus(r) => {
                write_child(f, r, 3)?;
                f.write_str("+")
            }
            Regex::Opt(r) => {
                write_child(f, r, 3)?;
                f.write_str("?")
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn constructors_normalize() {
        assert_eq!(Regex::concat(vec![Regex::Epsilon, Regex::Sym('a')]), Regex::Sym('a'));
        assert_eq!(Regex::concat(vec![Regex::None, Regex::Sym('a')]), Regex::None);
        assert_eq!(Regex::union(vec![Regex::None, Regex::Sym('a')]), Regex::Sym('a'));
        assert_eq!(
            Regex::union(vec![Regex::Sym('a'), Regex::union(vec![Regex::Sym('b'), Regex::Sym('a')])]),
            Regex::Union(vec![Regex::Sym('a'), Regex::Sym('b')])
        );
        assert_eq!(Regex::literal(""), Regex::Epsilon);
        assert_eq!(Regex::range('b', 'a'), Regex::None);
    }

    #[test]
    fn derivative_matching() {
        let sigma = Alphabet::new("rbn".chars());
        // rn(nn)*b
        let r = Regex::concat(vec![Regex::literal("rn"), Regex::star(Regex::literal("nn")), Regex::Sym('b')]);
        assert!(r.matches("rnb", &sigma));
        assert!(r.matches("rnnnb", &sigma));
        assert!(!r.matches("rnnb", &sigma));
        assert!(!r.matches("rb", &sigma));
        assert_eq!(r.to_string(), "rn(nn)*b");
        assert_eq!(Regex::star(Regex::Sym('n')).to_string(), "n*");
        assert_eq!(Regex::star(Regex::star(Regex::Sym('n'))).to_string(), "(n*)*");
        assert!(Regex::all().matches("xyz", &Alphabet::new("xyz".chars())));
        assert!(!Regex::all().matches("q", &sigma));
    }
}
