use std::fmt::Write as _;

/// CNF over variables `1..=num_vars`; literals are signed DIMACS numbers.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct CnfInstance {
    pub num_vars: usize,
    pub clauses: Vec<Vec<i32>>,
}

impl CnfInstance {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn new_var(&mut self) -> i32 {
        self.num_vars += 1;
        self.num_vars as i32
    }

    pub fn add_clause(&mut self, clause: impl Into<Vec<i32>>) {
        let clause = clause.into();
        debug_assert!(clause.iter().all(|&l| l != 0 && l.unsigned_abs() as usize <= self.num_vars));
        self.clauses.push(clause);
    }

    /// Pairwise exactly-one.
    pub fn exactly_one(&mut self, lits: &[i32]) {
        self.add_clause(lits.to_vec());
        for (i, &a) in lits.iter().enumerate() {
            for &b in &lits[i + 1..] {
                self.add_clause(vec![-a, -b]);
            }
        }
    }

    pub fn to_dimacs(&self) -> String {
        let mut out = format!("p cnf {} {}\n", self.num_vars, self.clauses.len());
        for c in &self.clauses {
            for l in c {
                write!(out, "{l} ").unwrap();
            }
            out.push_str("0\n");
        }
        out
    }

    pub fn from_dimacs(text: &str) -> Result<Self, String> {
        let mut cnf = CnfInstance::new();
        let mut current = Vec::new();
        let mut header = false;
        for line in text.lines() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('c') || line.starts_with('%') {
                continue;
            }
            if let Some(rest) = line.strip_prefix("p") {
                let fields: Vec<&str> = rest.split_whitespace().collect();
                match fields.as_slice() {
                    ["cnf", v, _] => cnf.num_vars = v.parse().map_err(|_| format!("bad header: {line}"))?,
                    _ => return Err(format!("bad header: {line}")),
                }
                header = true;
                continue;
            }
            for tok in line.split_whitespace() {
                let l: i32 = tok.parse().map_err(|_| format!("bad literal {tok}"))?;
                if l == 0 {
                    cnf.clauses.push(std::mem::take(&mut current));
                } else {
                    if l.unsigned_abs() as usize > cnf.num_vars {
                        return Err(format!("literal {l} exceeds the declared variable count"));
                    }
                    current.push(l);
                }
            }
        }
        if !header {
            return Err("missing problem line".into());
        }
        if !current.is_empty() {
            cnf.clauses.push(current);
        }
        Ok(cnf)
    }

    /// Whether `model` (indexed by variable, slot 0 unused) satisfies every
    /// clause.
    pub fn satisfied_by(&self, model: &[bool]) -> bool {
        self.clauses.iter().all(|c| c.iter().any(|&l| model[l.unsigned_abs() as usize] == (l > 0)))
    }
}
