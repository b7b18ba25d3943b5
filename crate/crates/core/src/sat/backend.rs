use std::io::Write;
use std::path::PathBuf;
use std::process::{Command, Stdio};
use std::sync::atomic::{AtomicUsize, Ordering};

use varisat::{ExtendFormula, Lit, Solver};

use super::{CnfInstance, SatError};

/// Decides a CNF. `Ok(Some(model))` indexes the model by variable with
/// slot 0 unused.
pub trait SatBackend: Send {
    fn solve(&mut self, cnf: &CnfInstance) -> Result<Option<Vec<bool>>, SatError>;
}

/// In-process CDCL search.
#[derive(Debug, Default, Clone, Copy)]
pub struct VarisatBackend;

impl SatBackend for VarisatBackend {
    fn solve(&mut self, cnf: &CnfInstance) -> Result<Option<Vec<bool>>, SatError> {
        let mut solver = Solver::new();
        for c in &cnf.clauses {
            let lits: Vec<Lit> = c.iter().map(|&l| Lit::from_dimacs(l as isize)).collect();
            solver.add_clause(&lits);
        }
        if !solver.solve().map_err(|e| SatError::BackendFailure(e.to_string()))? {
            return Ok(None);
        }
        let mut model = vec![false; cnf.num_vars + 1];
        for lit in solver.model().unwrap_or_default() {
            let v = lit.var().to_dimacs() as usize;
            if v <= cnf.num_vars {
                model[v] = lit.is_positive();
            }
        }
        Ok(Some(model))
    }
}

/// External solver fed a DIMACS file, answering in the competition
/// format (`s SATISFIABLE` / `s UNSATISFIABLE` and `v` lines).
#[derive(Debug, Clone)]
pub struct ExternalBackend {
    pub command: String,
    /// Arguments placed before the CNF file path.
    pub args: Vec<String>,
}

static FILE_COUNTER: AtomicUsize = AtomicUsize::new(0);

impl SatBackend for ExternalBackend {
    fn solve(&mut self, cnf: &CnfInstance) -> Result<Option<Vec<bool>>, SatError> {
        let fail = |m: String| SatError::BackendFailure(m);
        let path: PathBuf = std::env::temp_dir().join(format!(
            "hornstr-{}-{}.cnf",
            std::process::id(),
            FILE_COUNTER.fetch_add(1, Ordering::Relaxed)
        ));
        std::fs::File::create(&path)
            .and_then(|mut f| f.write_all(cnf.to_dimacs().as_bytes()))
            .map_err(|e| fail(format!("writing {}: {e}", path.display())))?;
        let output = Command::new(&self.command).args(&self.args).arg(&path).stdin(Stdio::null()).output();
        let _ = std::fs::remove_file(&path);
        let output = output.map_err(|e| fail(format!("running {}: {e}", self.command)))?;
        parse_competition_output(&String::from_utf8_lossy(&output.stdout), cnf.num_vars)
    }
}

/// Parses `s`/`v` lines of a SAT competition style answer.
pub fn parse_competition_output(text: &str, num_vars: usize) -> Result<Option<Vec<bool>>, SatError> {
    let mut status = None;
    let mut model = vec![false; num_vars + 1];
    for line in text.lines() {
        let line = line.trim();
        if let Some(s) = line.strip_prefix("s ") {
            status = Some(s.trim().to_string());
        } else if let Some(v) = line.strip_prefix("v ") {
            for tok in v.split_whitespace() {
                let l: i64 = tok.parse().map_err(|_| SatError::BackendFailure(format!("bad literal {tok}")))?;
                let var = l.unsigned_abs() as usize;
                if l != 0 && var <= num_vars {
                    model[var] = l > 0;
                }
            }
        }
    }
    match status.as_deref() {
        Some("SATISFIABLE") => Ok(Some(model)),
        Some("UNSATISFIABLE") => Ok(None),
        other => Err(SatError::BackendFailure(format!("unexpected solver status {other:?}"))),
    }
}
