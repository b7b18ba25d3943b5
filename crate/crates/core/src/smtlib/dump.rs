use std::path::{Path, PathBuf};

use super::{kind_name, ClauseQuery};

/// Writes every issued query as a standalone script
/// `{benchmark}_{kind}_{counter}.smt2`.
#[derive(Debug)]
pub struct QueryDumper {
    dir: PathBuf,
    benchmark: String,
    logic: String,
    counter: usize,
}

impl QueryDumper {
    pub fn new(dir: &Path, benchmark: &str, logic: &str) -> std::io::Result<Self> {
        std::fs::create_dir_all(dir)?;
        Ok(QueryDumper {
            dir: dir.to_path_buf(),
            benchmark: benchmark.to_string(),
            logic: logic.to_string(),
            counter: 0,
        })
    }

    pub fn count(&self) -> usize {
        self.counter
    }

    pub fn dump(&mut self, q: &ClauseQuery, status: Option<&str>) -> std::io::Result<PathBuf> {
        let path = self.dir.join(format!("{}_{}_{}.smt2", self.benchmark, kind_name(q.kind), self.counter));
        self.counter += 1;
        std::fs::write(&path, q.script(&self.logic, status))?;
        Ok(path)
    }
}
