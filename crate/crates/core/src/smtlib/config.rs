use std::path::Path;
use std::time::Duration;

use super::SmtError;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SessionMode {
    /// One session per clause, preloaded with the clause constraints.
    PerClause,
    /// One session; every clause check is its own push/pop scope.
    Single,
}

/// External solver settings, read from a `key=value` file.
///
/// Keys: `command`, `args` (whitespace separated), `logic`, `interactive`,
/// `session_mode` (`per-clause` or `single`), `timeout_ms`. Blank lines and
/// lines starting with `#` are ignored.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SolverConfig {
    pub command: String,
    pub args: Vec<String>,
    pub logic: String,
    pub interactive: bool,
    pub session_mode: SessionMode,
    pub timeout: Duration,
}

impl SolverConfig {
    pub fn new(command: impl Into<String>, args: Vec<String>) -> Self {
        SolverConfig {
            command: command.into(),
            args,
            logic: "QF_S".into(),
            interactive: true,
            session_mode: SessionMode::PerClause,
            timeout: Duration::from_secs(10),
        }
    }

    pub fn parse(text: &str) -> Result<Self, SmtError> {
        let bad = |m: String| SmtError::Config(m);
        let mut cfg = SolverConfig::new("", Vec::new());
        for (n, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let (key, value) = line.split_once('=').ok_or_else(|| bad(format!("line {}: missing '='", n + 1)))?;
            let value = value.trim();
            match key.trim() {
                "command" => cfg.command = value.to_string(),
                "args" => cfg.args = value.split_whitespace().map(String::from).collect(),
                "logic" => cfg.logic = value.to_string(),
                "interactive" => cfg.interactive = value.parse().map_err(|_| bad(format!("interactive={value}")))?,
                "session_mode" => {
                    cfg.session_mode = match value {
                        "per-clause" => SessionMode::PerClause,
                        "single" => SessionMode::Single,
                        _ => return Err(bad(format!("session_mode={value}"))),
                    }
                }
                "timeout_ms" => {
                    let ms: u64 = value.parse().map_err(|_| bad(format!("timeout_ms={value}")))?;
                    cfg.timeout = Duration::from_millis(ms);
                }
                other => return Err(bad(format!("unknown key {other:?}"))),
            }
        }
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn load(path: &Path) -> Result<Self, SmtError> {
        let text = std::fs::read_to_string(path).map_err(|e| SmtError::Config(format!("{}: {e}", path.display())))?;
        Self::parse(&text)
    }

    pub fn validate(&self) -> Result<(), SmtError> {
        if self.command.is_empty() {
            return Err(SmtError::Config("command is empty".into()));
        }
        if self.timeout.is_zero() {
            return Err(SmtError::Config("timeout must be positive".into()));
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_all_keys() {
        let cfg = SolverConfig::parse(
            "# z3\ncommand = z3\nargs = -in -smt2\nlogic=ALL\ninteractive=false\nsession_mode=single\ntimeout_ms=250\n",
        )
        .unwrap();
        assert_eq!(cfg.command, "z3");
        assert_eq!(cfg.args, ["-in", "-smt2"]);
        assert_eq!(cfg.logic, "ALL");
        assert!(!cfg.interactive);
        assert_eq!(cfg.session_mode, SessionMode::Single);
        assert_eq!(cfg.timeout, Duration::from_millis(250));
    }

    #[test]
    fn rejects_bad_values() {
        assert!(SolverConfig::parse("args=x").is_err());
        assert!(SolverConfig::parse("command=z3\ntimeout_ms=0").is_err());
        assert!(SolverConfig::parse("command=z3\nsession_mode=many").is_err());
        assert!(SolverConfig::parse("command=z3\ncolour=red").is_err());
        assert!(SolverConfig::parse("command z3").is_err());
    }
}
