//! Interactive solver processes speaking SMT-LIB over stdin/stdout.

use std::io::{BufRead, BufReader, Read, Write};
use std::process::{Child, ChildStdin, Command, Stdio};
use std::sync::mpsc::{self, Receiver, RecvTimeoutError};
use std::time::Instant;

use super::{parse_model, SmtError, SolverConfig};

/// `get-value` bindings: constant name and string value.
pub type Model = Vec<(String, String)>;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SatStatus {
    Sat,
    Unsat,
    Unknown,
}

impl SatStatus {
    pub fn as_str(self) -> &'static str {
        match self {
            SatStatus::Sat => "sat",
            SatStatus::Unsat => "unsat",
            SatStatus::Unknown => "unknown",
        }
    }
}

struct Process {
    child: Child,
    stdin: ChildStdin,
    lines: Receiver<String>,
}

impl Process {
    fn spawn(cfg: &SolverConfig) -> Result<Self, SmtError> {
        let mut child = Command::new(&cfg.command)
            .args(&cfg.args)
            .stdin(Stdio::piped())
            .stdout(Stdio::piped())
            .stderr(Stdio::null())
            .spawn()
            .map_err(|e| SmtError::SpawnFailure { command: cfg.command.clone(), reason: e.to_string() })?;
        let stdin = child.stdin.take().unwrap();
        let stdout = child.stdout.take().unwrap();
        let (tx, lines) = mpsc::channel();
        std::thread::spawn(move || {
            for line in BufReader::new(stdout).lines() {
                let Ok(line) = line else { break };
                if tx.send(line).is_err() {
                    break;
                }
            }
        });
        Ok(Process { child, stdin, lines })
    }

    fn kill(mut self) {
        let _ = writeln!(self.stdin, "(exit)");
        let _ = self.child.kill();
        let _ = self.child.wait();
    }
}

/// Balance of parentheses outside string literals and quoted symbols.
fn depth_change(text: &str, mut in_string: bool) -> (i64, bool) {
    let mut depth = 0;
    let mut quoted = false;
    for c in text.chars() {
        match c {
            '"' if !quoted => in_string = !in_string,
            '|' if !in_string => quoted = !quoted,
            '(' if !in_string && !quoted => depth += 1,
            ')' if !in_string && !quoted => depth -= 1,
            _ => {}
        }
    }
    (depth, in_string)
}

/// One solver process with an assertion-stack depth counter. Pushes are
/// always matched by pops, also on error paths; a restart resets the depth
/// to zero and replays the preamble.
pub struct Session {
    cfg: SolverConfig,
    process: Option<Process>,
    preamble: Vec<String>,
    depth: usize,
    restarted: bool,
    dead: bool,
    clause_index: Option<usize>,
    transcript: Vec<String>,
}

impl Session {
    /// Starts the solver and sends the handshake followed by `preamble`
    /// (declarations and assertions that stay fixed for the session).
    pub fn open(cfg: &SolverConfig, preamble: Vec<String>, clause_index: Option<usize>) -> Result<Self, SmtError> {
        cfg.validate()?;
        let mut s = Session {
            cfg: cfg.clone(),
            process: None,
            preamble,
            depth: 0,
            restarted: false,
            dead: false,
            clause_index,
            transcript: Vec::new(),
        };
        s.start()?;
        Ok(s)
    }

    fn start(&mut self) -> Result<(), SmtError> {
        self.process = Some(Process::spawn(&self.cfg)?);
        self.depth = 0;
        let handshake = |s: &mut Self| -> Result<(), SmtError> {
            s.command("(set-option :print-success true)")?;
            s.command("(set-option :produce-models true)")?;
            s.command(&format!("(set-logic {})", s.cfg.logic))?;
            for cmd in s.preamble.clone() {
                s.command(&cmd)?;
            }
            Ok(())
        };
        handshake(self).map_err(|e| {
            if let Some(p) = self.process.take() {
                p.kill();
            }
            SmtError::HandshakeFailure(e.to_string())
        })
    }

    pub fn depth(&self) -> usize {
        self.depth
    }

    pub fn is_dead(&self) -> bool {
        self.dead
    }

    pub fn clause_index(&self) -> Option<usize> {
        self.clause_index
    }

    /// Commands and responses exchanged so far, most recent last.
    pub fn transcript(&self) -> &[String] {
        &self.transcript
    }

    fn log(&mut self, line: String) {
        if self.transcript.len() >= 256 {
            self.transcript.drain(..128);
        }
        self.transcript.push(line);
    }

    fn send(&mut self, cmd: &str) -> Result<(), SmtError> {
        self.log(format!("> {cmd}"));
        let p = self.process.as_mut().ok_or(SmtError::SessionDead)?;
        writeln!(p.stdin, "{cmd}")
            .and_then(|_| p.stdin.flush())
            .map_err(|e| SmtError::SolverError(format!("write failed: {e}")))
    }

    /// Reads one complete response, which may span several lines.
    fn read_response(&mut self) -> Result<String, SmtError> {
        let deadline = Instant::now() + self.cfg.timeout;
        let p = self.process.as_mut().ok_or(SmtError::SessionDead)?;
        let mut text = String::new();
        let mut depth = 0;
        let mut in_string = false;
        loop {
            let left = deadline.saturating_duration_since(Instant::now());
            let line = match p.lines.recv_timeout(left) {
                Ok(line) => line,
                Err(RecvTimeoutError::Timeout) => return Err(SmtError::SolverTimeout(self.cfg.timeout)),
                Err(RecvTimeoutError::Disconnected) => return Err(SmtError::SolverError("solver exited".into())),
            };
            if text.is_empty() && line.trim().is_empty() {
                continue;
            }
            let (d, s) = depth_change(&line, in_string);
            depth += d;
            in_string = s;
            text.push_str(&line);
            if depth <= 0 && !in_string {
                let text = text.trim().to_string();
                self.log(format!("< {text}"));
                return Ok(text);
            }
            text.push('\n');
        }
    }

    fn command(&mut self, cmd: &str) -> Result<(), SmtError> {
        self.send(cmd)?;
        match self.read_response()?.as_str() {
            "success" => Ok(()),
            other => Err(SmtError::SolverError(other.to_string())),
        }
    }

    pub fn push(&mut self) -> Result<(), SmtError> {
        self.command("(push 1)")?;
        self.depth += 1;
        Ok(())
    }

    pub fn pop(&mut self) -> Result<(), SmtError> {
        assert!(self.depth > 0, "pop at assertion-stack depth 0");
        let r = self.command("(pop 1)");
        // A failed pop leaves the solver state unknown; drop the process so
        // the next query restarts from the preamble.
        self.depth -= 1;
        if r.is_err() {
            self.kill();
        }
        r
    }

    pub fn check_sat(&mut self) -> Result<SatStatus, SmtError> {
        self.send("(check-sat)")?;
        match self.read_response()?.as_str() {
            "sat" => Ok(SatStatus::Sat),
            "unsat" => Ok(SatStatus::Unsat),
            "unknown" => Ok(SatStatus::Unknown),
            other => Err(SmtError::SolverError(other.to_string())),
        }
    }

    pub fn get_value(&mut self, names: &[String]) -> Result<Vec<(String, String)>, SmtError> {
        self.send(&format!("(get-value ({}))", names.join(" ")))?;
        let text = self.read_response()?;
        if text.starts_with("(error") {
            return Err(SmtError::SolverError(text));
        }
        parse_model(&text)
    }

    fn kill(&mut self) {
        if let Some(p) = self.process.take() {
            p.kill();
        }
        self.depth = 0;
    }

    fn attempt(&mut self, assertions: &[String], get: &[String]) -> Result<(SatStatus, Option<Model>), SmtError> {
        if self.process.is_none() {
            return Err(SmtError::SolverError("solver is not running".into()));
        }
        self.push()?;
        let body = (|| {
            for a in assertions {
                self.command(a)?;
            }
            let status = self.check_sat()?;
            let model = if status == SatStatus::Sat && !get.is_empty() { Some(self.get_value(get)?) } else { None };
            Ok((status, model))
        })();
        match (body, self.process.is_some()) {
            (Ok(r), _) => self.pop().map(|_| r),
            (Err(e), true) if !matches!(e, SmtError::SolverTimeout(_)) => {
                let _ = self.pop();
                Err(e)
            }
            (Err(e), _) => {
                self.kill();
                Err(e)
            }
        }
    }

    /// Runs `assertions` (full commands) inside a push/pop scope, then
    /// `check-sat` and, when sat, `get-value` of `get`. A crash or timeout
    /// restarts the solver once per session; a second one kills it.
    pub fn query(&mut self, assertions: &[String], get: &[String]) -> Result<(SatStatus, Option<Model>), SmtError> {
        if self.dead {
            return Err(SmtError::SessionDead);
        }
        let needs_restart = |s: &Self, e: &SmtError| {
            s.process.is_none()
                || matches!(e, SmtError::SolverTimeout(_))
                || matches!(e, SmtError::SolverError(m) if m == "solver exited" || m.starts_with("write failed"))
        };
        match self.attempt(assertions, get) {
            Err(e) if needs_restart(self, &e) => {
                self.kill();
                if self.restarted {
                    self.dead = true;
                    return Err(e);
                }
                self.restarted = true;
                if let Err(e) = self.start() {
                    self.dead = true;
                    return Err(e);
                }
                let r = self.attempt(assertions, get);
                if let Err(e) = &r {
                    if needs_restart(self, e) {
                        self.kill();
                        self.dead = true;
                    }
                }
                r
            }
            r => r,
        }
    }

    /// Binds constants to words (`(assert (= name "word"))`) on top of the
    /// preamble and reports satisfiability.
    pub fn query_membership(&mut self, bindings: &[(&str, &str)]) -> Result<SatStatus, SmtError> {
        let asserts: Vec<String> = bindings
            .iter()
            .map(|(n, w)| format!("(assert (= {n} {}))", crate::sexp::encode_string_literal(w)))
            .collect();
        self.query(&asserts, &[]).map(|(s, _)| s)
    }
}

impl Drop for Session {
    fn drop(&mut self) {
        self.kill();
    }
}

/// Runs a complete script in a fresh solver process (non-interactive mode)
/// and returns the status and, when sat, the `get-value` bindings of `get`.
pub fn run_script(cfg: &SolverConfig, script: &str, get: &[String]) -> Result<(SatStatus, Option<Model>), SmtError> {
    let mut child = Command::new(&cfg.command)
        .args(&cfg.args)
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .stderr(Stdio::null())
        .spawn()
        .map_err(|e| SmtError::SpawnFailure { command: cfg.command.clone(), reason: e.to_string() })?;
    let mut stdin = child.stdin.take().unwrap();
    let mut stdout = child.stdout.take().unwrap();
    let (tx, rx) = mpsc::channel();
    std::thread::spawn(move || {
        let mut out = String::new();
        let _ = stdout.read_to_string(&mut out);
        let _ = tx.send(out);
    });
    let mut text = String::from("(set-option :produce-models true)\n");
    text.push_str(script.trim_end().trim_end_matches("(exit)"));
    if !get.is_empty() {
        text.push_str(&format!("\n(get-value ({}))", get.join(" ")));
    }
    text.push_str("\n(exit)\n");
    let _ = stdin.write_all(text.as_bytes());
    drop(stdin);
    let out = match rx.recv_timeout(cfg.timeout) {
        Ok(out) => out,
        Err(_) => {
            let _ = child.kill();
            let _ = child.wait();
            return Err(SmtError::SolverTimeout(cfg.timeout));
        }
    };
    let _ = child.wait();
    let mut lines = out.lines().map(str::trim).filter(|l| !l.is_empty() && *l != "success");
    let status = match lines.next() {
        Some("sat") => SatStatus::Sat,
        Some("unsat") => SatStatus::Unsat,
        Some("unknown") => SatStatus::Unknown,
        other => return Err(SmtError::SolverError(other.unwrap_or("no output").to_string())),
    };
    let model = if status == SatStatus::Sat && !get.is_empty() {
        let rest: Vec<&str> = lines.collect();
        Some(parse_model(&rest.join("\n"))?)
    } else {
        None
    };
    Ok((status, model))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn response_balance() {
        assert_eq!(depth_change("((x \"(\"))", false), (0, false));
        assert_eq!(depth_change("((x \"a", false), (2, true));
        assert_eq!(depth_change("b\"))", true), (-2, false));
    }

    #[test]
    fn missing_binary() {
        let cfg = SolverConfig::new("/nonexistent/solver", vec![]);
        assert!(matches!(Session::open(&cfg, vec![], None), Err(SmtError::SpawnFailure { .. })));
        assert!(matches!(run_script(&cfg, "(check-sat)", &[]), Err(SmtError::SpawnFailure { .. })));
    }
}
