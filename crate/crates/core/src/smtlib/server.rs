//! A small interactive SMT-LIB responder backed by the bounded evaluator.
//! It speaks enough of the protocol (print-success, push/pop, check-sat,
//! get-value) to stand in for a string solver in tests and demos.

use std::io::{BufRead, Write};

use crate::sexp::{encode_string_literal, parse_all, Sexp, SexpError};

use super::script::{declared_const, evaluate, parse_assertion, Constraint};

#[derive(Default)]
struct State {
    print_success: bool,
    consts: Vec<String>,
    constraints: Vec<Constraint>,
    frames: Vec<(usize, usize)>,
    model: Option<Vec<String>>,
}

enum Reply {
    Success,
    Text(String),
    Exit,
}

fn error(m: impl std::fmt::Display) -> Reply {
    Reply::Text(format!("(error {})", encode_string_literal(&m.to_string())))
}

impl State {
    fn run(&mut self, cmd: &Sexp, max_len: usize) -> Reply {
        let items = cmd.list().unwrap_or_default();
        let count = || items.get(1).and_then(Sexp::atom).map_or(Some(1), |n| n.parse::<usize>().ok());
        match cmd.head() {
            Some("set-option") => {
                if items.len() == 3 && items[1].is_atom(":print-success") {
                    self.print_success = items[2].is_atom("true");
                }
                Reply::Success
            }
            Some("set-logic" | "set-info") => Reply::Success,
            Some("declare-const" | "declare-fun") => match declared_const(cmd) {
                Ok(name) if self.consts.contains(&name) => error(format!("{name} is already declared")),
                Ok(name) => {
                    self.consts.push(name);
                    Reply::Success
                }
                Err(e) => error(e),
            },
            Some("assert") if items.len() == 2 => match parse_assertion(&items[1], &self.consts) {
                Ok(c) => {
                    self.constraints.push(c);
                    Reply::Success
                }
                Err(e) => error(e),
            },
            Some("push") => match count() {
                Some(n) => {
                    for _ in 0..n {
                        self.frames.push((self.consts.len(), self.constraints.len()));
                    }
                    Reply::Success
                }
                None => error("bad push"),
            },
            Some("pop") => match count() {
                Some(n) if n <= self.frames.len() => {
                    for _ in 0..n {
                        let (c, a) = self.frames.pop().unwrap();
                        self.consts.truncate(c);
                        self.constraints.truncate(a);
                    }
                    Reply::Success
                }
                _ => error("pop below the assertion stack"),
            },
            Some("reset" | "reset-assertions") => {
                self.consts.clear();
                self.constraints.clear();
                self.frames.clear();
                Reply::Success
            }
            Some("check-sat") => match evaluate(&self.consts, &self.constraints, max_len) {
                Ok(model) => {
                    let status = if model.is_some() { "sat" } else { "unsat" };
                    self.model = model;
                    Reply::Text(status.into())
                }
                Err(e) => error(e),
            },
            Some("get-value") if items.len() == 2 => {
                let Some(model) = &self.model else { return error("no model available") };
                let mut out = String::from("(");
                for name in items[1].list().unwrap_or_default() {
                    let Some(i) = name.atom().and_then(|n| self.consts.iter().position(|c| c == n)) else {
                        return error(format!("unknown constant {name}"));
                    };
                    if out.len() > 1 {
                        out.push(' ');
                    }
                    out.push_str(&format!("({name} {})", encode_string_literal(&model[i])));
                }
                out.push(')');
                Reply::Text(out)
            }
            Some("exit") => Reply::Exit,
            _ => error(format!("unsupported command {cmd}")),
        }
    }
}

/// Answers commands from `input` until `exit` or end of input. `check-sat`
/// reports unsat when no model with undefined constants of total length at
/// most `max_len` exists.
pub fn serve(input: impl BufRead, mut output: impl Write, max_len: usize) -> std::io::Result<()> {
    let mut state = State::default();
    let mut buffer = String::new();
    for line in input.lines() {
        buffer.push_str(&line?);
        buffer.push('\n');
        let cmds = match parse_all(&buffer) {
            Ok(cmds) => cmds,
            Err(SexpError::UnexpectedEof | SexpError::UnterminatedString(_)) => continue,
            Err(e) => {
                buffer.clear();
                writeln!(output, "(error {})", encode_string_literal(&e.to_string()))?;
                output.flush()?;
                continue;
            }
        };
        buffer.clear();
        for cmd in &cmds {
            match state.run(cmd, max_len) {
                Reply::Success if state.print_success => writeln!(output, "success")?,
                Reply::Success => {}
                Reply::Text(t) => writeln!(output, "{t}")?,
                Reply::Exit => return output.flush(),
            }
        }
        output.flush()?;
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn transcript(input: &str) -> String {
        let mut out = Vec::new();
        serve(input.as_bytes(), &mut out, 6).unwrap();
        String::from_utf8(out).unwrap()
    }

    #[test]
    fn incremental_session() {
        let out = transcript(
            "(set-option :print-success true)\n(set-logic QF_S)\n(declare-const x String)\n\
             (assert (str.in_re x (re.+ (str.to_re \"ab\"))))\n(push 1)\n(assert (= x \"abab\"))\n\
             (check-sat)\n(get-value (x))\n(pop 1)\n(push 1)\n(assert (= x \"aba\"))\n(check-sat)\n(pop 1)\n\
             (check-sat)\n(get-value (x))\n(pop 1)\n(exit)\n",
        );
        let lines: Vec<&str> = out.lines().collect();
        assert_eq!(
            lines,
            [
                "success",
                "success",
                "success",
                "success",
                "success",
                "success",
                "sat",
                "((x \"abab\"))",
                "success",
                "success",
                "success",
                "unsat",
                "success",
                "sat",
                "((x \"ab\"))",
                "(error \"pop below the assertion stack\")"
            ]
        );
    }

    #[test]
    fn multi_line_commands_and_errors() {
        let out = transcript("(declare-const x\n String)\n(assert (str.len x))\n(check-sat)\n");
        let lines: Vec<&str> = out.lines().collect();
        assert_eq!(lines.len(), 2);
        assert!(lines[0].starts_with("(error"));
        assert_eq!(lines[1], "sat");
    }
}
