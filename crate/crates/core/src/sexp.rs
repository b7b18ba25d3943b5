//! Minimal SMT-LIB s-expression reader and string literal codec.

use std::fmt;

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Sexp {
    /// Symbols, keywords and numerals.
    Atom(String),
    /// A decoded string literal.
    Str(String),
    List(Vec<Sexp>),
}

#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum SexpError {
    #[error("unexpected end of input (unbalanced parentheses)")]
    UnexpectedEof,
    #[error("unexpected ')' at byte {0}")]
    UnexpectedClose(usize),
    #[error("unterminated string literal starting at byte {0}")]
    UnterminatedString(usize),
    #[error("unterminated quoted symbol starting at byte {0}")]
    UnterminatedSymbol(usize),
}

impl Sexp {
    pub fn atom(&self) -> Option<&str> {
        match self {
            Sexp::Atom(a) => Some(a),
            _ => None,
        }
    }

    pub fn list(&self) -> Option<&[Sexp]> {
        match self {
            Sexp::List(l) => Some(l),
            _ => None,
        }
    }

    pub fn is_atom(&self, name: &str) -> bool {
        self.atom() == Some(name)
    }

    /// Head symbol of an application `(head ...)`.
    pub fn head(&self) -> Option<&str> {
        self.list().and_then(|l| l.first()).and_then(Sexp::atom)
    }
}

impl fmt::Display for Sexp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Sexp::Atom(a) => f.write_str(a),
            Sexp::Str(s) => f.write_str(&encode_string_literal(s)),
            Sexp::List(items) => {
                f.write_str("(")?;
                for (i, item) in items.iter().enumerate() {
                    if i > 0 {
                        f.write_str(" ")?;
                    }
                    write!(f, "{item}")?;
                }
                f.write_str(")")
            }
        }
    }
}

/// Parses every top-level s-expression of `text`.
pub fn parse_all(text: &str) -> Result<Vec<Sexp>, SexpError> {
    let mut reader = Reader { src: text.as_bytes(), text, pos: 0 };
    let mut out = Vec::new();
    while let Some(e) = reader.next()? {
        out.push(e);
    }
    Ok(out)
}

struct Reader<'a> {
    src: &'a [u8],
    text: &'a str,
    pos: usize,
}

impl<'a> Reader<'a> {
    fn skip_ws(&mut self) {
        while self.pos < self.src.len() {
            match self.src[self.pos] {
                b';' => {
                    while self.pos < self.src.len() && self.src[self.pos] != b'\n' {
                        self.pos += 1;
                    }
                }
                c if c.is_ascii_whitespace() => self.pos += 1,
                _ => break,
            }
        }
    }

    fn next(&mut self) -> Result<Option<Sexp>, SexpError> {
        self.skip_ws();
        if self.pos >= self.src.len() {
            return Ok(None);
        }
        if self.src[self.pos] == b')' {
            return Err(SexpError::UnexpectedClose(self.pos));
        }
        self.expr().map(Some)
    }

    fn expr(&mut self) -> Result<Sexp, SexpError> {
        self.skip_ws();
        let start = self.pos;
        match self.src.get(self.pos) {
            None => Err(SexpError::UnexpectedEof),
            Some(b'(') => {
                self.pos += 1;
                let mut items = Vec::new();
                loop {
                    self.skip_ws();
                    match self.src.get(self.pos) {
                        None => return Err(SexpError::UnexpectedEof),
                        Some(b')') => {
                            self.pos += 1;
                            return Ok(Sexp::List(items));
                        }
                        Some(_) => items.push(self.expr()?),
                    }
                }
            }
            Some(b')') => Err(SexpError::UnexpectedClose(start)),
            Some(b'"') => {
                self.pos += 1;
                let mut raw = String::new();
                loop {
                    let rest = &self.text[self.pos..];
                    let Some(c) = rest.chars().next() else {
                        return Err(SexpError::UnterminatedString(start));
                    };
                    self.pos += c.len_utf8();
                    if c == '"' {
                        if self.src.get(self.pos) == Some(&b'"') {
                            raw.push('"');
                            self.pos += 1;
                        } else {
                            break;
                        }
                    } else {
                        raw.push(c);
                    }
                }
                Ok(Sexp::Str(decode_escapes(&raw)))
            }
            Some(b'|') => {
                self.pos += 1;
                let body_start = self.pos;
                while self.pos < self.src.len() && self.src[self.pos] != b'|' {
                    self.pos += 1;
                }
                if self.pos >= self.src.len() {
                    return Err(SexpError::UnterminatedSymbol(start));
                }
                let sym = self.text[body_start..self.pos].to_string();
                self.pos += 1;
                Ok(Sexp::Atom(sym))
            }
            Some(_) => {
                while self.pos < self.src.len() {
                    let c = self.src[self.pos];
                    if c.is_ascii_whitespace() || c == b'(' || c == b')' || c == b'"' || c == b';' {
                        break;
                    }
                    self.pos += 1;
                }
                Ok(Sexp::Atom(self.text[start..self.pos].to_string()))
            }
        }
    }
}

/// Resolves `\u{X..}` and `\uXXXX` escapes in the body of a string literal
/// whose doubled quotes have already been collapsed. Malformed escapes are kept
/// verbatim, as SMT-LIB prescribes.
pub fn decode_escapes(raw: &str) -> String {
    let chars: Vec<char> = raw.chars().collect();
    let mut out = String::with_capacity(raw.len());
    let mut i = 0;
    while i < chars.len() {
        if chars[i] == '\\' && chars.get(i + 1) == Some(&'u') {
            if chars.get(i + 2) == Some(&'{') {
                if let Some(close) = chars[i + 3..].iter().position(|&c| c == '}') {
                    let hex: String = chars[i + 3..i + 3 + close].iter().collect();
                    if (1..=5).contains(&hex.len()) {
                        if let Some(c) = u32::from_str_radix(&hex, 16).ok().and_then(char::from_u32) {
                            out.push(c);
                            i += 4 + close;
                            continue;
                        }
                    }
                }
            } else if i + 6 <= chars.len() {
                let hex: String = chars[i + 2..i + 6].iter().collect();
                if hex.chars().all(|c| c.is_ascii_hexdigit()) {
                    if let Some(c) = u32::from_str_radix(&hex, 16).ok().and_then(char::from_u32) {
                        out.push(c);
                        i += 6;
                        continue;
                    }
                }
            }
        }
        out.push(chars[i]);
        i += 1;
    }
    out
}

/// Renders `s` as an SMT-LIB 2.6 string literal. Printable ASCII is kept
/// verbatim (quotes doubled); backslash and everything else use `\u{..}`.
pub fn encode_string_literal(s: &str) -> String {
    let mut out = String::with_capacity(s.len() + 2);
    out.push('"');
    for c in s.chars() {
        match c {
            '"' => out.push_str("\"\""),
            '\\' => out.push_str("\\u{5c}"),
            ' '..='~' => out.push(c),
            _ => out.push_str(&format!("\\u{{{:x}}}", c as u32)),
        }
    }
    out.push('"');
    out
}
