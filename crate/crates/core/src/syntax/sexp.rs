//! A small s-expression reader and writer with source positions.

use std::fmt;

use thiserror::Error;

/// A 1-based line/column position.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Pos {
    pub line: usize,
    pub col: usize,
}

impl fmt::Display for Pos {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}", self.line, self.col)
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash)]
pub struct Span {
    pub start: Pos,
    pub end: Pos,
}

#[derive(Clone, Debug, PartialEq, Eq, Error)]
#[error("{pos}: {message}")]
pub struct ParseError {
    pub pos: Pos,
    pub message: String,
}

impl ParseError {
    pub fn at(pos: Pos, message: impl Into<String>) -> Self {
        ParseError { pos, message: message.into() }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Sexp {
    Sym(String, Span),
    Str(String, Span),
    List(Vec<Sexp>, Span),
}

impl Sexp {
    pub fn span(&self) -> Span {
        match self {
            Sexp::Sym(_, s) | Sexp::Str(_, s) | Sexp::List(_, s) => *s,
        }
    }

    pub fn sym(s: impl Into<String>) -> Sexp {
        Sexp::Sym(s.into(), Span::default())
    }

    pub fn string(s: impl Into<String>) -> Sexp {
        Sexp::Str(s.into(), Span::default())
    }

    pub fn list(items: Vec<Sexp>) -> Sexp {
        Sexp::List(items, Span::default())
    }

    /// A list headed by the symbol `head`.
    pub fn form(head: &str, args: impl IntoIterator<Item = Sexp>) -> Sexp {
        let mut items = vec![Sexp::sym(head)];
        items.extend(args);
        Sexp::list(items)
    }

    /// Splits `(head args…)` into its head symbol and arguments.
    pub fn as_form(&self) -> Option<(&str, &[Sexp])> {
        match self {
            Sexp::List(items, _) => match items.split_first() {
                Some((Sexp::Sym(h, _), rest)) => Some((h.as_str(), rest)),
                _ => None,
            },
            _ => None,
        }
    }

    pub fn error(&self, message: impl Into<String>) -> ParseError {
        ParseError::at(self.span().start, message)
    }

    /// Single-line rendering.
    pub fn compact(&self) -> String {
        let mut out = String::new();
        self.write_compact(&mut out);
        out
    }

    fn write_compact(&self, out: &mut String) {
        match self {
            Sexp::Sym(s, _) => out.push_str(s),
            Sexp::Str(s, _) => write_quoted(s, out),
            Sexp::List(items, _) => {
                out.push('(');
                for (i, x) in items.iter().enumerate() {
                    if i > 0 {
                        out.push(' ');
                    }
                    x.write_compact(out);
                }
                out.push(')');
            }
        }
    }

    /// Multi-line rendering: a list that does not fit in `width` columns is
    /// broken after its head with arguments indented by two spaces.
    pub fn pretty(&self, width: usize) -> String {
        let mut out = String::new();
        self.write_pretty(0, width, &mut out);
        out
    }

    fn write_pretty(&self, indent: usize, width: usize, out: &mut String) {
        let flat = self.compact();
        let items = match self {
            Sexp::List(items, _) if indent + flat.chars().count() > width && items.len() > 1 => items,
            _ => {
                out.push_str(&flat);
                return;
            }
        };
        out.push('(');
        items[0].write_pretty(indent + 1, width, out);
        for x in &items[1..] {
            out.push('\n');
            out.push_str(&" ".repeat(indent + 2));
            x.write_pretty(indent + 2, width, out);
        }
        out.push(')');
    }
}

fn write_quoted(s: &str, out: &mut String) {
    out.push('"');
    for c in s.chars() {
        match c {
            '"' => out.push_str("\\\""),
            '\\' => out.push_str("\\\\"),
            '\n' => out.push_str("\\n"),
            _ => out.push(c),
        }
    }
    out.push('"');
}

struct Reader<'a> {
    chars: std::iter::Peekable<std::str::Chars<'a>>,
    pos: Pos,
}

impl Reader<'_> {
    fn bump(&mut self) -> Option<char> {
        let c = self.chars.next()?;
        if c == '\n' {
            self.pos.line += 1;
            self.pos.col = 1;
        } else {
            self.pos.col += 1;
        }
        Some(c)
    }

    fn skip_trivia(&mut self) {
        while let Some(&c) = self.chars.peek() {
            if c.is_whitespace() {
                self.bump();
            } else if c == ';' {
                while let Some(c) = self.bump() {
                    if c == '\n' {
                        break;
                    }
                }
            } else {
                break;
            }
        }
    }

    fn read(&mut self) -> Result<Sexp, ParseError> {
        self.skip_trivia();
        let start = self.pos;
        match self.chars.peek().copied() {
            None => Err(ParseError::at(start, "unexpected end of input")),
            Some('(') => {
                self.bump();
                let mut items = Vec::new();
                loop {
                    self.skip_trivia();
                    match self.chars.peek() {
                        None => return Err(ParseError::at(start, "unclosed parenthesis")),
                        Some(')') => {
                            self.bump();
                            return Ok(Sexp::List(items, Span { start, end: self.pos }));
                        }
                        Some(_) => items.push(self.read()?),
                    }
                }
            }
            Some(')') => Err(ParseError::at(start, "unexpected `)`")),
            Some('"') => {
                self.bump();
                let mut s = String::new();
                loop {
                    match self.bump() {
                        None => return Err(ParseError::at(start, "unterminated string")),
                        Some('"') => break,
                        Some('\\') => match self.bump() {
                            Some('n') => s.push('\n'),
                            Some(c @ ('"' | '\\')) => s.push(c),
                            _ => return Err(ParseError::at(self.pos, "bad escape in string")),
                        },
                        Some(c) => s.push(c),
                    }
                }
                Ok(Sexp::Str(s, Span { start, end: self.pos }))
            }
            Some(_) => {
                let mut s = String::new();
                while let Some(&c) = self.chars.peek() {
                    if c.is_whitespace() || matches!(c, '(' | ')' | '"' | ';') {
                        break;
                    }
                    s.push(c);
                    self.bump();
                }
                Ok(Sexp::Sym(s, Span { start, end: self.pos }))
            }
        }
    }
}

/// Reads every top-level s-expression in `text`.
pub fn read_all(text: &str) -> Result<Vec<Sexp>, ParseError> {
    let mut r = Reader { chars: text.chars().peekable(), pos: Pos { line: 1, col: 1 } };
    let mut out = Vec::new();
    loop {
        r.skip_trivia();
        if r.chars.peek().is_none() {
            return Ok(out);
        }
        out.push(r.read()?);
    }
}

/// Reads exactly one s-expression.
pub fn read_one(text: &str) -> Result<Sexp, ParseError> {
    let mut all = read_all(text)?;
    match all.len() {
        1 => Ok(all.pop().expect("one item")),
        0 => Err(ParseError::at(Pos { line: 1, col: 1 }, "empty input")),
        _ => Err(all[1].error("expected a single expression")),
    }
}
