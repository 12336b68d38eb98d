//! Text forms of Lambda and Gamma elements and of `.f2elt` documents.
//!
//! ```text
//! lambda element := "0" | term ("+" term)*     term := "L[" int ("," int)* "]" | "L[]"
//! gamma element  := "0" | term ("+" term)*     term := "a(" int ("," int)* ")"
//! ```
//!
//! Whitespace between tokens is ignored and repeated terms cancel. A document
//! is a run of `@key value` header lines followed by one element; lines whose
//! first non-blank character is `#` are comments.

use std::fmt;

use ltk_core::lambda::Bidegree;
use ltk_core::transfer::Payload;
use ltk_core::{GammaElement, GammaMonomial, LambdaElement, LambdaMonomial};

/// A syntax error, positioned by 1-based line and character column.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("{line}:{column}: {message}")]
pub struct ParseError {
    pub line: usize,
    pub column: usize,
    pub message: String,
}

type Parsed<T> = Result<T, ParseError>;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Kind {
    Lambda,
    Gamma,
}

impl Kind {
    pub fn as_str(self) -> &'static str {
        match self {
            Kind::Lambda => "lambda",
            Kind::Gamma => "gamma",
        }
    }
}

struct Cursor<'a> {
    chars: std::iter::Peekable<std::str::Chars<'a>>,
    line: usize,
    column: usize,
}

impl<'a> Cursor<'a> {
    fn new(text: &'a str, line: usize) -> Self {
        Cursor {
            chars: text.chars().peekable(),
            line,
            column: 1,
        }
    }

    fn error<T>(&self, message: impl Into<String>) -> Parsed<T> {
        Err(ParseError {
            line: self.line,
            column: self.column,
            message: message.into(),
        })
    }

    fn peek(&mut self) -> Option<char> {
        self.chars.peek().copied()
    }

    fn bump(&mut self) -> Option<char> {
        let c = self.chars.next()?;
        if c == '\n' {
            self.line += 1;
            self.column = 1;
        } else {
            self.column += 1;
        }
        Some(c)
    }

    fn skip_ws(&mut self) {
        while self.peek().is_some_and(char::is_whitespace) {
            self.bump();
        }
    }

    fn expect(&mut self, want: char) -> Parsed<()> {
        self.skip_ws();
        match self.peek() {
            Some(c) if c == want => {
                self.bump();
                Ok(())
            }
            Some(c) => self.error(format!("expected `{want}`, found `{c}`")),
            None => self.error(format!("expected `{want}`, found end of input")),
        }
    }

    fn int(&mut self) -> Parsed<u32> {
        self.skip_ws();
        match self.peek() {
            Some('-') => return self.error("negative index"),
            Some(c) if c.is_ascii_digit() => {}
            Some(c) => return self.error(format!("expected a number, found `{c}`")),
            None => return self.error("expected a number, found end of input"),
        }
        let (line, column) = (self.line, self.column);
        let mut digits = String::new();
        while let Some(c) = self.peek().filter(char::is_ascii_digit) {
            digits.push(c);
            self.bump();
        }
        digits.parse().map_err(|_| ParseError {
            line,
            column,
            message: format!("index {digits} is too large"),
        })
    }

    /// `open int ("," int)* close`, or an empty list when `allow_empty`.
    fn int_list(&mut self, open: char, close: char, allow_empty: bool) -> Parsed<Vec<u32>> {
        self.expect(open)?;
        self.skip_ws();
        let mut out = Vec::new();
        if self.peek() == Some(close) {
            if !allow_empty {
                return self.error("empty term");
            }
            self.bump();
            return Ok(out);
        }
        loop {
            out.push(self.int()?);
            self.skip_ws();
            match self.peek() {
                Some(',') => {
                    self.bump();
                }
                Some(c) if c == close => {
                    self.bump();
                    return Ok(out);
                }
                Some(c) => return self.error(format!("expected `,` or `{close}`, found `{c}`")),
                None => return self.error(format!("expected `{close}`, found end of input")),
            }
        }
    }

    /// `"0" | term ("+" term)*`, consuming all input.
    fn sum<T>(&mut self, mut term: impl FnMut(&mut Self) -> Parsed<T>) -> Parsed<Vec<T>> {
        self.skip_ws();
        if self.peek() == Some('0') {
            self.bump();
            self.skip_ws();
            return match self.peek() {
                None => Ok(Vec::new()),
                Some(c) => self.error(format!("unexpected `{c}` after `0`")),
            };
        }
        if self.peek().is_none() {
            return self.error("empty element; write `0` for zero");
        }
        let mut out = vec![term(self)?];
        loop {
            self.skip_ws();
            match self.peek() {
                None => return Ok(out),
                Some('+') => {
                    self.bump();
                    out.push(term(self)?);
                }
                Some(c) => return self.error(format!("expected `+`, found `{c}`")),
            }
        }
    }

    fn lambda_term(&mut self) -> Parsed<LambdaMonomial> {
        self.expect('L')?;
        Ok(LambdaMonomial::new(self.int_list('[', ']', true)?))
    }

    fn gamma_term(&mut self, rank: &mut Option<usize>) -> Parsed<GammaMonomial> {
        self.expect('a')?;
        let (line, column) = (self.line, self.column);
        let exps = self.int_list('(', ')', false)?;
        match *rank {
            Some(r) if r != exps.len() => Err(ParseError {
                line,
                column,
                message: format!("arity mismatch: expected {r} exponents, found {}", exps.len()),
            }),
            _ => {
                *rank = Some(exps.len());
                Ok(GammaMonomial::new(exps))
            }
        }
    }
}

fn lambda_at(text: &str, line: usize) -> Parsed<LambdaElement> {
    let mut c = Cursor::new(text, line);
    Ok(LambdaElement::from_terms(c.sum(Cursor::lambda_term)?))
}

fn gamma_at(text: &str, line: usize, rank: Option<usize>) -> Parsed<GammaElement> {
    let mut c = Cursor::new(text, line);
    let mut r = rank;
    let terms = c.sum(|c| c.gamma_term(&mut r))?;
    let Some(r) = r else {
        return c.error("cannot tell the rank of `0`; give it explicitly");
    };
    Ok(GammaElement::from_terms(r, terms).expect("arity checked while parsing"))
}

pub fn parse_lambda(text: &str) -> Parsed<LambdaElement> {
    lambda_at(text, 1)
}

/// Parses a Gamma element whose monomials all have `rank` exponents.
pub fn parse_gamma(text: &str, rank: usize) -> Parsed<GammaElement> {
    gamma_at(text, 1, Some(rank))
}

/// Parses a Gamma element, taking the rank from the first term.
pub fn parse_gamma_any(text: &str) -> Parsed<GammaElement> {
    gamma_at(text, 1, None)
}

/// The contents of one `.f2elt` file.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ElementDocument {
    pub name: Option<String>,
    pub bidegree: Option<Bidegree>,
    pub payload: Payload,
}

impl ElementDocument {
    pub fn lambda(e: LambdaElement) -> Self {
        ElementDocument {
            name: None,
            bidegree: None,
            payload: Payload::Lambda(e),
        }
    }

    pub fn gamma(e: GammaElement) -> Self {
        ElementDocument {
            name: None,
            bidegree: None,
            payload: Payload::Gamma(e),
        }
    }

    pub fn kind(&self) -> Kind {
        match self.payload {
            Payload::Lambda(_) => Kind::Lambda,
            Payload::Gamma(_) => Kind::Gamma,
        }
    }
}

#[derive(Default)]
struct Headers {
    kind: Option<Kind>,
    rank: Option<usize>,
    name: Option<String>,
    bidegree: Option<Bidegree>,
}

fn header_error<T>(line: usize, column: usize, message: impl Into<String>) -> Parsed<T> {
    Err(ParseError {
        line,
        column,
        message: message.into(),
    })
}

fn number(word: &str, line: usize, column: usize) -> Parsed<u32> {
    if word.starts_with('-') {
        return header_error(line, column, "negative value");
    }
    if word.is_empty() || !word.bytes().all(|b| b.is_ascii_digit()) {
        return header_error(line, column, format!("expected a number, found `{word}`"));
    }
    word.parse()
        .or_else(|_| header_error(line, column, format!("value {word} is too large")))
}

impl Headers {
    fn apply(&mut self, text: &str, line: usize, indent: usize) -> Parsed<()> {
        // text starts at '@'
        let mut words = Vec::new();
        let mut col = indent + 1;
        let mut start = None;
        for (i, ch) in text.char_indices().chain([(text.len(), ' ')]) {
            if ch.is_whitespace() {
                if let Some((s, c)) = start.take() {
                    words.push((&text[s..i], c));
                }
            } else if start.is_none() {
                start = Some((i, col));
            }
            col += 1;
        }
        let (key, key_col) = words[0];
        let args = &words[1..];
        let arity = |n: usize| -> Parsed<()> {
            if args.len() == n {
                Ok(())
            } else {
                header_error(line, key_col, format!("`{key}` takes {n} value(s), found {}", args.len()))
            }
        };
        let duplicate = || header_error(line, key_col, format!("duplicate header `{key}`"));
        match key {
            "@kind" => {
                arity(1)?;
                if self.kind.is_some() {
                    return duplicate();
                }
                self.kind = Some(match args[0].0 {
                    "lambda" => Kind::Lambda,
                    "gamma" => Kind::Gamma,
                    other => return header_error(line, args[0].1, format!("unknown kind `{other}`")),
                });
            }
            "@rank" => {
                arity(1)?;
                if self.rank.is_some() {
                    return duplicate();
                }
                let r = number(args[0].0, line, args[0].1)?;
                if r == 0 {
                    return header_error(line, args[0].1, "rank must be positive");
                }
                self.rank = Some(r as usize);
            }
            "@name" => {
                arity(1)?;
                if self.name.is_some() {
                    return duplicate();
                }
                let (name, c) = args[0];
                if !name.chars().all(|ch| ch.is_ascii_alphanumeric() || ch == '_') {
                    return header_error(line, c, format!("invalid name `{name}`"));
                }
                self.name = Some(name.to_string());
            }
            "@bidegree" => {
                arity(2)?;
                if self.bidegree.is_some() {
                    return duplicate();
                }
                let s = number(args[0].0, line, args[0].1)?;
                let d = number(args[1].0, line, args[1].1)?;
                self.bidegree = Some(Bidegree::new(s, d));
            }
            other => return header_error(line, key_col, format!("unknown header `{other}`")),
        }
        Ok(())
    }
}

/// Parses a `.f2elt` document. Without `@kind` the kind is read off the first
/// term; without `@rank` a Gamma rank is read off the first term.
///
/// A declared `@bidegree` is checked against the element.
pub fn parse_document(text: &str) -> Parsed<ElementDocument> {
    let mut headers = Headers::default();
    let mut body = String::new();
    let mut body_line = None;
    for (i, raw) in text.split('\n').enumerate() {
        let line = i + 1;
        let trimmed = raw.trim_start();
        let indent = raw.chars().count() - trimmed.chars().count();
        if trimmed.starts_with('#') {
            if body_line.is_some() {
                body.push('\n');
            }
            continue;
        }
        if body_line.is_none() {
            if trimmed.is_empty() {
                continue;
            }
            if trimmed.starts_with('@') {
                headers.apply(trimmed, line, indent)?;
                continue;
            }
            body_line = Some(line);
        } else {
            body.push('\n');
        }
        body.push_str(raw);
    }
    let Some(first) = body_line else {
        let line = text.split('\n').count();
        return header_error(line, 1, "document has no element");
    };
    let kind = match headers.kind {
        Some(k) => k,
        None => match body.trim_start().chars().next() {
            Some('L') => Kind::Lambda,
            Some('a') => Kind::Gamma,
            _ => return header_error(first, 1, "cannot tell the element kind; add `@kind`"),
        },
    };
    let payload = match kind {
        Kind::Lambda => {
            if headers.rank.is_some() {
                return header_error(first, 1, "`@rank` only applies to gamma elements");
            }
            Payload::Lambda(lambda_at(&body, first)?)
        }
        Kind::Gamma => Payload::Gamma(gamma_at(&body, first, headers.rank)?),
    };
    if let Some(declared) = headers.bidegree {
        let found = payload.bidegree().map_err(|e| ParseError {
            line: first,
            column: 1,
            message: e.to_string(),
        })?;
        if found.is_some_and(|b| b != declared) {
            return header_error(
                first,
                1,
                format!("element has bidegree {}, header declares {declared}", found.unwrap()),
            );
        }
    }
    Ok(ElementDocument {
        name: headers.name,
        bidegree: headers.bidegree,
        payload,
    })
}

/// Canonical text of an element: terms in increasing order, `0` for zero.
pub fn serialize_lambda(e: &LambdaElement) -> String {
    e.to_string()
}

pub fn serialize_gamma(e: &GammaElement) -> String {
    e.to_string()
}

/// Canonical text of a document, headers first and the element on one line.
pub fn serialize_document(doc: &ElementDocument) -> String {
    let mut out = String::new();
    out.push_str(&format!("@kind {}\n", doc.kind().as_str()));
    if let Payload::Gamma(g) = &doc.payload {
        out.push_str(&format!("@rank {}\n", g.rank()));
    }
    if let Some(name) = &doc.name {
        out.push_str(&format!("@name {name}\n"));
    }
    if let Some(b) = doc.bidegree {
        out.push_str(&format!("@bidegree {} {}\n", b.s, b.d));
    }
    match &doc.payload {
        Payload::Lambda(e) => out.push_str(&serialize_lambda(e)),
        Payload::Gamma(e) => out.push_str(&serialize_gamma(e)),
    }
    out.push('\n');
    out
}

impl fmt::Display for ElementDocument {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&serialize_document(self))
    }
}
