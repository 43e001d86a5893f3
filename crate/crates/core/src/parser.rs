//! Text front end: a small recursive-descent parser producing expanded
//! `MPoly` values, and the canonical renderer it round-trips with.
//!
//! Grammar (whitespace is insignificant):
//!
//! ```text
//! expr   := term (('+' | '-') term)*
//! term   := unary ('*' unary)*
//! unary  := '-' unary | power
//! power  := atom ('^' INT)?
//! atom   := INT ('/' INT)? | VAR | '(' expr ')'
//! VAR    := [a-z][a-z0-9]*
//! ```
//!
//! Multiplication is always explicit; `2x` is a syntax error.

use std::fmt;

use num_bigint::BigInt;
use num_traits::{ToPrimitive, Zero};

use crate::algebra::{ExpVec, MPoly, Rat, Var};

/// Largest exponent accepted by `^`.
pub const MAX_EXPONENT: u64 = 1_000_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SourceSpan {
    pub start: usize,
    pub end: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ParseErrorKind {
    Lex,
    Syntax,
    Overflow,
}

impl fmt::Display for ParseErrorKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ParseErrorKind::Lex => "lex",
            ParseErrorKind::Syntax => "syntax",
            ParseErrorKind::Overflow => "overflow",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("{kind} error at {}..{}: {message}", span.start, span.end)]
pub struct ParseError {
    pub message: String,
    pub span: SourceSpan,
    pub kind: ParseErrorKind,
}

/// A parse failure inside a collection, with its 1-based line number.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("line {line}: {error}")]
pub struct CollectionError {
    pub line: usize,
    pub error: ParseError,
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum Tok {
    Int(BigInt),
    Ident(String),
    Plus,
    Minus,
    Star,
    Caret,
    Slash,
    LParen,
    RParen,
}

impl fmt::Display for Tok {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Tok::Int(n) => write!(f, "integer {n}"),
            Tok::Ident(s) => write!(f, "variable {s}"),
            Tok::Plus => f.write_str("'+'"),
            Tok::Minus => f.write_str("'-'"),
            Tok::Star => f.write_str("'*'"),
            Tok::Caret => f.write_str("'^'"),
            Tok::Slash => f.write_str("'/'"),
            Tok::LParen => f.write_str("'('"),
            Tok::RParen => f.write_str("')'"),
        }
    }
}

fn lex(text: &str) -> Result<Vec<(Tok, SourceSpan)>, ParseError> {
    let bytes = text.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let b = bytes[i];
        let start = i;
        let single = match b {
            b' ' | b'\t' | b'\r' | b'\n' => {
                i += 1;
                continue;
            }
            b'+' => Some(Tok::Plus),
            b'-' => Some(Tok::Minus),
            b'*' => Some(Tok::Star),
            b'^' => Some(Tok::Caret),
            b'/' => Some(Tok::Slash),
            b'(' => Some(Tok::LParen),
            b')' => Some(Tok::RParen),
            _ => None,
        };
        if let Some(tok) = single {
            i += 1;
            out.push((tok, SourceSpan { start, end: i }));
        } else if b.is_ascii_digit() {
            while i < bytes.len() && bytes[i].is_ascii_digit() {
                i += 1;
            }
            let n: BigInt = text[start..i].parse().expect("ascii digits");
            out.push((Tok::Int(n), SourceSpan { start, end: i }));
        } else if b.is_ascii_lowercase() {
            while i < bytes.len() && (bytes[i].is_ascii_lowercase() || bytes[i].is_ascii_digit()) {
                i += 1;
            }
            out.push((Tok::Ident(text[start..i].to_string()), SourceSpan { start, end: i }));
        } else {
            let ch = text[start..].chars().next().expect("in bounds");
            return Err(ParseError {
                message: format!("illegal character {ch:?}"),
                span: SourceSpan { start, end: start + ch.len_utf8() },
                kind: ParseErrorKind::Lex,
            });
        }
    }
    Ok(out)
}

struct Parser<'a> {
    toks: &'a [(Tok, SourceSpan)],
    pos: usize,
    len: usize,
}

impl<'a> Parser<'a> {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|(t, _)| t)
    }

    fn span(&self) -> SourceSpan {
        self.toks.get(self.pos).map(|(_, s)| *s).unwrap_or(SourceSpan { start: self.len, end: self.len })
    }

    fn syntax(&self, message: String) -> ParseError {
        ParseError { message, span: self.span(), kind: ParseErrorKind::Syntax }
    }

    fn unexpected(&self, wanted: &str) -> ParseError {
        match self.peek() {
            Some(t) => self.syntax(format!("expected {wanted}, found {t}")),
            None => self.syntax(format!("expected {wanted}, found end of input")),
        }
    }

    fn expr(&mut self) -> Result<MPoly, ParseError> {
        let mut acc = self.term()?;
        loop {
            match self.peek() {
                Some(Tok::Plus) => {
                    self.pos += 1;
                    acc = &acc + &self.term()?;
                }
                Some(Tok::Minus) => {
                    self.pos += 1;
                    acc = &acc - &self.term()?;
                }
                _ => return Ok(acc),
            }
        }
    }

    fn term(&mut self) -> Result<MPoly, ParseError> {
        let mut acc = self.unary()?;
        while let Some(Tok::Star) = self.peek() {
            self.pos += 1;
            acc = &acc * &self.unary()?;
        }
        Ok(acc)
    }

    fn unary(&mut self) -> Result<MPoly, ParseError> {
        if let Some(Tok::Minus) = self.peek() {
            self.pos += 1;
            return Ok(-&self.unary()?);
        }
        self.power()
    }

    fn power(&mut self) -> Result<MPoly, ParseError> {
        let base = self.atom()?;
        if let Some(Tok::Caret) = self.peek() {
            self.pos += 1;
            let span = self.span();
            let exp = match self.peek() {
                Some(Tok::Int(n)) => n.clone(),
                _ => return Err(self.unexpected("a nonnegative integer exponent")),
            };
            self.pos += 1;
            let exp = match exp.to_u64().filter(|&e| e <= MAX_EXPONENT) {
                Some(e) => e as u32,
                None => {
                    return Err(ParseError {
                        message: format!("exponent {exp} exceeds the limit {MAX_EXPONENT}"),
                        span,
                        kind: ParseErrorKind::Overflow,
                    })
                }
            };
            return Ok(base.pow(exp));
        }
        Ok(base)
    }

    fn atom(&mut self) -> Result<MPoly, ParseError> {
        match self.peek().cloned() {
            Some(Tok::Int(n)) => {
                self.pos += 1;
                if let Some(Tok::Slash) = self.peek() {
                    self.pos += 1;
                    let d = match self.peek() {
                        Some(Tok::Int(d)) => d.clone(),
                        _ => return Err(self.unexpected("an integer denominator")),
                    };
                    if d.is_zero() {
                        return Err(self.syntax("zero denominator in rational literal".into()));
                    }
                    self.pos += 1;
                    return Ok(MPoly::constant(Rat::new(n, d)));
                }
                Ok(MPoly::constant(Rat::from_int(n)))
            }
            Some(Tok::Ident(name)) => {
                self.pos += 1;
                Ok(MPoly::var(&name))
            }
            Some(Tok::LParen) => {
                self.pos += 1;
                let inner = self.expr()?;
                match self.peek() {
                    Some(Tok::RParen) => {
                        self.pos += 1;
                        Ok(inner)
                    }
                    _ => Err(self.unexpected("')'")),
                }
            }
            _ => Err(self.unexpected("a number, variable or '('")),
        }
    }
}

/// Parses one polynomial expression into its expanded canonical form.
pub fn parse_poly(text: &str) -> Result<MPoly, ParseError> {
    let toks = lex(text)?;
    let mut parser = Parser { toks: &toks, pos: 0, len: text.len() };
    let p = parser.expr()?;
    if parser.pos < toks.len() {
        return Err(parser.unexpected("an operator or end of input"));
    }
    Ok(p)
}

/// Parses one polynomial per non-empty line; `#` starts a comment.
pub fn parse_collection(text: &str) -> Result<Vec<MPoly>, CollectionError> {
    let mut out = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("");
        if line.trim().is_empty() {
            continue;
        }
        let p = parse_poly(line).map_err(|error| CollectionError { line: idx + 1, error })?;
        out.push(p);
    }
    Ok(out)
}

fn render_monomial(e: &ExpVec) -> String {
    e.iter().map(|(v, k)| if k == 1 { v.to_string() } else { format!("{v}^{k}") }).collect::<Vec<_>>().join("*")
}

/// Canonical text: graded-lex descending terms, explicit `*`, no unary plus.
pub fn render(p: &MPoly) -> String {
    if p.is_zero() {
        return "0".to_string();
    }
    let mut out = String::new();
    for (i, (e, c)) in p.terms().rev().enumerate() {
        let neg = c.is_negative();
        match (i, neg) {
            (0, true) => out.push('-'),
            (0, false) => {}
            (_, true) => out.push_str(" - "),
            (_, false) => out.push_str(" + "),
        }
        let mag = c.abs();
        if e.is_one() {
            out.push_str(&mag.to_string());
        } else if mag.is_one() {
            out.push_str(&render_monomial(e));
        } else {
            out.push_str(&format!("{mag}*{}", render_monomial(e)));
        }
    }
    out
}

/// Renders a univariate polynomial given by its coefficients in `var`.
pub fn render_in(var: &Var, coeffs: &[Rat]) -> String {
    let p = MPoly::from_terms(coeffs.iter().enumerate().map(|(k, c)| (ExpVec::var(var.clone(), k as u32), c.clone())));
    render(&p)
}
