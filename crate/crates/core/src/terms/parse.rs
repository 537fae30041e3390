//! Recursive-descent parser.
//!
//! ```text
//! term     := sum
//! sum      := prod ("+" prod)*
//! prod     := pow ("*" pow)*
//! pow      := atom ("^" exp)?
//! atom     := var | "(" term ")" | atom "'"
//! exp      := int | "n" | "(" affine ")"
//! affine   := [int "*"] "n" [("+"|"-") int] | int
//! identity := term "=" term
//! quasi    := identity ("&" identity)* "->" identity
//! ```
//!
//! An exponent that can evaluate to 0 is only accepted as the right factor
//! of a product, where `u*v^0` means `u`.

use super::ast::{Exponent, Identity, QuasiIdentity, Term};
use std::fmt;
use thiserror::Error;

/// Which operation symbols the text may use.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Dialect {
    /// `+`, `*`, `^`
    Semiring,
    /// `*`, `^`, `'`
    Group,
    /// `+`, `*`, `^`, `'` (semirings with a unary inverse)
    Clifford,
}

impl Dialect {
    fn allows_add(self) -> bool {
        !matches!(self, Dialect::Group)
    }
    fn allows_inverse(self) -> bool {
        !matches!(self, Dialect::Semiring)
    }
}

impl fmt::Display for Dialect {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Dialect::Semiring => "semiring",
            Dialect::Group => "group",
            Dialect::Clifford => "clifford",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Kind {
    Term,
    Identity,
    QuasiIdentity,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Parsed {
    Term(Term),
    Identity(Identity),
    QuasiIdentity(QuasiIdentity),
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
#[error("syntax error at position {pos}: {message}")]
pub struct ParseError {
    pub pos: usize,
    pub message: String,
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum Tok {
    Ident(String),
    Int(u64),
    Plus,
    Minus,
    Star,
    Caret,
    Prime,
    LParen,
    RParen,
    Eq,
    Amp,
    Arrow,
    End,
}

impl fmt::Display for Tok {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Tok::Ident(s) => write!(f, "`{s}`"),
            Tok::Int(i) => write!(f, "`{i}`"),
            Tok::Plus => f.write_str("`+`"),
            Tok::Minus => f.write_str("`-`"),
            Tok::Star => f.write_str("`*`"),
            Tok::Caret => f.write_str("`^`"),
            Tok::Prime => f.write_str("`'`"),
            Tok::LParen => f.write_str("`(`"),
            Tok::RParen => f.write_str("`)`"),
            Tok::Eq => f.write_str("`=`"),
            Tok::Amp => f.write_str("`&`"),
            Tok::Arrow => f.write_str("`->`"),
            Tok::End => f.write_str("end of input"),
        }
    }
}

fn lex(text: &str) -> Result<Vec<(Tok, usize)>, ParseError> {
    let bytes = text.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i] as char;
        if c.is_whitespace() {
            i += 1;
            continue;
        }
        let start = i;
        let tok = match c {
            '+' => Tok::Plus,
            '*' => Tok::Star,
            '^' => Tok::Caret,
            '\'' => Tok::Prime,
            '(' => Tok::LParen,
            ')' => Tok::RParen,
            '=' => Tok::Eq,
            '&' => Tok::Amp,
            '-' => {
                if bytes.get(i + 1) == Some(&b'>') {
                    i += 1;
                    Tok::Arrow
                } else {
                    Tok::Minus
                }
            }
            c if c.is_ascii_digit() => {
                while i + 1 < bytes.len() && bytes[i + 1].is_ascii_digit() {
                    i += 1;
                }
                let v = text[start..=i].parse::<u64>().map_err(|_| ParseError {
                    pos: start,
                    message: "integer too large".into(),
                })?;
                Tok::Int(v)
            }
            c if c.is_ascii_alphabetic() || c == '_' => {
                while i + 1 < bytes.len() && (bytes[i + 1].is_ascii_alphanumeric() || bytes[i + 1] == b'_') {
                    i += 1;
                }
                Tok::Ident(text[start..=i].to_string())
            }
            other => {
                return Err(ParseError { pos: start, message: format!("unexpected character `{other}`") });
            }
        };
        out.push((tok, start));
        i += 1;
    }
    out.push((Tok::End, text.len()));
    Ok(out)
}

struct Parser {
    toks: Vec<(Tok, usize)>,
    at: usize,
    dialect: Dialect,
}

/// A parsed power together with the position of an exponent that may be 0.
struct PowItem {
    term: Term,
    zero_able: Option<usize>,
}

impl Parser {
    fn peek(&self) -> &Tok {
        &self.toks[self.at].0
    }

    fn pos(&self) -> usize {
        self.toks[self.at].1
    }

    fn bump(&mut self) -> Tok {
        let t = self.toks[self.at].0.clone();
        if self.at + 1 < self.toks.len() {
            self.at += 1;
        }
        t
    }

    fn err<T>(&self, message: impl Into<String>) -> Result<T, ParseError> {
        Err(ParseError { pos: self.pos(), message: message.into() })
    }

    fn expect(&mut self, want: Tok) -> Result<(), ParseError> {
        if *self.peek() == want {
            self.bump();
            Ok(())
        } else {
            self.err(format!("expected {want}, found {}", self.peek()))
        }
    }

    fn term(&mut self) -> Result<Term, ParseError> {
        let mut acc = self.prod()?;
        while *self.peek() == Tok::Plus {
            if !self.dialect.allows_add() {
                return self.err("`+` is not available in the group dialect");
            }
            self.bump();
            let rhs = self.prod()?;
            acc = Term::add(acc, rhs);
        }
        Ok(acc)
    }

    fn prod(&mut self) -> Result<Term, ParseError> {
        let first = self.pow()?;
        if let Some(p) = first.zero_able {
            return Err(ParseError {
                pos: p,
                message: "exponent 0 outside product context (only `u*v^0` is allowed)".into(),
            });
        }
        let mut acc = first.term;
        while *self.peek() == Tok::Star {
            self.bump();
            let rhs = self.pow()?;
            acc = Term::mul(acc, rhs.term);
        }
        Ok(acc)
    }

    fn pow(&mut self) -> Result<PowItem, ParseError> {
        let base = self.atom()?;
        if *self.peek() != Tok::Caret {
            return Ok(PowItem { term: base, zero_able: None });
        }
        self.bump();
        let at = self.pos();
        let e = self.exponent()?;
        if e.min_value() < 0 {
            return Err(ParseError { pos: at, message: format!("exponent {e} is negative for n = 1") });
        }
        let zero_able = (e.min_value() == 0).then_some(at);
        Ok(PowItem { term: Term::pow(base, e), zero_able })
    }

    fn atom(&mut self) -> Result<Term, ParseError> {
        let mut t = match self.peek().clone() {
            Tok::Ident(v) => {
                self.bump();
                Term::Var(v)
            }
            Tok::LParen => {
                self.bump();
                let inner = self.term()?;
                self.expect(Tok::RParen)?;
                inner
            }
            other => return self.err(format!("expected a variable or `(`, found {other}")),
        };
        while *self.peek() == Tok::Prime {
            if !self.dialect.allows_inverse() {
                return self.err("inverse `'` is only available in the group dialect");
            }
            self.bump();
            t = Term::inv(t);
        }
        Ok(t)
    }

    fn exponent(&mut self) -> Result<Exponent, ParseError> {
        match self.peek().clone() {
            Tok::Int(k) => {
                self.bump();
                Ok(Exponent::constant(k))
            }
            Tok::Ident(s) if s == "n" => {
                self.bump();
                Ok(Exponent::N)
            }
            Tok::LParen => {
                self.bump();
                let e = self.affine()?;
                self.expect(Tok::RParen)?;
                Ok(e)
            }
            other => self.err(format!("expected an exponent, found {other}")),
        }
    }

    fn affine(&mut self) -> Result<Exponent, ParseError> {
        let mut coeff = 1u64;
        if let Tok::Int(k) = *self.peek() {
            self.bump();
            if *self.peek() != Tok::Star {
                return Ok(Exponent::constant(k));
            }
            self.bump();
            coeff = k;
        }
        match self.peek() {
            Tok::Ident(s) if s == "n" => {
                self.bump();
            }
            other => return self.err(format!("expected `n`, found {other}")),
        }
        let sign = match self.peek() {
            Tok::Plus => 1i64,
            Tok::Minus => -1,
            _ => return Ok(Exponent::affine(coeff, 0)),
        };
        self.bump();
        match self.peek().clone() {
            Tok::Int(k) => {
                let k = i64::try_from(k).map_err(|_| ParseError { pos: self.pos(), message: "offset too large".into() })?;
                self.bump();
                Ok(Exponent::affine(coeff, sign * k))
            }
            other => self.err(format!("expected an integer offset, found {other}")),
        }
    }

    fn identity(&mut self) -> Result<Identity, ParseError> {
        let lhs = self.term()?;
        self.expect(Tok::Eq)?;
        let rhs = self.term()?;
        Ok(Identity::new(lhs, rhs))
    }

    fn quasi(&mut self) -> Result<QuasiIdentity, ParseError> {
        let mut ids = vec![self.identity()?];
        while *self.peek() == Tok::Amp {
            self.bump();
            ids.push(self.identity()?);
        }
        if *self.peek() == Tok::Arrow {
            self.bump();
            let conclusion = self.identity()?;
            Ok(QuasiIdentity { premises: ids, conclusion })
        } else if ids.len() == 1 {
            Ok(QuasiIdentity { premises: Vec::new(), conclusion: ids.pop().expect("one identity") })
        } else {
            self.err(format!("expected `->`, found {}", self.peek()))
        }
    }

    fn finish(&self) -> Result<(), ParseError> {
        if *self.peek() == Tok::End {
            Ok(())
        } else {
            self.err(format!("unexpected trailing {}", self.peek()))
        }
    }
}

fn parser(text: &str, dialect: Dialect) -> Result<Parser, ParseError> {
    Ok(Parser { toks: lex(text)?, at: 0, dialect })
}

pub fn parse_term(text: &str, dialect: Dialect) -> Result<Term, ParseError> {
    let mut p = parser(text, dialect)?;
    let t = p.term()?;
    p.finish()?;
    Ok(t)
}

pub fn parse_identity(text: &str, dialect: Dialect) -> Result<Identity, ParseError> {
    let mut p = parser(text, dialect)?;
    let t = p.identity()?;
    p.finish()?;
    Ok(t)
}

pub fn parse_quasi_identity(text: &str, dialect: Dialect) -> Result<QuasiIdentity, ParseError> {
    let mut p = parser(text, dialect)?;
    let t = p.quasi()?;
    p.finish()?;
    Ok(t)
}

pub fn parse(text: &str, kind: Kind, dialect: Dialect) -> Result<Parsed, ParseError> {
    Ok(match kind {
        Kind::Term => Parsed::Term(parse_term(text, dialect)?),
        Kind::Identity => Parsed::Identity(parse_identity(text, dialect)?),
        Kind::QuasiIdentity => Parsed::QuasiIdentity(parse_quasi_identity(text, dialect)?),
    })
}
