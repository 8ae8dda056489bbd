//! Recursive-descent parser for polynomial expressions.
//!
//! Grammar (whitespace ignored):
//! ```text
//! expr   := ['-'] term (('+' | '-') term)*
//! term   := factor ('*' factor)*
//! factor := atom ['^' uint]
//! atom   := '(' expr ')' | identifier | number
//! number := uint ['/' uint]
//! ```
//! There is no implicit multiplication and no general division: `2x` and
//! `x/2` are syntax errors, `1/2*x` is not.

use super::{Poly, TermOrder, VarSpace};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};
use std::fmt;
use std::sync::Arc;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ParseError {
    UnexpectedChar { ch: char, pos: usize },
    UnknownIdentifier { name: String, pos: usize },
    UnexpectedToken { found: String, pos: usize },
    UnexpectedEnd,
    NegativeExponent { pos: usize },
    ExponentTooLarge { pos: usize },
    ZeroDenominator { pos: usize },
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ParseError::UnexpectedChar { ch, pos } => {
                write!(f, "unexpected character '{ch}' at byte {pos}")
            }
            ParseError::UnknownIdentifier { name, pos } => {
                write!(f, "unknown identifier '{name}' at byte {pos}")
            }
            ParseError::UnexpectedToken { found, pos } => {
                write!(f, "unexpected token '{found}' at byte {pos}")
            }
            ParseError::UnexpectedEnd => write!(f, "unexpected end of input"),
            ParseError::NegativeExponent { pos } => {
                write!(f, "negative exponent at byte {pos}")
            }
            ParseError::ExponentTooLarge { pos } => {
                write!(f, "exponent too large at byte {pos}")
            }
            ParseError::ZeroDenominator { pos } => {
                write!(f, "zero denominator at byte {pos}")
            }
        }
    }
}

impl std::error::Error for ParseError {}

#[derive(Debug, Clone, PartialEq, Eq)]
enum Tok {
    Ident(String),
    Int(BigInt),
    Plus,
    Minus,
    Star,
    Caret,
    Slash,
    LParen,
    RParen,
}

impl Tok {
    fn describe(&self) -> String {
        match self {
            Tok::Ident(s) => s.clone(),
            Tok::Int(n) => n.to_string(),
            Tok::Plus => "+".into(),
            Tok::Minus => "-".into(),
            Tok::Star => "*".into(),
            Tok::Caret => "^".into(),
            Tok::Slash => "/".into(),
            Tok::LParen => "(".into(),
            Tok::RParen => ")".into(),
        }
    }
}

fn lex(input: &str) -> Result<Vec<(Tok, usize)>, ParseError> {
    let bytes = input.as_bytes();
    let mut toks = vec![];
    let mut i = 0;
    while i < bytes.len() {
        let b = bytes[i];
        match b {
            b' ' | b'\t' | b'\n' | b'\r' => i += 1,
            b'+' => {
                toks.push((Tok::Plus, i));
                i += 1;
            }
            b'-' => {
                toks.push((Tok::Minus, i));
                i += 1;
            }
            b'*' => {
                toks.push((Tok::Star, i));
                i += 1;
            }
            b'^' => {
                toks.push((Tok::Caret, i));
                i += 1;
            }
            b'/' => {
                toks.push((Tok::Slash, i));
                i += 1;
            }
            b'(' => {
                toks.push((Tok::LParen, i));
                i += 1;
            }
            b')' => {
                toks.push((Tok::RParen, i));
                i += 1;
            }
            b'0'..=b'9' => {
                let start = i;
                while i < bytes.len() && bytes[i].is_ascii_digit() {
                    i += 1;
                }
                let n: BigInt = input[start..i].parse().expect("digits parse");
                toks.push((Tok::Int(n), start));
            }
            b'a'..=b'z' | b'A'..=b'Z' | b'_' => {
                let start = i;
                while i < bytes.len()
                    && (bytes[i].is_ascii_alphanumeric() || bytes[i] == b'_')
                {
                    i += 1;
                }
                toks.push((Tok::Ident(input[start..i].to_string()), start));
            }
            _ => {
                let ch = input[i..].chars().next().unwrap();
                return Err(ParseError::UnexpectedChar { ch, pos: i });
            }
        }
    }
    Ok(toks)
}

struct Parser<'a> {
    toks: Vec<(Tok, usize)>,
    i: usize,
    space: &'a Arc<VarSpace>,
    order: &'a Arc<TermOrder>,
}

impl<'a> Parser<'a> {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.i).map(|(t, _)| t)
    }

    fn pos(&self) -> usize {
        self.toks.get(self.i).map(|(_, p)| *p).unwrap_or(usize::MAX)
    }

    fn next(&mut self) -> Option<(Tok, usize)> {
        let t = self.toks.get(self.i).cloned();
        self.i += 1;
        t
    }

    fn expr(&mut self) -> Result<Poly, ParseError> {
        let mut negate = false;
        if self.peek() == Some(&Tok::Minus) {
            self.next();
            negate = true;
        }
        let mut acc = self.term()?;
        if negate {
            acc = acc.neg();
        }
        loop {
            match self.peek() {
                Some(Tok::Plus) => {
                    self.next();
                    let t = self.term()?;
                    acc = acc.add(&t);
                }
                Some(Tok::Minus) => {
                    self.next();
                    let t = self.term()?;
                    acc = acc.sub(&t);
                }
                _ => break,
            }
        }
        Ok(acc)
    }

    fn term(&mut self) -> Result<Poly, ParseError> {
        let mut acc = self.factor()?;
        while self.peek() == Some(&Tok::Star) {
            self.next();
            let f = self.factor()?;
            acc = acc.mul(&f);
        }
        Ok(acc)
    }

    fn factor(&mut self) -> Result<Poly, ParseError> {
        let base = self.atom()?;
        if self.peek() == Some(&Tok::Caret) {
            self.next();
            let pos = self.pos();
            match self.next() {
                Some((Tok::Int(n), _)) => {
                    let e = n
                        .to_u32()
                        .ok_or(ParseError::ExponentTooLarge { pos })?;
                    Ok(base.pow(e))
                }
                Some((Tok::Minus, p)) => Err(ParseError::NegativeExponent { pos: p }),
                Some((t, p)) => Err(ParseError::UnexpectedToken {
                    found: t.describe(),
                    pos: p,
                }),
                None => Err(ParseError::UnexpectedEnd),
            }
        } else {
            Ok(base)
        }
    }

    fn atom(&mut self) -> Result<Poly, ParseError> {
        match self.next() {
            Some((Tok::LParen, _)) => {
                let e = self.expr()?;
                match self.next() {
                    Some((Tok::RParen, _)) => Ok(e),
                    Some((t, p)) => Err(ParseError::UnexpectedToken {
                        found: t.describe(),
                        pos: p,
                    }),
                    None => Err(ParseError::UnexpectedEnd),
                }
            }
            Some((Tok::Ident(name), pos)) => match self.space.index_of(&name) {
                Some(i) => Ok(Poly::var(self.space, self.order, i)),
                None => Err(ParseError::UnknownIdentifier { name, pos }),
            },
            Some((Tok::Int(n), _)) => {
                // Optional '/ uint' forms a rational literal.
                if self.peek() == Some(&Tok::Slash) {
                    self.next();
                    let pos = self.pos();
                    match self.next() {
                        Some((Tok::Int(d), p)) => {
                            if d.is_zero() {
                                return Err(ParseError::ZeroDenominator { pos: p });
                            }
                            Ok(Poly::constant(
                                self.space,
                                self.order,
                                BigRational::new(n, d),
                            ))
                        }
                        Some((t, p)) => Err(ParseError::UnexpectedToken {
                            found: t.describe(),
                            pos: p,
                        }),
                        None => {
                            let _ = pos;
                            Err(ParseError::UnexpectedEnd)
                        }
                    }
                } else {
                    Ok(Poly::constant(
                        self.space,
                        self.order,
                        BigRational::from_integer(n),
                    ))
                }
            }
            Some((t, p)) => Err(ParseError::UnexpectedToken {
                found: t.describe(),
                pos: p,
            }),
            None => Err(ParseError::UnexpectedEnd),
        }
    }
}

/// Parse an expression over the named variables of `space` into a [`Poly`]
/// sorted under `order`.
pub fn parse_poly(
    input: &str,
    space: &Arc<VarSpace>,
    order: &Arc<TermOrder>,
) -> Result<Poly, ParseError> {
    let toks = lex(input)?;
    let mut p = Parser {
        toks,
        i: 0,
        space,
        order,
    };
    let poly = p.expr()?;
    match p.next() {
        None => Ok(poly),
        Some((t, pos)) => Err(ParseError::UnexpectedToken {
            found: t.describe(),
            pos,
        }),
    }
}
