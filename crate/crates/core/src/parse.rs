//! Recursive-descent parser for the polynomial expression language.
//!
//! ```text
//! expr   := ('+' | '-')? term (('+' | '-') term)*
//! term   := factor ('*' factor)*
//! factor := base ('^' unsigned-int)?
//! base   := x | y | z | t | zeta | integer | integer '/' integer | '(' expr ')'
//! ```
//!
//! Whitespace is insignificant and there is no implicit multiplication.
//! `zeta` is only accepted when a cyclotomic context is supplied.

use std::fmt;
use std::sync::Arc;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;
use thiserror::Error;

use crate::poly::{MultiPoly, Var};
use crate::scalar::{CycloContext, Scalar};

/// Where parsing stopped. `offset` is the 1-based byte position of the
/// offending lexeme; end of input reports `len + 1`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParseDiagnostic {
    pub offset: usize,
    pub expected: String,
    pub found: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("parse error at offset {}: expected {}, found {}", .0.offset, .0.expected, .0.found)]
pub struct ParseError(pub ParseDiagnostic);

#[derive(Debug, Clone, PartialEq, Eq)]
enum Tok {
    Var(Var),
    Zeta,
    Int(BigInt),
    Plus,
    Minus,
    Star,
    Slash,
    Caret,
    LParen,
    RParen,
    Unknown(String),
    End,
}

impl fmt::Display for Tok {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Tok::Var(v) => write!(f, "'{v}'"),
            Tok::Zeta => f.write_str("'zeta'"),
            Tok::Int(i) => write!(f, "'{i}'"),
            Tok::Plus => f.write_str("'+'"),
            Tok::Minus => f.write_str("'-'"),
            Tok::Star => f.write_str("'*'"),
            Tok::Slash => f.write_str("'/'"),
            Tok::Caret => f.write_str("'^'"),
            Tok::LParen => f.write_str("'('"),
            Tok::RParen => f.write_str("')'"),
            Tok::Unknown(s) => write!(f, "'{s}'"),
            Tok::End => f.write_str("end of input"),
        }
    }
}

fn lex(src: &str) -> Vec<(usize, Tok)> {
    let bytes = src.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let ch = bytes[i];
        if ch.is_ascii_whitespace() {
            i += 1;
            continue;
        }
        let start = i;
        let tok = match ch {
            b'+' => Tok::Plus,
            b'-' => Tok::Minus,
            b'*' => Tok::Star,
            b'/' => Tok::Slash,
            b'^' => Tok::Caret,
            b'(' => Tok::LParen,
            b')' => Tok::RParen,
            b'0'..=b'9' => {
                while i + 1 < bytes.len() && bytes[i + 1].is_ascii_digit() {
                    i += 1;
                }
                Tok::Int(src[start..=i].parse().expect("ascii digits"))
            }
            c if c.is_ascii_alphabetic() => {
                while i + 1 < bytes.len() && bytes[i + 1].is_ascii_alphanumeric() {
                    i += 1;
                }
                let word = &src[start..=i];
                match (word, Var::from_name(word)) {
                    (_, Some(v)) => Tok::Var(v),
                    ("zeta", None) => Tok::Zeta,
                    _ => Tok::Unknown(word.to_string()),
                }
            }
            _ => {
                let len = src[start..].chars().next().map_or(1, char::len_utf8);
                i += len - 1;
                Tok::Unknown(src[start..start + len].to_string())
            }
        };
        out.push((start + 1, tok));
        i += 1;
    }
    out.push((src.len() + 1, Tok::End));
    out
}

struct Parser<'a> {
    toks: Vec<(usize, Tok)>,
    pos: usize,
    cyclo: Option<&'a Arc<CycloContext>>,
}

impl Parser<'_> {
    fn peek(&self) -> &Tok {
        &self.toks[self.pos].1
    }

    fn bump(&mut self) -> Tok {
        let t = self.toks[self.pos].1.clone();
        if self.pos + 1 < self.toks.len() {
            self.pos += 1;
        }
        t
    }

    fn error(&self, expected: &str) -> ParseError {
        let (offset, tok) = &self.toks[self.pos];
        ParseError(ParseDiagnostic {
            offset: *offset,
            expected: expected.to_string(),
            found: tok.to_string(),
        })
    }

    fn expr(&mut self) -> Result<MultiPoly, ParseError> {
        let negate = match self.peek() {
            Tok::Plus => {
                self.bump();
                false
            }
            Tok::Minus => {
                self.bump();
                true
            }
            _ => false,
        };
        let first = self.term()?;
        let mut acc = if negate { -first } else { first };
        loop {
            match self.peek() {
                Tok::Plus => {
                    self.bump();
                    acc = acc + self.term()?;
                }
                Tok::Minus => {
                    self.bump();
                    acc = acc - self.term()?;
                }
                _ => return Ok(acc),
            }
        }
    }

    fn term(&mut self) -> Result<MultiPoly, ParseError> {
        let mut acc = self.factor()?;
        while *self.peek() == Tok::Star {
            self.bump();
            acc = acc * self.factor()?;
        }
        Ok(acc)
    }

    fn factor(&mut self) -> Result<MultiPoly, ParseError> {
        let base = self.base()?;
        if *self.peek() != Tok::Caret {
            return Ok(base);
        }
        self.bump();
        match self.peek().clone() {
            Tok::Int(e) => {
                let e = u32::try_from(&e).map_err(|_| self.error("exponent below 2^32"))?;
                self.bump();
                Ok(base.pow(e))
            }
            _ => Err(self.error("unsigned integer exponent")),
        }
    }

    fn base(&mut self) -> Result<MultiPoly, ParseError> {
        match self.peek().clone() {
            Tok::Var(v) => {
                self.bump();
                Ok(MultiPoly::var(v))
            }
            Tok::Zeta => match self.cyclo {
                Some(ctx) => {
                    self.bump();
                    Ok(MultiPoly::constant(Scalar::zeta(ctx)))
                }
                None => Err(self.error("factor (zeta requires a cyclotomic context)")),
            },
            Tok::Int(num) => {
                self.bump();
                if *self.peek() != Tok::Slash {
                    return Ok(MultiPoly::constant(Scalar::from(num)));
                }
                self.bump();
                match self.peek().clone() {
                    Tok::Int(den) if !den.is_zero() => {
                        self.bump();
                        Ok(MultiPoly::constant(Scalar::Rational(BigRational::new(num, den))))
                    }
                    _ => Err(self.error("nonzero integer denominator")),
                }
            }
            Tok::LParen => {
                self.bump();
                let inner = self.expr()?;
                if *self.peek() != Tok::RParen {
                    return Err(self.error("')'"));
                }
                self.bump();
                Ok(inner)
            }
            _ => Err(self.error("factor")),
        }
    }
}

pub fn parse_poly(src: &str, cyclo: Option<&Arc<CycloContext>>) -> Result<MultiPoly, ParseError> {
    let mut p = Parser {
        toks: lex(src),
        pos: 0,
        cyclo,
    };
    let out = p.expr()?;
    if *p.peek() != Tok::End {
        return Err(p.error("operator or end of input"));
    }
    Ok(out)
}

/// A scalar literal is any constant expression, e.g. `-1/2` or `zeta^2 + 1`.
pub fn parse_scalar(src: &str, cyclo: Option<&Arc<CycloContext>>) -> Result<Scalar, ParseError> {
    let p = parse_poly(src, cyclo)?;
    p.as_constant().ok_or_else(|| {
        ParseError(ParseDiagnostic {
            offset: 1,
            expected: "constant expression".into(),
            found: format!("'{src}'"),
        })
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn v(var: Var) -> MultiPoly {
        MultiPoly::var(var)
    }

    #[test]
    fn defining_polynomial() {
        let p = parse_poly("x + y*(x^3+z^2) + t^3", None).unwrap();
        let f = v(Var::X).pow(3) + v(Var::Z).pow(2);
        assert_eq!(p, v(Var::X) + v(Var::Y) * f + v(Var::T).pow(3));
    }

    #[test]
    fn dangling_operator() {
        let err = parse_poly("x +", None).unwrap_err();
        assert_eq!(err.0.offset, 4);
        assert_eq!(err.0.expected, "factor");
        assert_eq!(err.0.found, "end of input");
    }

    #[test]
    fn rational_coefficient() {
        let p = parse_poly("1/2*x^2 - z", None).unwrap();
        assert_eq!(p.to_string(), "1/2*x^2 - z");
        let m = crate::poly::Monomial([2, 0, 0, 0]);
        assert_eq!(p.coeff(&m), Scalar::ratio(1, 2));
    }

    #[test]
    fn rejects() {
        for bad in ["2x", "x y", "x^", "x^-1", "(x", "w", "1/0", "zeta", "x)", "x**2"] {
            assert!(parse_poly(bad, None).is_err(), "{bad}");
        }
        let err = parse_poly("x + 2 ? 3", None).unwrap_err();
        assert_eq!(err.0.offset, 7);
    }

    #[test]
    fn zeta_with_context() {
        let ctx = CycloContext::new(3).unwrap();
        let s = parse_scalar("zeta^3", Some(&ctx)).unwrap();
        assert!(s.is_one());
        let s = parse_scalar("-zeta - 1", Some(&ctx)).unwrap();
        assert_eq!(s, Scalar::zeta(&ctx).pow(2).unwrap());
        assert!(parse_scalar("x", None).is_err());
        assert_eq!(parse_scalar(" -7/14 ", None).unwrap(), Scalar::ratio(-1, 2));
    }
}
