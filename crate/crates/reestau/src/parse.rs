//! Recursive-descent parser for polynomial expressions.
//!
//! Grammar: integer literals, declared variable names, `+ - * ^ ( )`.
//! Implicit multiplication is not allowed. `^` takes a nonnegative
//! integer exponent.

use std::sync::Arc;

use num_bigint::BigInt;

use crate::error::{Error, Result};
use crate::poly::{MultiPoly, Ring};

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Int(BigInt),
    Ident(String),
    Plus,
    Minus,
    Star,
    Caret,
    LParen,
    RParen,
}

struct Lexer<'a> {
    src: &'a [u8],
    pos: usize,
}

impl<'a> Lexer<'a> {
    fn tokens(src: &'a str) -> Result<Vec<(Tok, usize)>> {
        let mut lx = Lexer { src: src.as_bytes(), pos: 0 };
        let mut out = Vec::new();
        while lx.pos < lx.src.len() {
            let start = lx.pos;
            let c = lx.src[lx.pos];
            match c {
                b' ' | b'\t' => {
                    lx.pos += 1;
                    continue;
                }
                b'+' => out.push((Tok::Plus, start)),
                b'-' => out.push((Tok::Minus, start)),
                b'*' => out.push((Tok::Star, start)),
                b'^' => out.push((Tok::Caret, start)),
                b'(' => out.push((Tok::LParen, start)),
                b')' => out.push((Tok::RParen, start)),
                b'0'..=b'9' => {
                    let mut end = lx.pos;
                    while end < lx.src.len() && lx.src[end].is_ascii_digit() {
                        end += 1;
                    }
                    let text = &src[lx.pos..end];
                    out.push((Tok::Int(text.parse().expect("digits")), start));
                    lx.pos = end;
                    continue;
                }
                c if c.is_ascii_alphabetic() || c == b'_' => {
                    let mut end = lx.pos;
                    while end < lx.src.len()
                        && (lx.src[end].is_ascii_alphanumeric() || lx.src[end] == b'_')
                    {
                        end += 1;
                    }
                    out.push((Tok::Ident(src[lx.pos..end].to_string()), start));
                    lx.pos = end;
                    continue;
                }
                other => {
                    return Err(Error::Parse {
                        pos: start,
                        msg: format!("unexpected character `{}`", other as char),
                    })
                }
            }
            lx.pos += 1;
        }
        Ok(out)
    }
}

struct Parser<'a> {
    toks: Vec<(Tok, usize)>,
    idx: usize,
    ring: &'a Arc<Ring>,
    len: usize,
}

impl<'a> Parser<'a> {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.idx).map(|(t, _)| t)
    }

    fn pos(&self) -> usize {
        self.toks.get(self.idx).map(|(_, p)| *p).unwrap_or(self.len)
    }

    fn bump(&mut self) -> Option<Tok> {
        let t = self.toks.get(self.idx).map(|(t, _)| t.clone());
        self.idx += 1;
        t
    }

    // expr := term (('+'|'-') term)*
    fn expr(&mut self) -> Result<MultiPoly> {
        let mut acc = self.term()?;
        loop {
            match self.peek() {
                Some(Tok::Plus) => {
                    self.bump();
                    acc = acc.add(&self.term()?)?;
                }
                Some(Tok::Minus) => {
                    self.bump();
                    acc = acc.sub(&self.term()?)?;
                }
                _ => return Ok(acc),
            }
        }
    }

    // term := unary ('*' unary)*
    fn term(&mut self) -> Result<MultiPoly> {
        let mut acc = self.unary()?;
        while self.peek() == Some(&Tok::Star) {
            self.bump();
            acc = acc.mul(&self.unary()?)?;
        }
        Ok(acc)
    }

    // unary := '-' unary | power
    fn unary(&mut self) -> Result<MultiPoly> {
        if self.peek() == Some(&Tok::Minus) {
            self.bump();
            return Ok(self.unary()?.neg());
        }
        self.power()
    }

    // power := atom ('^' nonneg-int)?
    fn power(&mut self) -> Result<MultiPoly> {
        let base = self.atom()?;
        if self.peek() == Some(&Tok::Caret) {
            self.bump();
            let pos = self.pos();
            match self.bump() {
                Some(Tok::Int(n)) => {
                    let e: u32 = n.to_string().parse().map_err(|_| Error::Parse {
                        pos,
                        msg: "exponent too large".into(),
                    })?;
                    return Ok(base.pow(e));
                }
                _ => {
                    return Err(Error::Parse {
                        pos,
                        msg: "exponent must be a nonnegative integer literal".into(),
                    })
                }
            }
        }
        Ok(base)
    }

    fn atom(&mut self) -> Result<MultiPoly> {
        let pos = self.pos();
        match self.bump() {
            Some(Tok::Int(n)) => Ok(MultiPoly::constant(
                self.ring,
                self.ring.field().from_bigint(&n),
            )),
            Some(Tok::Ident(name)) => match self.ring.var_index(&name) {
                Some(i) => Ok(MultiPoly::var(self.ring, i)),
                None => Err(Error::UnknownVariable(name)),
            },
            Some(Tok::LParen) => {
                let inner = self.expr()?;
                match self.bump() {
                    Some(Tok::RParen) => Ok(inner),
                    _ => Err(Error::Parse { pos, msg: "unbalanced parenthesis".into() }),
                }
            }
            other => Err(Error::Parse {
                pos,
                msg: format!("expected a value, found {:?}", other),
            }),
        }
    }
}

/// Parses an expression into a canonical sparse polynomial over `ring`.
pub fn parse_poly(text: &str, ring: &Arc<Ring>) -> Result<MultiPoly> {
    let toks = Lexer::tokens(text)?;
    let mut p = Parser { toks, idx: 0, ring, len: text.len() };
    let poly = p.expr()?;
    if p.idx < p.toks.len() {
        return Err(Error::Parse {
            pos: p.pos(),
            msg: "trailing input".into(),
        });
    }
    Ok(poly)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::FieldSpec;

    fn ring(field: FieldSpec, vars: &[&str]) -> Arc<Ring> {
        Ring::new(field, vars.iter().map(|s| s.to_string()).collect(), None).unwrap()
    }

    #[test]
    fn cusp_terms() {
        let r = ring(FieldSpec::Rational, &["x", "z"]);
        let f = parse_poly("z^2 - x^3", &r).unwrap();
        let terms: Vec<_> = f.terms().collect();
        assert_eq!(terms.len(), 2);
        assert_eq!(f.coeff(&[0, 2]), FieldSpec::Rational.from_i64(1));
        assert_eq!(f.coeff(&[3, 0]), FieldSpec::Rational.from_i64(-1));
    }

    #[test]
    fn char2_sum_cancels() {
        let r = ring(FieldSpec::prime(2).unwrap(), &["x"]);
        assert!(parse_poly("x + x", &r).unwrap().is_zero());
    }

    #[test]
    fn difference_of_squares() {
        let r = ring(FieldSpec::Rational, &["x", "z"]);
        let f = parse_poly("(z - x)*(z + x)", &r).unwrap();
        assert_eq!(f, parse_poly("z^2 - x^2", &r).unwrap());
    }

    #[test]
    fn errors_carry_position() {
        let r = ring(FieldSpec::Rational, &["x"]);
        match parse_poly("x + $", &r) {
            Err(Error::Parse { pos, .. }) => assert_eq!(pos, 4),
            other => panic!("expected parse error, got {other:?}"),
        }
        assert!(matches!(parse_poly("x + y", &r), Err(Error::UnknownVariable(_))));
        assert!(parse_poly("x^y", &r).is_err());
    }

    #[test]
    fn print_parse_roundtrip() {
        let r = ring(FieldSpec::Rational, &["x", "y", "z"]);
        for src in ["z^2 - x^3", "x*y*z - 3*z + 7", "x^4 + 2*x^2*y^2 + y^4", "0", "-x - 1"] {
            let f = parse_poly(src, &r).unwrap();
            let g = parse_poly(&f.to_string(), &r).unwrap();
            assert_eq!(f, g, "roundtrip failed for {src}");
        }
    }
}
