//! Text expressions for ring elements.
//!
//! Grammar:
//! ```text
//! expr   := ['-'] term (('+' | '-') term)*
//! term   := factor (('*' | '/')? factor)*
//! factor := atom ('^' ['-'] digits)?
//! atom   := digits | ident | '(' expr ')'
//! ```
//! Juxtaposed factors multiply. `/` evaluates exact division and is
//! rejected outright in structure-constant position, where coefficients
//! must stay inside the base ring.

use super::scalar::Scalar;
use super::Ring;
use crate::error::{Error, Result};
use num::BigInt;

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Int(BigInt),
    Ident(String),
    Plus,
    Minus,
    Star,
    Slash,
    Caret,
    LParen,
    RParen,
}

fn lex(text: &str) -> Result<Vec<Tok>> {
    let mut toks = Vec::new();
    let mut chars = text.char_indices().peekable();
    while let Some(&(pos, c)) = chars.peek() {
        match c {
            ' ' | '\t' | '\n' | '\r' => {
                chars.next();
            }
            '+' => {
                chars.next();
                toks.push(Tok::Plus);
            }
            '-' => {
                chars.next();
                toks.push(Tok::Minus);
            }
            '*' => {
                chars.next();
                toks.push(Tok::Star);
            }
            '/' => {
                chars.next();
                toks.push(Tok::Slash);
            }
            '^' => {
                chars.next();
                toks.push(Tok::Caret);
            }
            '(' => {
                chars.next();
                toks.push(Tok::LParen);
            }
            ')' => {
                chars.next();
                toks.push(Tok::RParen);
            }
            '0'..='9' => {
                let mut digits = String::new();
                while let Some(&(_, d)) = chars.peek() {
                    if d.is_ascii_digit() {
                        digits.push(d);
                        chars.next();
                    } else {
                        break;
                    }
                }
                toks.push(Tok::Int(digits.parse().expect("digit string")));
            }
            c if c.is_ascii_alphabetic() || c == '_' => {
                let mut name = String::new();
                while let Some(&(_, d)) = chars.peek() {
                    if d.is_ascii_alphanumeric() || d == '_' {
                        name.push(d);
                        chars.next();
                    } else {
                        break;
                    }
                }
                toks.push(Tok::Ident(name));
            }
            other => {
                return Err(Error::Syntax(format!(
                    "unexpected character `{other}` at byte {pos}"
                )))
            }
        }
    }
    Ok(toks)
}

struct Parser<'a> {
    toks: Vec<Tok>,
    pos: usize,
    ring: &'a Ring,
    allow_div: bool,
}

impl<'a> Parser<'a> {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos)
    }

    fn next(&mut self) -> Option<Tok> {
        let t = self.toks.get(self.pos).cloned();
        if t.is_some() {
            self.pos += 1;
        }
        t
    }

    fn expr(&mut self) -> Result<Scalar> {
        let mut acc = if self.peek() == Some(&Tok::Minus) {
            self.next();
            self.term()?.neg()
        } else {
            self.term()?
        };
        loop {
            match self.peek() {
                Some(Tok::Plus) => {
                    self.next();
                    acc = acc.add(&self.term()?);
                }
                Some(Tok::Minus) => {
                    self.next();
                    acc = acc.sub(&self.term()?);
                }
                _ => return Ok(acc),
            }
        }
    }

    fn term(&mut self) -> Result<Scalar> {
        let mut acc = self.factor()?;
        loop {
            match self.peek() {
                Some(Tok::Star) => {
                    self.next();
                    acc = acc.mul(&self.factor()?);
                }
                Some(Tok::Slash) => {
                    if !self.allow_div {
                        return Err(Error::Syntax(
                            "division is not allowed in structure constants".into(),
                        ));
                    }
                    self.next();
                    acc = acc.try_div(&self.factor()?)?;
                }
                Some(Tok::Int(_)) | Some(Tok::Ident(_)) | Some(Tok::LParen) => {
                    acc = acc.mul(&self.factor()?);
                }
                _ => return Ok(acc),
            }
        }
    }

    fn factor(&mut self) -> Result<Scalar> {
        let base = self.atom()?;
        if self.peek() == Some(&Tok::Caret) {
            self.next();
            let neg = if self.peek() == Some(&Tok::Minus) {
                self.next();
                true
            } else {
                false
            };
            let Some(Tok::Int(n)) = self.next() else {
                return Err(Error::Syntax("expected integer exponent after `^`".into()));
            };
            let k: i64 = n
                .try_into()
                .map_err(|_| Error::Syntax("exponent out of range".into()))?;
            let k = if neg { -k } else { k };
            return base.pow(k);
        }
        Ok(base)
    }

    fn atom(&mut self) -> Result<Scalar> {
        match self.next() {
            Some(Tok::Int(n)) => Ok(Scalar::from_bigint(self.ring, &n)),
            Some(Tok::Ident(name)) => Scalar::var(self.ring, &name),
            Some(Tok::LParen) => {
                let inner = self.expr()?;
                if self.next() != Some(Tok::RParen) {
                    return Err(Error::Syntax("missing closing parenthesis".into()));
                }
                Ok(inner)
            }
            Some(tok) => Err(Error::Syntax(format!("unexpected token {tok:?}"))),
            None => Err(Error::Syntax("unexpected end of expression".into())),
        }
    }
}

fn parse_with(text: &str, ring: &Ring, allow_div: bool) -> Result<Scalar> {
    let toks = lex(text)?;
    if toks.is_empty() {
        return Err(Error::Syntax("empty expression".into()));
    }
    let mut p = Parser { toks, pos: 0, ring, allow_div };
    let value = p.expr()?;
    if p.pos != p.toks.len() {
        return Err(Error::Syntax(format!(
            "trailing input after position {}",
            p.pos
        )));
    }
    Ok(value)
}

/// Parses an expression and evaluates it in `ring`. Division must be
/// exact (or the ring a field).
pub fn parse_scalar(text: &str, ring: &Ring) -> Result<Scalar> {
    parse_with(text, ring, true)
}

/// Parses a structure-constant expression: like `parse_scalar` but any
/// `/` is a syntax error, keeping coefficients inside the base ring.
pub fn parse_structure_scalar(text: &str, ring: &Ring) -> Result<Scalar> {
    parse_with(text, ring, false)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn laurent_polynomial() {
        let r = Ring::laurent(Ring::Rat, &["v"]);
        let s = parse_scalar("v^2 - 1", &r).unwrap();
        assert_eq!(s.to_string(), "v^2 - 1");
        let u = parse_scalar("v^-1 + v", &r).unwrap();
        assert_eq!(u.to_string(), "v + v^-1");
    }

    #[test]
    fn precedence_and_juxtaposition() {
        let r = Ring::poly(Ring::Int, &["x", "y"]);
        let a = parse_scalar("2x y + x^2", &r).unwrap();
        let b = parse_scalar("x*x + 2*(x*y)", &r).unwrap();
        assert_eq!(a, b);
        let c = parse_scalar("-x + 3", &r).unwrap();
        assert_eq!(c.to_string(), "-x + 3");
    }

    #[test]
    fn division_rules() {
        let r = Ring::poly(Ring::Int, &["x"]);
        // exact division is fine outside structure constants
        let q = parse_scalar("(x^2 - 1)/(x + 1)", &r).unwrap();
        assert_eq!(q.to_string(), "x - 1");
        assert!(matches!(
            parse_scalar("x/(x + 1)", &r),
            Err(Error::InexactDivision(_))
        ));
        assert!(matches!(
            parse_structure_scalar("(x^2 - 1)/(x + 1)", &r),
            Err(Error::Syntax(_))
        ));
        assert!(matches!(
            parse_scalar("1/0", &Ring::Rat),
            Err(Error::DivisionByZero(_))
        ));
    }

    #[test]
    fn undeclared_variable() {
        let r = Ring::poly(Ring::Int, &["x"]);
        assert!(matches!(
            parse_scalar("x + q", &r),
            Err(Error::UndeclaredVariable(_))
        ));
    }

    #[test]
    fn fraction_field_entries() {
        let k = Ring::frac(Ring::laurent(Ring::Int, &["v"]));
        let s = parse_scalar("(v + 3)/(2v - 2)", &k).unwrap();
        assert_eq!(s.to_string(), "(v + 3)/(2*v - 2)");
        let t = parse_scalar("1/v", &k).unwrap();
        assert_eq!(t.to_string(), "v^-1");
    }

    #[test]
    fn syntax_errors() {
        let r = Ring::Rat;
        assert!(matches!(parse_scalar("", &r), Err(Error::Syntax(_))));
        assert!(matches!(parse_scalar("1 +", &r), Err(Error::Syntax(_))));
        assert!(matches!(parse_scalar("(1", &r), Err(Error::Syntax(_))));
        assert!(matches!(parse_scalar("1 ? 2", &r), Err(Error::Syntax(_))));
        assert!(matches!(parse_scalar("2 ^ x", &r), Err(Error::Syntax(_))));
    }
}
