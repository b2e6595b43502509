//! Recursive-descent parser for polynomial text.
//!
//! ```text
//! expr   := term (('+' | '-') term)*
//! term   := unary (('*' | '/') unary)*
//! unary  := ('+' | '-') unary | power
//! power  := atom ('^' integer)?
//! atom   := integer | 'x' | 'y' | 'z' | '(' expr ')'
//! ```
//! Division is only allowed by nonzero constants, which is how rational literals like `3/4` are read.

use num_bigint::BigInt;
use num_traits::Zero;

use super::multipoly::MultiPoly;
use super::rational::Rational;
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Num(BigInt),
    Var(usize),
    Op(char),
}

fn tokenize(text: &str) -> Result<Vec<(usize, Tok)>> {
    let chars: Vec<char> = text.chars().collect();
    let mut out = Vec::new();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        match c {
            c if c.is_whitespace() => i += 1,
            '0'..='9' => {
                let start = i;
                while i < chars.len() && chars[i].is_ascii_digit() {
                    i += 1;
                }
                let s: String = chars[start..i].iter().collect();
                out.push((start, Tok::Num(s.parse().unwrap())));
            }
            'x' | 'y' | 'z' => {
                out.push((i, Tok::Var((c as u8 - b'x') as usize)));
                i += 1;
            }
            '*' if chars.get(i + 1) == Some(&'*') => {
                out.push((i, Tok::Op('^')));
                i += 2;
            }
            '+' | '-' | '*' | '/' | '^' | '(' | ')' | ':' => {
                out.push((i, Tok::Op(c)));
                i += 1;
            }
            '\u{2212}' => {
                out.push((i, Tok::Op('-')));
                i += 1;
            }
            _ => {
                return Err(Error::Syntax {
                    position: i,
                    message: format!("unexpected character '{}'", c),
                })
            }
        }
    }
    Ok(out)
}

struct Parser {
    toks: Vec<(usize, Tok)>,
    pos: usize,
    end: usize,
}

impl Parser {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|(_, t)| t)
    }

    fn here(&self) -> usize {
        self.toks.get(self.pos).map(|(p, _)| *p).unwrap_or(self.end)
    }

    fn err<T>(&self, message: impl Into<String>) -> Result<T> {
        Err(Error::Syntax {
            position: self.here(),
            message: message.into(),
        })
    }

    fn eat(&mut self, op: char) -> bool {
        if self.peek() == Some(&Tok::Op(op)) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expect(&mut self, op: char) -> Result<()> {
        if self.eat(op) {
            Ok(())
        } else {
            self.err(format!("expected '{}'", op))
        }
    }

    fn expr(&mut self) -> Result<MultiPoly> {
        let mut acc = self.term()?;
        loop {
            if self.eat('+') {
                acc = &acc + &self.term()?;
            } else if self.eat('-') {
                acc = &acc - &self.term()?;
            } else {
                return Ok(acc);
            }
        }
    }

    fn term(&mut self) -> Result<MultiPoly> {
        let mut acc = self.unary()?;
        loop {
            if self.eat('*') {
                acc = &acc * &self.unary()?;
            } else if self.peek() == Some(&Tok::Op('/')) {
                let at = self.here();
                self.pos += 1;
                let d = self.unary()?;
                if !d.is_constant() {
                    return Err(Error::Syntax {
                        position: at,
                        message: "division by a non-constant".into(),
                    });
                }
                let c = d.constant_term();
                if c.is_zero() {
                    return Err(Error::Syntax {
                        position: at,
                        message: "division by zero".into(),
                    });
                }
                acc = acc.scale(&c.recip());
            } else {
                return Ok(acc);
            }
        }
    }

    fn unary(&mut self) -> Result<MultiPoly> {
        if self.eat('-') {
            return Ok(-self.unary()?);
        }
        if self.eat('+') {
            return self.unary();
        }
        self.power()
    }

    fn power(&mut self) -> Result<MultiPoly> {
        let base = self.atom()?;
        if self.eat('^') {
            match self.peek().cloned() {
                Some(Tok::Num(n)) => {
                    self.pos += 1;
                    let e: u32 = match u32::try_from(n) {
                        Ok(e) if e <= 10_000 => e,
                        _ => return self.err("exponent too large"),
                    };
                    Ok(base.pow(e))
                }
                _ => self.err("expected a non-negative integer exponent"),
            }
        } else {
            Ok(base)
        }
    }

    fn atom(&mut self) -> Result<MultiPoly> {
        match self.peek().cloned() {
            Some(Tok::Num(n)) => {
                self.pos += 1;
                Ok(MultiPoly::constant(Rational::from_integer(n)))
            }
            Some(Tok::Var(v)) => {
                self.pos += 1;
                Ok(MultiPoly::var(v))
            }
            Some(Tok::Op('(')) => {
                self.pos += 1;
                let e = self.expr()?;
                self.expect(')')?;
                Ok(e)
            }
            Some(_) => self.err("expected a number, variable or '('"),
            None => self.err("unexpected end of input"),
        }
    }
}

fn parser(text: &str) -> Result<Parser> {
    Ok(Parser {
        toks: tokenize(text)?,
        pos: 0,
        end: text.chars().count(),
    })
}

pub fn parse_poly(text: &str) -> Result<MultiPoly> {
    let mut p = parser(text)?;
    let e = p.expr()?;
    if p.pos != p.toks.len() {
        return p.err("trailing input");
    }
    Ok(e)
}

/// Parses `"(P0 : P1 : P2)"` into three raw polynomials; the outer parentheses are optional.
pub fn parse_triple(text: &str) -> Result<[MultiPoly; 3]> {
    let mut p = parser(text)?;
    let wrapped = p.eat('(');
    let a = p.expr()?;
    p.expect(':')?;
    let b = p.expr()?;
    p.expect(':')?;
    let c = p.expr()?;
    if wrapped {
        p.expect(')')?;
    }
    if p.pos != p.toks.len() {
        return p.err("trailing input");
    }
    Ok([a, b, c])
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_rational_literals_and_powers() {
        let p = parse_poly("3/2*x^2 - (y + z)^2").unwrap();
        assert_eq!(p.to_string(), "3/2*x^2 - y^2 - 2*y*z - z^2");
        assert_eq!(parse_poly("x**2").unwrap(), parse_poly("x^2").unwrap());
        assert_eq!(parse_poly(" - x ").unwrap().to_string(), "-x");
    }

    #[test]
    fn reports_positions() {
        match parse_poly("x + * y") {
            Err(Error::Syntax { position, .. }) => assert_eq!(position, 4),
            other => panic!("unexpected {:?}", other),
        }
        match parse_poly("x + w") {
            Err(Error::Syntax { position, .. }) => assert_eq!(position, 4),
            other => panic!("unexpected {:?}", other),
        }
        assert!(matches!(parse_poly("x/y"), Err(Error::Syntax { position: 1, .. })));
        assert!(matches!(parse_poly("(x"), Err(Error::Syntax { position: 2, .. })));
    }

    #[test]
    fn triple() {
        let t = parse_triple("(y*z : x*z : x*y)").unwrap();
        assert_eq!(t[2].to_string(), "x*y");
        assert!(parse_triple("(x : y)").is_err());
    }
}
