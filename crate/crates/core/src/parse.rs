//! Text syntax for polynomials: `+ - * ^`, parentheses, integer and
//! `a/b` coefficients, and variable names from the ring.

use num_bigint::BigInt;
use num_rational::BigRational;

use crate::error::{Error, Result};
use crate::poly::Poly;
use crate::ring::PolyRing;

struct Parser<'a> {
    ring: &'a PolyRing,
    chars: Vec<char>,
    pos: usize,
    line: usize,
    col0: usize,
}

impl Parser<'_> {
    fn err<T>(&self, msg: impl Into<String>) -> Result<T> {
        Err(Error::Syntax { line: self.line, col: self.col0 + self.pos + 1, msg: msg.into() })
    }

    fn skip_ws(&mut self) {
        while self.pos < self.chars.len() && self.chars[self.pos].is_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<char> {
        self.skip_ws();
        self.chars.get(self.pos).copied()
    }

    fn expr(&mut self) -> Result<Poly> {
        let mut acc = if self.peek() == Some('-') {
            self.pos += 1;
            self.term()?.neg()
        } else {
            if self.peek() == Some('+') {
                self.pos += 1;
            }
            self.term()?
        };
        loop {
            match self.peek() {
                Some('+') => {
                    self.pos += 1;
                    acc = acc.add(&self.term()?);
                }
                Some('-') => {
                    self.pos += 1;
                    acc = acc.sub(&self.term()?);
                }
                _ => return Ok(acc),
            }
        }
    }

    fn term(&mut self) -> Result<Poly> {
        let mut acc = self.factor()?;
        loop {
            match self.peek() {
                Some('*') => {
                    self.pos += 1;
                    acc = acc.mul(&self.factor()?);
                }
                Some(c) if c == '(' || c.is_alphanumeric() || c == '_' => {
                    acc = acc.mul(&self.factor()?);
                }
                _ => return Ok(acc),
            }
        }
    }

    fn factor(&mut self) -> Result<Poly> {
        let base = self.base()?;
        if self.peek() == Some('^') {
            self.pos += 1;
            self.skip_ws();
            let start = self.pos;
            while self.pos < self.chars.len() && self.chars[self.pos].is_ascii_digit() {
                self.pos += 1;
            }
            if start == self.pos {
                return self.err("expected exponent");
            }
            let s: String = self.chars[start..self.pos].iter().collect();
            let e: u32 = match s.parse() {
                Ok(e) => e,
                Err(_) => return self.err("exponent too large"),
            };
            return Ok(base.pow(e));
        }
        Ok(base)
    }

    fn integer(&mut self) -> BigInt {
        let start = self.pos;
        while self.pos < self.chars.len() && self.chars[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        let s: String = self.chars[start..self.pos].iter().collect();
        s.parse().expect("digits")
    }

    fn base(&mut self) -> Result<Poly> {
        let field = self.ring.field;
        let n = self.ring.nvars();
        match self.peek() {
            Some('(') => {
                self.pos += 1;
                let e = self.expr()?;
                if self.peek() != Some(')') {
                    return self.err("expected ')'");
                }
                self.pos += 1;
                Ok(e)
            }
            Some('-') => {
                self.pos += 1;
                Ok(self.factor()?.neg())
            }
            Some(c) if c.is_ascii_digit() => {
                let num = self.integer();
                let mut den = BigInt::from(1);
                if self.peek() == Some('/') {
                    self.pos += 1;
                    self.skip_ws();
                    if !self.chars.get(self.pos).is_some_and(|c| c.is_ascii_digit()) {
                        return self.err("expected denominator");
                    }
                    den = self.integer();
                    if den == BigInt::from(0) {
                        return self.err("zero denominator");
                    }
                }
                let r = BigRational::new(num, den);
                if field.characteristic() != 0 && r.denom() % BigInt::from(field.characteristic()) == BigInt::from(0) {
                    return self.err("denominator divisible by the characteristic");
                }
                Ok(Poly::constant(field, n, field.reduce(r)))
            }
            Some(c) if c.is_alphabetic() || c == '_' => {
                let start = self.pos;
                while self.pos < self.chars.len() && (self.chars[self.pos].is_alphanumeric() || self.chars[self.pos] == '_') {
                    self.pos += 1;
                }
                let name: String = self.chars[start..self.pos].iter().collect();
                match self.ring.var_index(&name) {
                    Some(i) => Ok(self.ring.var(i)),
                    None => {
                        self.pos = start;
                        self.err(format!("unknown variable '{}'", name))
                    }
                }
            }
            Some(c) => self.err(format!("unexpected '{}'", c)),
            None => self.err("unexpected end of expression"),
        }
    }
}

/// Parses a polynomial, reporting errors at `line` and column offset `col0`.
pub fn parse_poly_at(ring: &PolyRing, text: &str, line: usize, col0: usize) -> Result<Poly> {
    let mut p = Parser { ring, chars: text.chars().collect(), pos: 0, line, col0 };
    let e = p.expr()?;
    if p.peek().is_some() {
        return p.err("trailing input");
    }
    Ok(e)
}

pub fn parse_poly(ring: &PolyRing, text: &str) -> Result<Poly> {
    parse_poly_at(ring, text, 1, 0)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::Field;
    use crate::order::MonomialOrder;

    #[test]
    fn round_trip() {
        let r = PolyRing::new(Field::rationals(), &["x", "t"]);
        let f = parse_poly(&r, "t^2 - t - x").unwrap();
        assert_eq!(f.to_text(&r.names, &MonomialOrder::Grevlex), "t^2 - x - t");
        let g = parse_poly(&r, "-(x+1/2)*2x").unwrap();
        assert_eq!(g, parse_poly(&r, "-2*x^2 - x").unwrap());
    }

    #[test]
    fn errors_have_positions() {
        let r = PolyRing::new(Field::rationals(), &["x"]);
        assert_eq!(
            parse_poly(&r, "x + z").unwrap_err(),
            Error::Syntax { line: 1, col: 5, msg: "unknown variable 'z'".into() }
        );
        assert!(parse_poly(&r, "x +").is_err());
        let f5 = PolyRing::new(Field::prime(5).unwrap(), &["x"]);
        assert!(parse_poly(&f5, "1/5").is_err());
        assert_eq!(parse_poly(&f5, "7x").unwrap(), parse_poly(&f5, "2*x").unwrap());
    }
}
