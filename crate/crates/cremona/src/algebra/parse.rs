//! A small recursive-descent parser for polynomial and rational-function text.
//!
//! Grammar: `expr := term (('+'|'-') term)*`, `term := factor (('*'|'/') factor)*`,
//! `factor := ('-' factor) | atom ('^' int)?`, `atom := number | name | '(' expr ')'`.
//! Names are ring variables or field generator names.

use num_bigint::BigInt;

use super::field::{Elem, Field};
use super::poly::{Poly, Ring};
use super::ratfun::RatFun;
use super::scalar::Scalar;
use crate::error::{Error, Result};

struct Parser<'a> {
    src: &'a str,
    pos: usize,
    ring: &'a Ring<Elem>,
}

impl<'a> Parser<'a> {
    fn err(&self, msg: impl Into<String>) -> Error {
        Error::parse(format!("expression '{}'", self.src), format!("{} at offset {}", msg.into(), self.pos))
    }

    fn skip_ws(&mut self) {
        while self.src[self.pos..].starts_with(char::is_whitespace) {
            self.pos += self.src[self.pos..].chars().next().unwrap().len_utf8();
        }
    }

    fn peek(&mut self) -> Option<char> {
        self.skip_ws();
        self.src[self.pos..].chars().next()
    }

    fn bump(&mut self) {
        self.pos += self.src[self.pos..].chars().next().map_or(0, char::len_utf8);
    }

    fn expr(&mut self) -> Result<RatFun<Elem>> {
        let mut acc = self.term()?;
        while let Some(c) = self.peek() {
            match c {
                '+' => {
                    self.bump();
                    acc = acc.add(&self.term()?);
                }
                '-' => {
                    self.bump();
                    acc = acc.sub(&self.term()?);
                }
                _ => break,
            }
        }
        Ok(acc)
    }

    fn term(&mut self) -> Result<RatFun<Elem>> {
        let mut acc = self.factor()?;
        while let Some(c) = self.peek() {
            match c {
                '*' => {
                    self.bump();
                    acc = acc.mul(&self.factor()?);
                }
                '/' => {
                    self.bump();
                    let d = self.factor()?;
                    acc = acc.div(&d).ok_or_else(|| self.err("division by zero"))?;
                }
                _ => break,
            }
        }
        Ok(acc)
    }

    fn factor(&mut self) -> Result<RatFun<Elem>> {
        if self.peek() == Some('-') {
            self.bump();
            return Ok(self.factor()?.neg());
        }
        let base = self.atom()?;
        if self.peek() == Some('^') {
            self.bump();
            self.skip_ws();
            let start = self.pos;
            if self.peek() == Some('-') {
                self.bump();
            }
            while self.src[self.pos..].starts_with(|c: char| c.is_ascii_digit()) {
                self.bump();
            }
            let e: i64 = self.src[start..self.pos].parse().map_err(|_| self.err("expected an integer exponent"))?;
            return base.powi(e).ok_or_else(|| self.err("negative power of zero"));
        }
        Ok(base)
    }

    fn atom(&mut self) -> Result<RatFun<Elem>> {
        match self.peek() {
            Some('(') => {
                self.bump();
                let e = self.expr()?;
                if self.peek() != Some(')') {
                    return Err(self.err("expected ')'"));
                }
                self.bump();
                Ok(e)
            }
            Some(c) if c.is_ascii_digit() => {
                let start = self.pos;
                while self.src[self.pos..].starts_with(|c: char| c.is_ascii_digit()) {
                    self.bump();
                }
                let n: BigInt = self.src[start..self.pos].parse().map_err(|_| self.err("bad number"))?;
                let f = self.ring.base();
                Ok(self.ring.rf_const(f.from_coef(f.prime().from_bigint(&n))))
            }
            Some(c) if c.is_alphabetic() || c == '_' => {
                let start = self.pos;
                while self.src[self.pos..].starts_with(|c: char| c.is_alphanumeric() || c == '_' || c == '\'') {
                    self.bump();
                }
                let name = &self.src[start..self.pos];
                if let Some(i) = self.ring.names().iter().position(|n| n == name) {
                    return Ok(self.ring.rf_var(i));
                }
                let f = self.ring.base();
                if let Some(i) = f.names().iter().position(|n| n == name) {
                    return Ok(self.ring.rf_const(f.gen(i)));
                }
                Err(self.err(format!("unknown name '{name}'")))
            }
            Some(c) => Err(self.err(format!("unexpected '{c}'"))),
            None => Err(self.err("unexpected end of input")),
        }
    }
}

/// Parses a rational function in the variables of `ring`.
pub fn parse_ratfun(ring: &Ring<Elem>, src: &str) -> Result<RatFun<Elem>> {
    let mut p = Parser { src, pos: 0, ring };
    let v = p.expr()?;
    if p.peek().is_some() {
        return Err(p.err("trailing input"));
    }
    Ok(v)
}

/// Parses a polynomial; division is allowed only by nonzero constants.
pub fn parse_poly(ring: &Ring<Elem>, src: &str) -> Result<Poly<Elem>> {
    let r = parse_ratfun(ring, src)?;
    r.as_poly().cloned().ok_or_else(|| Error::parse(format!("polynomial '{src}'"), "the expression has a non-constant denominator"))
}

/// Parses a field element written in the generator names of `field`, e.g. `"1 + 2*r1"`.
pub fn parse_elem(field: &Field, src: &str) -> Result<Elem> {
    let ring = Ring::new(field.clone(), &[]);
    parse_poly(&ring, src)?.as_constant().ok_or_else(|| Error::parse("field element", src.to_string()))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_and_prints() {
        let q = Field::rationals();
        let r = Ring::new(q.clone(), &["x0", "x1", "x2"]);
        let p = parse_poly(&r, "x0^2+3*x1*x2 - 1/2").unwrap();
        assert_eq!(p.to_string(), "x0^2 + 3*x1*x2 - 1/2");
        assert!(parse_poly(&r, "1/x0").is_err());
        assert!(parse_poly(&r, "x3").is_err());
        let f = parse_ratfun(&r, "(x0^2 - x1^2)/(x0 - x1)").unwrap();
        assert_eq!(f, RatFun::from_poly(parse_poly(&r, "x0+x1").unwrap()));
    }

    #[test]
    fn elements_by_generator_name() {
        let q = Field::rationals();
        let k = q.extend(&[q.one(), q.zero(), q.one()]).unwrap().with_names(&["i"]);
        let x = parse_elem(&k, "(1+i)^2").unwrap();
        assert_eq!(x, k.gen(0).add(&k.gen(0)));
    }
}
