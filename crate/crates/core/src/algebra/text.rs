//! Canonical text form and a small expression parser.
//!
//! Terms print in descending monomial order, e.g. `-2/3*Λ1*Λ2^-1*q^2 + 1`.
//! The parser also accepts `L` for `Λ`, parentheses, `/` and integer powers.

use alloc::string::String;
use alloc::vec::Vec;
use core::fmt::{self, Write};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed};

use super::poly::{MPoly, Monomial};
use super::ratfunc::RatFunc;
use crate::error::{Error, Result};

fn write_monomial(f: &mut impl Write, m: &Monomial) -> fmt::Result {
    let mut first = true;
    let mut factor = |f: &mut dyn Write, name: &str, idx: Option<usize>, e: i32| -> fmt::Result {
        if !first {
            f.write_char('*')?;
        }
        first = false;
        f.write_str(name)?;
        if let Some(i) = idx {
            write!(f, "{}", i)?;
        }
        if e != 1 {
            write!(f, "^{}", e)?;
        }
        Ok(())
    };
    for (i, &e) in m.exponents().iter().enumerate().skip(1) {
        if e != 0 {
            factor(f, "Λ", Some(i), e)?;
        }
    }
    if m.exp(0) != 0 {
        factor(f, "q", None, m.exp(0))?;
    }
    Ok(())
}

fn write_rational(f: &mut impl Write, c: &BigRational) -> fmt::Result {
    if c.denom().is_one() {
        write!(f, "{}", c.numer())
    } else {
        write!(f, "{}/{}", c.numer(), c.denom())
    }
}

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_one() {
            f.write_str("1")
        } else {
            write_monomial(f, self)
        }
    }
}

impl fmt::Display for MPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        for (k, (m, c)) in self.terms().rev().enumerate() {
            let neg = c.is_negative();
            match (k, neg) {
                (0, true) => f.write_char('-')?,
                (0, false) => {}
                (_, true) => f.write_str(" - ")?,
                (_, false) => f.write_str(" + ")?,
            }
            let a = c.abs();
            if m.is_one() {
                write_rational(f, &a)?;
            } else {
                if !a.is_one() {
                    write_rational(f, &a)?;
                    f.write_char('*')?;
                }
                write_monomial(f, m)?;
            }
        }
        Ok(())
    }
}

struct Parser<'a> {
    chars: Vec<char>,
    pos: usize,
    src: &'a str,
}

impl<'a> Parser<'a> {
    fn new(src: &'a str) -> Self {
        Parser {
            chars: src.chars().collect(),
            pos: 0,
            src,
        }
    }

    fn err(&self, what: &str) -> Error {
        Error::Parse(alloc::format!("{} at offset {} in {:?}", what, self.pos, self.src))
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

    fn digits(&mut self) -> String {
        let mut s = String::new();
        while let Some(&c) = self.chars.get(self.pos) {
            if c.is_ascii_digit() {
                s.push(c);
                self.pos += 1;
            } else {
                break;
            }
        }
        s
    }

    fn expr(&mut self) -> Result<RatFunc> {
        let mut acc = self.term()?;
        loop {
            match self.peek() {
                Some('+') => {
                    self.pos += 1;
                    acc = &acc + &self.term()?;
                }
                Some('-') => {
                    self.pos += 1;
                    acc = &acc - &self.term()?;
                }
                _ => return Ok(acc),
            }
        }
    }

    fn term(&mut self) -> Result<RatFunc> {
        let mut acc = self.unary()?;
        loop {
            match self.peek() {
                Some('*') => {
                    self.pos += 1;
                    acc = &acc * &self.unary()?;
                }
                Some('/') => {
                    self.pos += 1;
                    let d = self.unary()?;
                    acc = acc.checked_div(&d).map_err(|_| self.err("division by zero"))?;
                }
                _ => return Ok(acc),
            }
        }
    }

    fn unary(&mut self) -> Result<RatFunc> {
        match self.peek() {
            Some('-') => {
                self.pos += 1;
                Ok(-self.unary()?)
            }
            Some('+') => {
                self.pos += 1;
                self.unary()
            }
            _ => self.power(),
        }
    }

    fn power(&mut self) -> Result<RatFunc> {
        let base = self.atom()?;
        if self.peek() == Some('^') {
            self.pos += 1;
            let neg = match self.peek() {
                Some('-') => {
                    self.pos += 1;
                    true
                }
                Some('+') => {
                    self.pos += 1;
                    false
                }
                _ => false,
            };
            self.skip_ws();
            let ds = self.digits();
            let e: i32 = ds.parse().map_err(|_| self.err("expected exponent"))?;
            let e = if neg { -e } else { e };
            return base.pow(e).map_err(|_| self.err("zero to a negative power"));
        }
        Ok(base)
    }

    fn atom(&mut self) -> Result<RatFunc> {
        match self.peek() {
            Some('(') => {
                self.pos += 1;
                let v = self.expr()?;
                if self.peek() != Some(')') {
                    return Err(self.err("expected ')'"));
                }
                self.pos += 1;
                Ok(v)
            }
            Some('q') => {
                self.pos += 1;
                Ok(RatFunc::q_pow(1))
            }
            Some('Λ') | Some('L') => {
                self.pos += 1;
                if self.chars.get(self.pos) == Some(&'_') {
                    self.pos += 1;
                }
                let ds = self.digits();
                let i: usize = ds.parse().map_err(|_| self.err("expected variable index"))?;
                if i == 0 {
                    return Err(self.err("Λ0 is not an independent variable"));
                }
                Ok(RatFunc::monomial(Monomial::lambda(i, 1)))
            }
            Some(c) if c.is_ascii_digit() => {
                let ds = self.digits();
                let n: BigInt = ds.parse().map_err(|_| self.err("bad integer"))?;
                Ok(RatFunc::from(n))
            }
            _ => Err(self.err("unexpected token")),
        }
    }
}

/// Parses any rational expression in `q` and the `Λ_i`.
pub fn parse_ratfunc(s: &str) -> Result<RatFunc> {
    let mut p = Parser::new(s);
    let v = p.expr()?;
    if p.peek().is_some() {
        return Err(p.err("trailing input"));
    }
    Ok(v)
}

/// Parses a Laurent polynomial; fails if the expression has a denominator.
pub fn parse_poly(s: &str) -> Result<MPoly> {
    let v = parse_ratfunc(s)?;
    match v.as_poly() {
        Some(p) => Ok(p.clone()),
        None => Err(Error::Parse(alloc::format!("not a Laurent polynomial: {:?}", s))),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::string::ToString;

    #[test]
    fn prints_in_descending_order() {
        let p = parse_poly("1 - q + 2/3*Λ1^2*Λ2^-1*q^3").unwrap();
        assert_eq!(p.to_string(), "2/3*Λ1^2*Λ2^-1*q^3 - q + 1");
    }

    #[test]
    fn round_trip() {
        for s in ["0", "1", "-q", "Λ1*Λ2 - 7/5", "(1 + q)/(1 - Λ1^-1*q^2)"] {
            let v = parse_ratfunc(s).unwrap();
            assert_eq!(parse_ratfunc(&v.to_string()).unwrap(), v);
        }
    }

    #[test]
    fn ascii_lambda_alias() {
        assert_eq!(parse_poly("L_1 + L2").unwrap(), parse_poly("Λ1 + Λ2").unwrap());
    }

    #[test]
    fn rejects_garbage() {
        assert!(parse_ratfunc("q +").is_err());
        assert!(parse_ratfunc("x").is_err());
        assert!(parse_ratfunc("1/(q-q)").is_err());
        assert!(parse_poly("1/(1-q)").is_err());
        assert!(parse_ratfunc("Λ0").is_err());
    }
}
