//! Expression syntax for algebraic reals:
//!
//! ```text
//! expr   := term (('+' | '-') term)*
//! term   := factor (('*' | '/') factor)*
//! factor := number | 'sqrt' '(' expr ')' | 'root' '(' poly ';' number ',' number ')'
//!         | '(' expr ')' | '-' factor
//! number := int ['/' int] | decimal
//! ```
//!
//! Polynomials inside `root(...)` are written in `x`, e.g. `x^3 - 2` or `2*x^2-1`.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use super::{AlgebraicReal, NumError, ZPoly};

pub fn parse_algebraic(expr: &str) -> Result<AlgebraicReal, NumError> {
    let mut p = Parser {
        s: expr.as_bytes(),
        pos: 0,
    };
    let v = p.expr()?;
    p.skip_ws();
    if p.pos != p.s.len() {
        return Err(p.err("unexpected trailing input"));
    }
    Ok(v)
}

/// Parse a polynomial in `x` with integer coefficients.
pub fn parse_poly(s: &str) -> Result<ZPoly, NumError> {
    let mut p = Parser {
        s: s.as_bytes(),
        pos: 0,
    };
    let poly = p.poly()?;
    p.skip_ws();
    if p.pos != p.s.len() {
        return Err(p.err("unexpected trailing input"));
    }
    Ok(poly)
}

/// Parse `p`, `p/q`, or a decimal literal, with optional sign.
pub fn parse_rational(s: &str) -> Result<BigRational, NumError> {
    let mut p = Parser {
        s: s.as_bytes(),
        pos: 0,
    };
    p.skip_ws();
    let neg = p.eat(b'-');
    let r = p.number()?;
    p.skip_ws();
    if p.pos != p.s.len() {
        return Err(p.err("unexpected trailing input"));
    }
    Ok(if neg { -r } else { r })
}

struct Parser<'a> {
    s: &'a [u8],
    pos: usize,
}

impl Parser<'_> {
    fn err(&self, msg: &str) -> NumError {
        NumError::Syntax {
            pos: self.pos,
            msg: msg.to_string(),
        }
    }

    fn skip_ws(&mut self) {
        while self.pos < self.s.len() && self.s[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.s.get(self.pos).copied()
    }

    fn eat(&mut self, c: u8) -> bool {
        if self.peek() == Some(c) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expect(&mut self, c: u8) -> Result<(), NumError> {
        if self.eat(c) {
            Ok(())
        } else {
            Err(self.err(&format!("expected '{}'", c as char)))
        }
    }

    fn keyword(&mut self, kw: &str) -> bool {
        self.skip_ws();
        if self.s[self.pos..].starts_with(kw.as_bytes()) {
            self.pos += kw.len();
            true
        } else {
            false
        }
    }

    fn expr(&mut self) -> Result<AlgebraicReal, NumError> {
        let mut acc = self.term()?;
        loop {
            if self.eat(b'+') {
                acc = acc.add(&self.term()?);
            } else if self.eat(b'-') {
                acc = acc.sub(&self.term()?);
            } else {
                return Ok(acc);
            }
        }
    }

    fn term(&mut self) -> Result<AlgebraicReal, NumError> {
        let mut acc = self.factor()?;
        loop {
            if self.eat(b'*') {
                acc = acc.mul(&self.factor()?);
            } else if self.eat(b'/') {
                acc = acc.div(&self.factor()?)?;
            } else {
                return Ok(acc);
            }
        }
    }

    fn factor(&mut self) -> Result<AlgebraicReal, NumError> {
        match self.peek() {
            Some(b'-') => {
                self.pos += 1;
                Ok(self.factor()?.neg())
            }
            Some(b'(') => {
                self.pos += 1;
                let v = self.expr()?;
                self.expect(b')')?;
                Ok(v)
            }
            Some(c) if c.is_ascii_digit() || c == b'.' => {
                let v = self.unsigned()?;
                Ok(AlgebraicReal::from_rational(&v))
            }
            Some(_) if self.keyword("sqrt") => {
                self.expect(b'(')?;
                let v = self.expr()?;
                self.expect(b')')?;
                v.sqrt()
            }
            Some(_) if self.keyword("root") => {
                self.expect(b'(')?;
                let poly = self.poly()?;
                self.expect(b';')?;
                let lo = self.signed()?;
                self.expect(b',')?;
                let hi = self.signed()?;
                self.expect(b')')?;
                AlgebraicReal::from_root(&poly, &lo, &hi)
            }
            Some(_) => Err(self.err("unexpected character")),
            None => Err(self.err("unexpected end of input")),
        }
    }

    fn signed(&mut self) -> Result<BigRational, NumError> {
        let neg = self.eat(b'-');
        let v = self.number()?;
        Ok(if neg { -v } else { v })
    }

    /// `int ['/' int]` or a decimal; used where a full rational is allowed.
    fn number(&mut self) -> Result<BigRational, NumError> {
        let n = self.unsigned()?;
        if n.is_integer() && self.eat(b'/') {
            let d = self.unsigned()?;
            if !d.is_integer() {
                return Err(self.err("denominator must be an integer"));
            }
            if d.is_zero() {
                return Err(NumError::DivisionByZero);
            }
            return Ok(n / d);
        }
        Ok(n)
    }

    /// Integer or decimal literal without sign.
    fn unsigned(&mut self) -> Result<BigRational, NumError> {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.s.len() && self.s[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        let int_part = &self.s[start..self.pos];
        let mut frac: &[u8] = &[];
        if self.pos < self.s.len() && self.s[self.pos] == b'.' {
            self.pos += 1;
            let fs = self.pos;
            while self.pos < self.s.len() && self.s[self.pos].is_ascii_digit() {
                self.pos += 1;
            }
            frac = &self.s[fs..self.pos];
        }
        if int_part.is_empty() && frac.is_empty() {
            self.pos = start;
            return Err(self.err("expected a number"));
        }
        let digits: Vec<u8> = int_part.iter().chain(frac).copied().collect();
        let num = BigInt::parse_bytes(&digits, 10).unwrap_or_else(BigInt::zero);
        let den = BigInt::from(10).pow(frac.len() as u32);
        Ok(BigRational::new(num, den))
    }

    fn poly(&mut self) -> Result<ZPoly, NumError> {
        let mut acc = ZPoly::zero();
        let mut first = true;
        loop {
            let neg = if self.eat(b'-') {
                true
            } else if self.eat(b'+') || first {
                false
            } else {
                return Ok(acc);
            };
            first = false;
            let mono = self.monomial()?;
            acc = if neg { acc.sub(&mono) } else { acc.add(&mono) };
        }
    }

    fn monomial(&mut self) -> Result<ZPoly, NumError> {
        let coeff = match self.peek() {
            Some(c) if c.is_ascii_digit() => {
                let v = self.unsigned()?;
                if !v.is_integer() {
                    return Err(self.err("polynomial coefficients must be integers"));
                }
                self.eat(b'*');
                Some(v.to_integer())
            }
            _ => None,
        };
        let has_x = self.eat(b'x');
        if coeff.is_none() && !has_x {
            return Err(self.err("expected a polynomial term"));
        }
        let mut exp = usize::from(has_x);
        if has_x && self.eat(b'^') {
            let e = self.unsigned()?;
            if !e.is_integer() {
                return Err(self.err("exponent must be an integer"));
            }
            exp = e
                .to_integer()
                .try_into()
                .map_err(|_| self.err("exponent too large"))?;
        }
        let mut coeffs = vec![BigInt::zero(); exp + 1];
        coeffs[exp] = coeff.unwrap_or_else(BigInt::one);
        Ok(ZPoly::new(coeffs))
    }
}
