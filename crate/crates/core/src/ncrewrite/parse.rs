//! Polynomials in the sphere generators.
//!
//! ```text
//! poly   := ['-'] term (('+' | '-') term)*
//! term   := factor (['*'] factor)*
//! factor := int ['/' int] | 'q' ['^' ['-'] int] | 'z'i ['*'] | 'p'ij | '(' poly ')' ['^' int]
//! ```
//!
//! `p_ij` expands to `z_i* z_j`.

use num_bigint::BigInt;
use num_rational::BigRational;
use thiserror::Error;

use super::relations::p;
use super::{Letter, NcPoly};
use crate::qarith::LaurentScalar;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum PolyParseError {
    #[error("unexpected {found} at offset {pos}")]
    Unexpected { found: String, pos: usize },
    #[error("unknown identifier {0:?}")]
    UnknownIdentifier(String),
    #[error("division by zero")]
    DivisionByZero,
}

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
}

impl Parser<'_> {
    fn peek(&mut self) -> Option<u8> {
        while self.src.get(self.pos).is_some_and(u8::is_ascii_whitespace) {
            self.pos += 1;
        }
        self.src.get(self.pos).copied()
    }

    fn unexpected(&mut self) -> PolyParseError {
        let found = self
            .peek()
            .map_or("end of input".into(), |c| format!("{:?}", c as char));
        PolyParseError::Unexpected {
            found,
            pos: self.pos,
        }
    }

    fn eat(&mut self, c: u8) -> bool {
        if self.peek() == Some(c) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn int(&mut self) -> Result<i64, PolyParseError> {
        self.peek();
        let start = self.pos;
        while self.src.get(self.pos).is_some_and(u8::is_ascii_digit) {
            self.pos += 1;
        }
        std::str::from_utf8(&self.src[start..self.pos])
            .ok()
            .and_then(|s| s.parse().ok())
            .ok_or_else(|| self.unexpected())
    }

    fn signed_int(&mut self) -> Result<i64, PolyParseError> {
        let neg = self.eat(b'-');
        Ok(if neg { -self.int()? } else { self.int()? })
    }

    fn poly(&mut self) -> Result<NcPoly, PolyParseError> {
        let neg = self.eat(b'-');
        let mut acc = self.term()?;
        if neg {
            acc = -&acc;
        }
        loop {
            if self.eat(b'+') {
                acc = &acc + &self.term()?;
            } else if self.eat(b'-') {
                acc = &acc - &self.term()?;
            } else {
                return Ok(acc);
            }
        }
    }

    fn term(&mut self) -> Result<NcPoly, PolyParseError> {
        let mut acc = self.factor()?;
        loop {
            match self.peek() {
                Some(b'*') => {
                    self.pos += 1;
                    acc = &acc * &self.factor()?;
                }
                Some(c) if c == b'(' || c.is_ascii_alphanumeric() => acc = &acc * &self.factor()?,
                _ => return Ok(acc),
            }
        }
    }

    fn factor(&mut self) -> Result<NcPoly, PolyParseError> {
        match self.peek() {
            Some(b'(') => {
                self.pos += 1;
                let e = self.poly()?;
                if !self.eat(b')') {
                    return Err(self.unexpected());
                }
                if self.eat(b'^') {
                    let n = self.int()?;
                    return Ok(e.pow(n as u32));
                }
                Ok(e)
            }
            Some(c) if c.is_ascii_digit() => {
                let n = self.int()?;
                let mut r = BigRational::from_integer(BigInt::from(n));
                if self.peek() == Some(b'/') {
                    self.pos += 1;
                    let d = self.int()?;
                    if d == 0 {
                        return Err(PolyParseError::DivisionByZero);
                    }
                    r /= BigRational::from_integer(BigInt::from(d));
                }
                Ok(NcPoly::scalar(LaurentScalar::from_rational(r)))
            }
            Some(b'q') => {
                self.pos += 1;
                let e = if self.eat(b'^') {
                    self.signed_int()?
                } else {
                    1
                };
                Ok(NcPoly::scalar(LaurentScalar::q_pow(e as i32)))
            }
            Some(c @ (b'z' | b'p')) => {
                self.pos += 1;
                let start = self.pos;
                while self.src.get(self.pos).is_some_and(u8::is_ascii_digit) {
                    self.pos += 1;
                }
                let digits: Vec<usize> = self.src[start..self.pos]
                    .iter()
                    .map(|d| (d - b'0') as usize)
                    .collect();
                let ident = || {
                    format!(
                        "{}{}",
                        c as char,
                        String::from_utf8_lossy(&self.src[start..self.pos])
                    )
                };
                let ok = |i: &usize| (1..=3).contains(i);
                match (c, digits.as_slice()) {
                    (b'z', [i]) if ok(i) => {
                        // a star directly after the index is an adjoint
                        if self.src.get(self.pos) == Some(&b'*') {
                            self.pos += 1;
                            Ok(NcPoly::letter(Letter::zs(*i)))
                        } else {
                            Ok(NcPoly::letter(Letter::z(*i)))
                        }
                    }
                    (b'p', [i, j]) if ok(i) && ok(j) => Ok(p(*i, *j)),
                    _ => Err(PolyParseError::UnknownIdentifier(ident())),
                }
            }
            _ => Err(self.unexpected()),
        }
    }
}

/// Parses a polynomial in the grammar above.
pub fn parse_poly(src: &str) -> Result<NcPoly, PolyParseError> {
    let mut p = Parser {
        src: src.as_bytes(),
        pos: 0,
    };
    let e = p.poly()?;
    if p.peek().is_some() {
        return Err(p.unexpected());
    }
    Ok(e)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ncrewrite::{normal_form, NcMonomial};

    #[test]
    fn parses_generators() {
        assert_eq!(parse_poly("z1*").unwrap(), NcPoly::letter(Letter::Z1S));
        assert_eq!(parse_poly("p23").unwrap(), p(2, 3));
        let a = parse_poly("z2 z1").unwrap();
        assert_eq!(
            a,
            NcPoly::monomial(NcMonomial(vec![Letter::Z2, Letter::Z1]))
        );
        // `z1* z2` is the product, `z1 * z2` too
        assert_eq!(parse_poly("z1 * z2").unwrap(), parse_poly("z1 z2").unwrap());
    }

    #[test]
    fn q_trace_text() {
        let f = parse_poly("q^4 p11 + q^2 p22 + p33 - 1").unwrap();
        assert!(normal_form(&f).unwrap().is_zero());
    }

    #[test]
    fn coefficients() {
        let f = parse_poly("1/2 (z1 + z2)^2 - q^-1 z1").unwrap();
        assert_eq!(f.num_terms(), 5);
        assert!(matches!(
            parse_poly("z4"),
            Err(PolyParseError::UnknownIdentifier(_))
        ));
        assert!(matches!(
            parse_poly("1/0"),
            Err(PolyParseError::DivisionByZero)
        ));
        assert!(parse_poly("(z1").is_err());
        assert!(parse_poly("z1 +").is_err());
    }
}
