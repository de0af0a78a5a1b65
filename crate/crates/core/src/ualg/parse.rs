//! Text syntax for algebra elements.
//!
//! ```text
//! element := ['-'] term (('+' | '-') term)*
//! term    := factor ((['*'] | '/') factor)*
//! factor  := generator | int | 'q' ['^' exponent] | '[' int ']' | '(' element ')'
//! exponent:= ['-'] int ['/' int] | '(' ['-'] int ['/' int] ')'
//! generator: K1 K1' K2 K2' E1 E2 F1 F2 H H'
//! ```
//!
//! Juxtaposition is multiplication, `[n]` is the q-integer, `q^e` requires
//! `12e` to be an integer, and a divisor must be a scalar.

use std::iter::Peekable;
use std::str::Chars;

use num_rational::Rational64;
use thiserror::Error;

use super::AlgebraElement;
use crate::irreps::GeneratorName;
use crate::qarith::{LaurentScalar, QRatio};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ParseError {
    #[error("unexpected {found} at offset {pos}")]
    Unexpected { found: String, pos: usize },
    #[error("unknown generator {0:?}")]
    UnknownGenerator(String),
    #[error("exponent {0} is not a multiple of 1/12")]
    BadExponent(String),
    #[error("division by zero")]
    DivisionByZero,
    #[error("divisor {0} is not a scalar")]
    NonScalarDivisor(String),
}

struct Parser<'a> {
    chars: Peekable<Chars<'a>>,
    pos: usize,
}

impl<'a> Parser<'a> {
    fn skip_ws(&mut self) {
        while matches!(self.chars.peek(), Some(c) if c.is_whitespace()) {
            self.bump();
        }
    }

    fn peek(&mut self) -> Option<char> {
        self.skip_ws();
        self.chars.peek().copied()
    }

    fn bump(&mut self) -> Option<char> {
        self.pos += 1;
        self.chars.next()
    }

    fn unexpected(&mut self) -> ParseError {
        let found = self
            .chars
            .peek()
            .map_or("end of input".to_string(), |c| format!("{c:?}"));
        ParseError::Unexpected {
            found,
            pos: self.pos,
        }
    }

    fn expect(&mut self, c: char) -> Result<(), ParseError> {
        if self.peek() == Some(c) {
            self.bump();
            Ok(())
        } else {
            Err(self.unexpected())
        }
    }

    fn int(&mut self) -> Result<i64, ParseError> {
        self.skip_ws();
        let mut s = String::new();
        while let Some(c) = self.chars.peek().copied().filter(char::is_ascii_digit) {
            s.push(c);
            self.bump();
        }
        s.parse().map_err(|_| self.unexpected())
    }

    fn rational(&mut self) -> Result<Rational64, ParseError> {
        let n = self.int()?;
        if self.peek() == Some('/') {
            self.bump();
            let d = self.int()?;
            if d == 0 {
                return Err(ParseError::DivisionByZero);
            }
            return Ok(Rational64::new(n, d));
        }
        Ok(Rational64::from_integer(n))
    }

    fn signed_rational(&mut self) -> Result<Rational64, ParseError> {
        let neg = self.peek() == Some('-');
        if neg {
            self.bump();
        }
        let r = self.rational()?;
        Ok(if neg { -r } else { r })
    }

    fn element(&mut self) -> Result<AlgebraElement, ParseError> {
        let mut sign = 1;
        if self.peek() == Some('-') {
            self.bump();
            sign = -1;
        }
        let mut acc = self.term()?.scale(&QRatio::from_integer(sign));
        loop {
            match self.peek() {
                Some('+') => {
                    self.bump();
                    acc = &acc + &self.term()?;
                }
                Some('-') => {
                    self.bump();
                    acc = &acc - &self.term()?;
                }
                _ => return Ok(acc),
            }
        }
    }

    fn term(&mut self) -> Result<AlgebraElement, ParseError> {
        let mut acc = self.factor()?;
        loop {
            match self.peek() {
                Some('*') => {
                    self.bump();
                    acc = &acc * &self.factor()?;
                }
                Some('/') => {
                    self.bump();
                    let d = self.factor()?;
                    acc = acc.scale(
                        &scalar_of(&d)?
                            .recip()
                            .map_err(|_| ParseError::DivisionByZero)?,
                    );
                }
                Some(c) if c == '(' || c == '[' || c.is_ascii_alphanumeric() => {
                    acc = &acc * &self.factor()?;
                }
                _ => return Ok(acc),
            }
        }
    }

    fn factor(&mut self) -> Result<AlgebraElement, ParseError> {
        match self.peek() {
            Some('(') => {
                self.bump();
                let e = self.element()?;
                self.expect(')')?;
                Ok(e)
            }
            Some('[') => {
                self.bump();
                let n = self.int()?;
                self.expect(']')?;
                Ok(AlgebraElement::scalar(QRatio::from(LaurentScalar::qint(n))))
            }
            Some(c) if c.is_ascii_digit() => {
                let n = self.int()?;
                Ok(AlgebraElement::scalar(QRatio::from_integer(n)))
            }
            Some('q') => {
                self.bump();
                if self.peek() != Some('^') {
                    return Ok(AlgebraElement::scalar(QRatio::from(LaurentScalar::q_pow(
                        1,
                    ))));
                }
                self.bump();
                let e = if self.peek() == Some('(') {
                    self.bump();
                    let e = self.signed_rational()?;
                    self.expect(')')?;
                    e
                } else {
                    self.signed_rational()?
                };
                let tw = e * Rational64::from_integer(12);
                if !tw.is_integer() {
                    return Err(ParseError::BadExponent(e.to_string()));
                }
                Ok(AlgebraElement::scalar(QRatio::from(
                    LaurentScalar::q_pow_twelfths(tw.to_integer() as i32),
                )))
            }
            Some(c) if c.is_ascii_alphabetic() => {
                let mut s = String::new();
                while let Some(c) = self
                    .chars
                    .peek()
                    .copied()
                    .filter(|c| c.is_ascii_alphanumeric())
                {
                    s.push(c);
                    self.bump();
                }
                if self.chars.peek() == Some(&'\'') {
                    s.push('\'');
                    self.bump();
                }
                s.parse::<GeneratorName>()
                    .map(AlgebraElement::generator)
                    .map_err(|_| ParseError::UnknownGenerator(s))
            }
            _ => Err(self.unexpected()),
        }
    }
}

fn scalar_of(e: &AlgebraElement) -> Result<QRatio, ParseError> {
    if e.is_zero() {
        return Err(ParseError::DivisionByZero);
    }
    match e.terms().collect::<Vec<_>>().as_slice() {
        [(w, c)] if w.is_unit() => Ok((*c).clone()),
        _ => Err(ParseError::NonScalarDivisor(e.to_string())),
    }
}

/// Parses an element in the grammar above.
pub fn parse_element(src: &str) -> Result<AlgebraElement, ParseError> {
    let mut p = Parser {
        chars: src.chars().peekable(),
        pos: 0,
    };
    let e = p.element()?;
    if p.peek().is_some() {
        return Err(p.unexpected());
    }
    Ok(e)
}
