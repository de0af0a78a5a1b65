//! Exact and floating q-arithmetic: q-numbers `[z]`, q-factorials and
//! q-binomials over the lattice `z ∈ (1/12)Z`.
//!
//! The exact side works with Laurent polynomials in `t = q^(1/12)`, which is
//! the smallest root of `q` making every weight exponent of the extended
//! algebra integral (halves for `K1`, quarters for `K2`, sixths for `H`).

mod laurent;
mod ratio;

use std::fmt;

use num_rational::Rational64;
use thiserror::Error;

pub use laurent::{LaurentScalar, TWELFTHS};
pub use ratio::QRatio;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum QArithError {
    #[error("{0} is not on the 1/12 lattice")]
    NotOnLattice(Rational64),
    #[error("q-factorial of negative integer {0}")]
    NegativeFactorial(i64),
    #[error("q-binomial [{n} choose {m}] out of range")]
    BinomialOutOfRange { n: i64, m: i64 },
    #[error("deformation parameter q = {0} must lie strictly inside (0, 1)")]
    InvalidQ(f64),
    #[error("division by zero")]
    DivisionByZero,
}

/// A validated numeric deformation parameter, `0 < q < 1`.
#[derive(Clone, Copy, Debug, PartialEq, PartialOrd)]
pub struct QValue(f64);

impl QValue {
    pub fn new(q: f64) -> Result<Self, QArithError> {
        if q.is_finite() && q > 0.0 && q < 1.0 {
            Ok(Self(q))
        } else {
            Err(QArithError::InvalidQ(q))
        }
    }

    pub fn get(self) -> f64 {
        self.0
    }

    /// `[z]` at this `q`.
    pub fn qnum(self, z: f64) -> f64 {
        qnum(z, self.0)
    }
}

impl fmt::Display for QValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// Exact (formal `t`, `t^12 = q`) or floating arithmetic.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum QParam {
    Exact,
    Float(QValue),
}

impl QParam {
    pub fn float(q: f64) -> Result<Self, QArithError> {
        QValue::new(q).map(QParam::Float)
    }
}

/// A coefficient-field value in one of the two modes.
#[derive(Clone, Debug, PartialEq)]
pub enum QScalar {
    Exact(QRatio),
    Float(f64),
}

impl QScalar {
    /// Numeric value; exact scalars are evaluated at `q`.
    pub fn eval(&self, q: f64) -> f64 {
        match self {
            QScalar::Exact(r) => r.eval(q),
            QScalar::Float(x) => *x,
        }
    }

    pub fn as_exact(&self) -> Option<&QRatio> {
        match self {
            QScalar::Exact(r) => Some(r),
            QScalar::Float(_) => None,
        }
    }

    pub fn as_float(&self) -> Option<f64> {
        match self {
            QScalar::Float(x) => Some(*x),
            QScalar::Exact(_) => None,
        }
    }
}

impl fmt::Display for QScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            QScalar::Exact(r) => write!(f, "{r}"),
            QScalar::Float(x) => write!(f, "{x}"),
        }
    }
}

/// `[x] = (q^x - q^-x) / (q - q^-1)` for real `x`.
pub fn qnum(x: f64, q: f64) -> f64 {
    if x == 0.0 {
        return 0.0;
    }
    (q.powf(x) - q.powf(-x)) / (q - 1.0 / q)
}

/// `[n]!` in floating point; `[0]! = 1`.
pub fn qfact_f64(n: u32, q: f64) -> f64 {
    (1..=n).map(|k| qnum(f64::from(k), q)).product()
}

/// `[n choose m]` in floating point. Zero outside `0 <= m <= n`.
pub fn qbinom_f64(n: i64, m: i64, q: f64) -> f64 {
    if m < 0 || m > n {
        return 0.0;
    }
    qfact_f64(n as u32, q) / (qfact_f64(m as u32, q) * qfact_f64((n - m) as u32, q))
}

fn twelfths(z: Rational64) -> Result<i32, QArithError> {
    let scaled = z * Rational64::from_integer(i64::from(TWELFTHS));
    if !scaled.is_integer() {
        return Err(QArithError::NotOnLattice(z));
    }
    i32::try_from(scaled.to_integer()).map_err(|_| QArithError::NotOnLattice(z))
}

/// Exact `[z]` for `z` on the 1/12 lattice, as a ratio in `t`.
pub fn qint_exact(z: Rational64) -> Result<QRatio, QArithError> {
    let e = twelfths(z)?;
    if z.is_integer() {
        return Ok(QRatio::from(LaurentScalar::qint(z.to_integer())));
    }
    let num = &LaurentScalar::q_pow_twelfths(e) - &LaurentScalar::q_pow_twelfths(-e);
    let den = &LaurentScalar::q_pow(1) - &LaurentScalar::q_pow(-1);
    QRatio::new(num, den)
}

/// The q-analogue `[z]` of a lattice point `z`.
pub fn qint(z: Rational64, p: &QParam) -> Result<QScalar, QArithError> {
    match p {
        QParam::Exact => qint_exact(z).map(QScalar::Exact),
        QParam::Float(q) => {
            twelfths(z)?;
            Ok(QScalar::Float(qnum(
                *z.numer() as f64 / *z.denom() as f64,
                q.get(),
            )))
        }
    }
}

/// Exact `[n]!` as a Laurent scalar.
pub fn qfact_exact(n: i64) -> Result<LaurentScalar, QArithError> {
    if n < 0 {
        return Err(QArithError::NegativeFactorial(n));
    }
    Ok((1..=n).fold(LaurentScalar::one(), |acc, k| {
        &acc * &LaurentScalar::qint(k)
    }))
}

/// `[n]! = [n][n-1]...[1]`, with `[0]! = 1`.
pub fn qfact(n: i64, p: &QParam) -> Result<QScalar, QArithError> {
    match p {
        QParam::Exact => qfact_exact(n).map(|l| QScalar::Exact(QRatio::from(l))),
        QParam::Float(q) => {
            if n < 0 {
                return Err(QArithError::NegativeFactorial(n));
            }
            Ok(QScalar::Float(qfact_f64(n as u32, q.get())))
        }
    }
}

/// Exact q-binomial; always a Laurent polynomial.
pub fn qbinom_exact(n: i64, m: i64) -> Result<LaurentScalar, QArithError> {
    if m < 0 || m > n {
        return Err(QArithError::BinomialOutOfRange { n, m });
    }
    let num = qfact_exact(n)?;
    let den = &qfact_exact(m)? * &qfact_exact(n - m)?;
    Ok(num
        .checked_div(&den)
        .expect("q-binomials are Laurent polynomials"))
}

/// `[n]! / ([m]! [n-m]!)` for `0 <= m <= n`.
pub fn qbinom(n: i64, m: i64, p: &QParam) -> Result<QScalar, QArithError> {
    match p {
        QParam::Exact => qbinom_exact(n, m).map(|l| QScalar::Exact(QRatio::from(l))),
        QParam::Float(q) => {
            if m < 0 || m > n {
                return Err(QArithError::BinomialOutOfRange { n, m });
            }
            Ok(QScalar::Float(qbinom_f64(n, m, q.get())))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r(n: i64, d: i64) -> Rational64 {
        Rational64::new(n, d)
    }

    fn half() -> QParam {
        QParam::float(0.5).unwrap()
    }

    #[test]
    fn qint_examples() {
        for p in [QParam::Exact, half()] {
            assert!((qint(r(1, 1), &p).unwrap().eval(0.7) - 1.0).abs() < 1e-15);
            assert_eq!(qint(r(0, 1), &p).unwrap().eval(0.7), 0.0);
        }
        assert!((qint(r(2, 1), &half()).unwrap().eval(0.5) - 2.5).abs() < 1e-14);
    }

    #[test]
    fn qint_rejects_off_lattice() {
        assert_eq!(
            qint(r(1, 5), &QParam::Exact),
            Err(QArithError::NotOnLattice(r(1, 5)))
        );
        assert!(qint(r(1, 24), &half()).is_err());
        assert!(qint(r(1, 3), &half()).is_ok());
    }

    #[test]
    fn qint_is_odd() {
        for twelfth in -30..=30 {
            let z = r(twelfth, 12);
            let a = qint_exact(z).unwrap();
            let b = qint_exact(-z).unwrap();
            assert_eq!(a, -b);
        }
    }

    #[test]
    fn exact_and_float_agree() {
        for q in [0.3, 0.5, 0.9] {
            let p = QParam::float(q).unwrap();
            for twelfth in -40..=40 {
                let z = r(twelfth, 12);
                let exact = qint_exact(z).unwrap().eval(q);
                let float = qint(z, &p).unwrap().eval(q);
                let scale = exact.abs().max(1e-300);
                assert!((exact - float).abs() / scale < 1e-12, "z={z} q={q}");
            }
        }
    }

    #[test]
    fn qfact_examples() {
        assert_eq!(qfact_exact(0).unwrap(), LaurentScalar::one());
        assert_eq!(qfact_exact(1).unwrap(), LaurentScalar::one());
        assert!((qfact(3, &half()).unwrap().eval(0.5) - 13.125).abs() < 1e-12);
        assert_eq!(qfact(-1, &half()), Err(QArithError::NegativeFactorial(-1)));
    }

    #[test]
    fn qbinom_examples() {
        for n in 0..6 {
            assert_eq!(qbinom_exact(n, 0).unwrap(), LaurentScalar::one());
        }
        assert!((qbinom(2, 1, &half()).unwrap().eval(0.5) - 2.5).abs() < 1e-14);
        assert!((qbinom_exact(4, 2).unwrap().eval(1.0) - 6.0).abs() < 1e-12);
        assert!(qbinom(2, 3, &half()).is_err());
        for n in 0..9 {
            for m in 0..=n {
                assert_eq!(qbinom_exact(n, m).unwrap(), qbinom_exact(n, n - m).unwrap());
            }
        }
    }

    #[test]
    fn square_identity_exact() {
        // [n+1]^2 - 1 = [n][n+2]
        for n in 0..=8 {
            let lhs = &LaurentScalar::qint(n + 1).pow(2) - &LaurentScalar::one();
            let rhs = &LaurentScalar::qint(n) * &LaurentScalar::qint(n + 2);
            assert_eq!(lhs, rhs, "n={n}");
        }
    }

    #[test]
    fn thirds_are_not_laurent() {
        let third = qint_exact(r(1, 3)).unwrap();
        assert!(third.as_laurent().is_none());
        assert!((third.eval(0.5) - qnum(1.0 / 3.0, 0.5)).abs() < 1e-14);
    }

    #[test]
    fn qvalue_validation() {
        assert!(QValue::new(0.0).is_err());
        assert!(QValue::new(1.0).is_err());
        assert!(QValue::new(f64::NAN).is_err());
        assert!(QValue::new(0.999).is_ok());
    }
}
