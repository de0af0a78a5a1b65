//! Quotients of Laurent scalars.
//!
//! Coefficients such as `2/[2]` or `(q - q^-1)^-2` are not Laurent
//! polynomials; they live here. A ratio is reduced to a bare Laurent scalar
//! whenever the denominator divides the numerator exactly.

use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use num_rational::BigRational;
use num_traits::{One, Zero};

use super::laurent::LaurentScalar;
use super::QArithError;

#[derive(Clone, Debug)]
pub struct QRatio {
    num: LaurentScalar,
    den: LaurentScalar,
}

impl QRatio {
    pub fn new(num: LaurentScalar, den: LaurentScalar) -> Result<Self, QArithError> {
        if den.is_zero() {
            return Err(QArithError::DivisionByZero);
        }
        Ok(Self::normalized(num, den))
    }

    fn normalized(num: LaurentScalar, den: LaurentScalar) -> Self {
        if num.is_zero() {
            return Self::zero();
        }
        if let Some(quot) = num.checked_div(&den) {
            return Self::from(quot);
        }
        // Make the denominator's lowest term `1 * t^0`.
        let (e, c) = den
            .terms()
            .next()
            .map(|(e, c)| (e, c.clone()))
            .expect("nonzero denominator");
        let inv = BigRational::one() / c;
        Self {
            num: num.shift(-e).scale(&inv),
            den: den.shift(-e).scale(&inv),
        }
    }

    pub fn zero() -> Self {
        Self::from(LaurentScalar::zero())
    }

    pub fn one() -> Self {
        Self::from(LaurentScalar::one())
    }

    pub fn from_integer(n: i64) -> Self {
        Self::from(LaurentScalar::from_integer(n))
    }

    pub fn numer(&self) -> &LaurentScalar {
        &self.num
    }

    pub fn denom(&self) -> &LaurentScalar {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.num == self.den
    }

    /// The Laurent scalar this ratio equals, if it is one.
    pub fn as_laurent(&self) -> Option<LaurentScalar> {
        self.num.checked_div(&self.den)
    }

    pub fn recip(&self) -> Result<Self, QArithError> {
        Self::new(self.den.clone(), self.num.clone())
    }

    /// Substitutes `q -> q^-1` in numerator and denominator.
    pub fn invert_variable(&self) -> Self {
        Self::normalized(self.num.invert_variable(), self.den.invert_variable())
    }

    pub fn eval(&self, q: f64) -> f64 {
        self.num.eval(q) / self.den.eval(q)
    }
}

impl From<LaurentScalar> for QRatio {
    fn from(num: LaurentScalar) -> Self {
        Self {
            num,
            den: LaurentScalar::one(),
        }
    }
}

impl From<i64> for QRatio {
    fn from(n: i64) -> Self {
        Self::from_integer(n)
    }
}

impl PartialEq for QRatio {
    fn eq(&self, other: &Self) -> bool {
        &self.num * &other.den == &other.num * &self.den
    }
}

impl Eq for QRatio {}

impl<'a> Add<&'a QRatio> for &QRatio {
    type Output = QRatio;
    fn add(self, rhs: &'a QRatio) -> QRatio {
        if self.den == rhs.den {
            return QRatio::normalized(&self.num + &rhs.num, self.den.clone());
        }
        QRatio::normalized(
            &(&self.num * &rhs.den) + &(&rhs.num * &self.den),
            &self.den * &rhs.den,
        )
    }
}

impl Add for QRatio {
    type Output = QRatio;
    fn add(self, rhs: QRatio) -> QRatio {
        &self + &rhs
    }
}

impl<'a> Sub<&'a QRatio> for &QRatio {
    type Output = QRatio;
    fn sub(self, rhs: &'a QRatio) -> QRatio {
        self + &(-rhs)
    }
}

impl Sub for QRatio {
    type Output = QRatio;
    fn sub(self, rhs: QRatio) -> QRatio {
        &self - &rhs
    }
}

impl<'a> Mul<&'a QRatio> for &QRatio {
    type Output = QRatio;
    fn mul(self, rhs: &'a QRatio) -> QRatio {
        QRatio::normalized(&self.num * &rhs.num, &self.den * &rhs.den)
    }
}

impl Mul for QRatio {
    type Output = QRatio;
    fn mul(self, rhs: QRatio) -> QRatio {
        &self * &rhs
    }
}

impl<'a> Div<&'a QRatio> for &QRatio {
    type Output = Result<QRatio, QArithError>;
    fn div(self, rhs: &'a QRatio) -> Result<QRatio, QArithError> {
        QRatio::new(&self.num * &rhs.den, &self.den * &rhs.num)
    }
}

impl Neg for &QRatio {
    type Output = QRatio;
    fn neg(self) -> QRatio {
        QRatio {
            num: -&self.num,
            den: self.den.clone(),
        }
    }
}

impl Neg for QRatio {
    type Output = QRatio;
    fn neg(self) -> QRatio {
        -&self
    }
}

impl Zero for QRatio {
    fn zero() -> Self {
        QRatio::zero()
    }
    fn is_zero(&self) -> bool {
        QRatio::is_zero(self)
    }
}

impl fmt::Display for QRatio {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let wrap = |s: &LaurentScalar| {
            if s.num_terms() > 1 {
                format!("({s})")
            } else {
                s.to_string()
            }
        };
        if self.den.is_one() {
            write!(f, "{}", self.num)
        } else {
            write!(f, "{}/{}", wrap(&self.num), wrap(&self.den))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn reduces_exact_quotients() {
        let six = &LaurentScalar::qint(2) * &LaurentScalar::qint(3);
        let r = QRatio::new(six, LaurentScalar::qint(3)).unwrap();
        assert_eq!(r.denom(), &LaurentScalar::one());
        assert_eq!(r.numer(), &LaurentScalar::qint(2));
    }

    #[test]
    fn equality_is_cross_multiplication() {
        let a = QRatio::new(LaurentScalar::from_integer(2), LaurentScalar::qint(2)).unwrap();
        let b = QRatio::new(
            LaurentScalar::from_integer(4),
            &LaurentScalar::qint(2) * &LaurentScalar::from_integer(2),
        )
        .unwrap();
        assert_eq!(a, b);
        assert!((a.eval(0.5) - 0.8).abs() < 1e-15);
    }

    #[test]
    fn zero_denominator_rejected() {
        assert!(QRatio::new(LaurentScalar::one(), LaurentScalar::zero()).is_err());
        assert!(QRatio::zero().recip().is_err());
    }
}
