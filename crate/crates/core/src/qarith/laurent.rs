//! Laurent polynomials in `t = q^(1/12)` with arbitrary-precision rational
//! coefficients.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub, SubAssign};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

/// Number of `t`-units in one power of `q`.
pub const TWELFTHS: i32 = 12;

/// A finite sum `sum_e c_e t^e` with `t^12 = q`.
///
/// Zero coefficients are never stored, so structural equality is
/// mathematical equality.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct LaurentScalar {
    coeffs: BTreeMap<i32, BigRational>,
}

impl LaurentScalar {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::monomial(0, BigRational::one())
    }

    pub fn from_integer(n: i64) -> Self {
        Self::monomial(0, BigRational::from_integer(BigInt::from(n)))
    }

    pub fn from_rational(r: BigRational) -> Self {
        Self::monomial(0, r)
    }

    /// `c * t^exp`.
    pub fn monomial(exp: i32, c: BigRational) -> Self {
        let mut coeffs = BTreeMap::new();
        if !c.is_zero() {
            coeffs.insert(exp, c);
        }
        Self { coeffs }
    }

    /// `q^(twelfths/12)`, i.e. `t^twelfths`.
    pub fn q_pow_twelfths(twelfths: i32) -> Self {
        Self::monomial(twelfths, BigRational::one())
    }

    /// Integer power of `q`.
    pub fn q_pow(n: i32) -> Self {
        Self::q_pow_twelfths(TWELFTHS * n)
    }

    /// The q-integer `[n] = q^(n-1) + q^(n-3) + ... + q^(1-n)`.
    pub fn qint(n: i64) -> Self {
        if n < 0 {
            return -Self::qint(-n);
        }
        let mut out = Self::zero();
        for k in 0..n {
            let e = (n - 1 - 2 * k) as i32 * TWELFTHS;
            out.add_term(e, BigRational::one());
        }
        out
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.coeffs.len() == 1 && self.coeffs.get(&0).map(|c| c.is_one()).unwrap_or(false)
    }

    /// Iterates `(exponent in twelfths, coefficient)` in increasing exponent.
    pub fn terms(&self) -> impl Iterator<Item = (i32, &BigRational)> {
        self.coeffs.iter().map(|(e, c)| (*e, c))
    }

    pub fn num_terms(&self) -> usize {
        self.coeffs.len()
    }

    pub fn coeff(&self, exp: i32) -> BigRational {
        self.coeffs
            .get(&exp)
            .cloned()
            .unwrap_or_else(BigRational::zero)
    }

    pub fn min_exp(&self) -> Option<i32> {
        self.coeffs.keys().next().copied()
    }

    pub fn max_exp(&self) -> Option<i32> {
        self.coeffs.keys().next_back().copied()
    }

    /// Returns the constant if this is a pure rational number.
    pub fn as_constant(&self) -> Option<BigRational> {
        match self.coeffs.len() {
            0 => Some(BigRational::zero()),
            1 => self.coeffs.get(&0).cloned(),
            _ => None,
        }
    }

    pub fn add_term(&mut self, exp: i32, c: BigRational) {
        if c.is_zero() {
            return;
        }
        let slot = self.coeffs.entry(exp).or_insert_with(BigRational::zero);
        *slot += c;
        if slot.is_zero() {
            self.coeffs.remove(&exp);
        }
    }

    pub fn scale(&self, c: &BigRational) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        Self {
            coeffs: self.coeffs.iter().map(|(e, v)| (*e, v * c)).collect(),
        }
    }

    /// Multiplies by `t^shift`.
    pub fn shift(&self, shift: i32) -> Self {
        Self {
            coeffs: self
                .coeffs
                .iter()
                .map(|(e, v)| (e + shift, v.clone()))
                .collect(),
        }
    }

    /// Substitutes `t -> t^-1`, i.e. `q -> q^-1`.
    pub fn invert_variable(&self) -> Self {
        Self {
            coeffs: self.coeffs.iter().map(|(e, v)| (-e, v.clone())).collect(),
        }
    }

    pub fn pow(&self, n: u32) -> Self {
        let mut out = Self::one();
        for _ in 0..n {
            out = &out * self;
        }
        out
    }

    /// Evaluates at a numeric `q > 0`.
    pub fn eval(&self, q: f64) -> f64 {
        let lnq = q.ln();
        self.coeffs
            .iter()
            .map(|(e, c)| rational_to_f64(c) * (lnq * f64::from(*e) / f64::from(TWELFTHS)).exp())
            .sum()
    }

    /// Exact division. Returns `None` when `other` is zero or does not divide
    /// `self` in the Laurent ring.
    pub fn checked_div(&self, other: &Self) -> Option<Self> {
        let (bmin, bmax) = (other.min_exp()?, other.max_exp()?);
        let (amin, amax) = match (self.min_exp(), self.max_exp()) {
            (Some(a), Some(b)) => (a, b),
            _ => return Some(Self::zero()),
        };
        // Dense polynomial division on the shifted supports.
        let mut rem: Vec<BigRational> = (amin..=amax).map(|e| self.coeff(e)).collect();
        let div: Vec<BigRational> = (bmin..=bmax).map(|e| other.coeff(e)).collect();
        let db = div.len() - 1;
        if rem.len() < div.len() {
            return None;
        }
        let lead = div[db].clone();
        let mut quot = vec![BigRational::zero(); rem.len() - db];
        for k in (0..quot.len()).rev() {
            let c = &rem[k + db] / &lead;
            if c.is_zero() {
                continue;
            }
            for (i, d) in div.iter().enumerate() {
                rem[k + i] -= &c * d;
            }
            quot[k] = c;
        }
        if rem.iter().any(|r| !r.is_zero()) {
            return None;
        }
        let mut out = Self::zero();
        for (k, c) in quot.into_iter().enumerate() {
            out.add_term(amin - bmin + k as i32, c);
        }
        Some(out)
    }
}

pub(crate) fn rational_to_f64(r: &BigRational) -> f64 {
    r.to_f64().unwrap_or_else(|| {
        let n = r.numer().to_f64().unwrap_or(f64::NAN);
        let d = r.denom().to_f64().unwrap_or(f64::NAN);
        n / d
    })
}

impl From<i64> for LaurentScalar {
    fn from(n: i64) -> Self {
        Self::from_integer(n)
    }
}

impl<'a> Add<&'a LaurentScalar> for &LaurentScalar {
    type Output = LaurentScalar;
    fn add(self, rhs: &'a LaurentScalar) -> LaurentScalar {
        let mut out = self.clone();
        out += rhs;
        out
    }
}

impl Add for LaurentScalar {
    type Output = LaurentScalar;
    fn add(mut self, rhs: LaurentScalar) -> LaurentScalar {
        self += &rhs;
        self
    }
}

impl AddAssign<&LaurentScalar> for LaurentScalar {
    fn add_assign(&mut self, rhs: &LaurentScalar) {
        for (e, c) in &rhs.coeffs {
            self.add_term(*e, c.clone());
        }
    }
}

impl<'a> Sub<&'a LaurentScalar> for &LaurentScalar {
    type Output = LaurentScalar;
    fn sub(self, rhs: &'a LaurentScalar) -> LaurentScalar {
        let mut out = self.clone();
        out -= rhs;
        out
    }
}

impl Sub for LaurentScalar {
    type Output = LaurentScalar;
    fn sub(mut self, rhs: LaurentScalar) -> LaurentScalar {
        self -= &rhs;
        self
    }
}

impl SubAssign<&LaurentScalar> for LaurentScalar {
    fn sub_assign(&mut self, rhs: &LaurentScalar) {
        for (e, c) in &rhs.coeffs {
            self.add_term(*e, -c.clone());
        }
    }
}

impl<'a> Mul<&'a LaurentScalar> for &LaurentScalar {
    type Output = LaurentScalar;
    fn mul(self, rhs: &'a LaurentScalar) -> LaurentScalar {
        let mut out = LaurentScalar::zero();
        for (ea, ca) in &self.coeffs {
            for (eb, cb) in &rhs.coeffs {
                out.add_term(ea + eb, ca * cb);
            }
        }
        out
    }
}

impl Mul for LaurentScalar {
    type Output = LaurentScalar;
    fn mul(self, rhs: LaurentScalar) -> LaurentScalar {
        &self * &rhs
    }
}

impl Neg for LaurentScalar {
    type Output = LaurentScalar;
    fn neg(self) -> LaurentScalar {
        LaurentScalar {
            coeffs: self.coeffs.into_iter().map(|(e, c)| (e, -c)).collect(),
        }
    }
}

impl Neg for &LaurentScalar {
    type Output = LaurentScalar;
    fn neg(self) -> LaurentScalar {
        -self.clone()
    }
}

/// Formats `t^e` as a power of `q`, e.g. `q^2`, `q^-1`, `q^(1/3)`.
pub(crate) fn fmt_q_power(twelfths: i32) -> String {
    let g = gcd(twelfths.unsigned_abs(), TWELFTHS as u32) as i32;
    let (n, d) = (twelfths / g, TWELFTHS / g);
    match (n, d) {
        (0, _) => String::new(),
        (1, 1) => "q".to_string(),
        (n, 1) => format!("q^{n}"),
        (n, d) => format!("q^({n}/{d})"),
    }
}

fn gcd(mut a: u32, mut b: u32) -> u32 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a.max(1)
}

impl fmt::Display for LaurentScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        for (i, (e, c)) in self.coeffs.iter().enumerate() {
            let neg = c.is_negative();
            let abs = c.abs();
            if i == 0 {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if neg { '-' } else { '+' })?;
            }
            let qp = fmt_q_power(*e);
            match (abs.is_one(), qp.is_empty()) {
                (true, true) => write!(f, "1")?,
                (true, false) => write!(f, "{qp}")?,
                (false, true) => write!(f, "{abs}")?,
                (false, false) => write!(f, "{abs}*{qp}")?,
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn qint_exact_shape() {
        let three = LaurentScalar::qint(3);
        assert_eq!(three.num_terms(), 3);
        assert_eq!(three.coeff(24), BigRational::one());
        assert_eq!(three.coeff(0), BigRational::one());
        assert_eq!(three.coeff(-24), BigRational::one());
        assert!(LaurentScalar::qint(0).is_zero());
        assert_eq!(LaurentScalar::qint(-2), -LaurentScalar::qint(2));
    }

    #[test]
    fn exact_division() {
        let a = &LaurentScalar::qint(2) * &LaurentScalar::qint(3);
        assert_eq!(
            a.checked_div(&LaurentScalar::qint(3)),
            Some(LaurentScalar::qint(2))
        );
        assert_eq!(
            LaurentScalar::qint(3).checked_div(&LaurentScalar::qint(2)),
            None
        );
        assert_eq!(
            LaurentScalar::one().checked_div(&LaurentScalar::zero()),
            None
        );
    }

    #[test]
    fn display_uses_q_powers() {
        let s = &LaurentScalar::one() - &LaurentScalar::q_pow(2);
        assert_eq!(s.to_string(), "1 - q^2");
        assert_eq!(LaurentScalar::q_pow_twelfths(-6).to_string(), "q^(-1/2)");
        assert_eq!(LaurentScalar::qint(2).to_string(), "q^-1 + q");
    }

    #[test]
    fn eval_matches_float() {
        let s = LaurentScalar::qint(2);
        assert!((s.eval(0.5) - 2.5).abs() < 1e-15);
    }
}
