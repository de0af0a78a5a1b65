//! Formal linear combinations of generator words in the extended
//! `U_q(su(3))`, evaluated as matrices on irreps.
//!
//! Words are never reduced with the algebra relations; identities are
//! certified by evaluating on a battery of irreps.

mod parse;
mod tensor;

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};

use crate::irreps::{
    exact_diagonal, float_matrix, relations, GeneratorName, IrrepError, IrrepLabel, OperatorMatrix,
};
use crate::qarith::{LaurentScalar, QParam, QRatio, QValue};
use crate::report::Report;

pub use parse::{parse_element, ParseError};
pub use tensor::{
    closed_form_delta_x, closed_form_delta_y, coproduct, counit, printed_delta_x_residual,
    verify_coproduct_identity, DeltaSign, TensorElement,
};

/// A word in the generators; the empty word is the unit.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Word(pub Vec<GeneratorName>);

impl Word {
    pub fn unit() -> Self {
        Word(Vec::new())
    }

    pub fn is_unit(&self) -> bool {
        self.0.is_empty()
    }

    pub fn concat(&self, other: &Word) -> Word {
        let mut v = self.0.clone();
        v.extend_from_slice(&other.0);
        Word(v)
    }

    pub fn is_diagonal(&self) -> bool {
        self.0.iter().all(|g| g.is_diagonal())
    }

    fn reversed_with(&self, f: impl Fn(GeneratorName) -> GeneratorName) -> Word {
        Word(self.0.iter().rev().map(|g| f(*g)).collect())
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return f.write_str("1");
        }
        let parts: Vec<&str> = self.0.iter().map(|g| g.symbol()).collect();
        f.write_str(&parts.join(" "))
    }
}

/// Finite sum of words with exact coefficients in `Q(q^(1/12))`.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct AlgebraElement {
    terms: BTreeMap<Word, QRatio>,
}

impl AlgebraElement {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn unit() -> Self {
        Self::scalar(QRatio::one())
    }

    pub fn scalar(c: QRatio) -> Self {
        Self::term(Word::unit(), c)
    }

    pub fn generator(g: GeneratorName) -> Self {
        Self::word(&[g])
    }

    pub fn word(gens: &[GeneratorName]) -> Self {
        Self::term(Word(gens.to_vec()), QRatio::one())
    }

    pub fn term(w: Word, c: QRatio) -> Self {
        let mut e = Self::zero();
        e.add_term(w, c);
        e
    }

    pub fn add_term(&mut self, w: Word, c: QRatio) {
        if c.is_zero() {
            return;
        }
        match self.terms.remove(&w) {
            Some(old) => {
                let s = &old + &c;
                if !s.is_zero() {
                    self.terms.insert(w, s);
                }
            }
            None => {
                self.terms.insert(w, c);
            }
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Word, &QRatio)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn scale(&self, c: &QRatio) -> Self {
        let mut out = Self::zero();
        for (w, a) in &self.terms {
            out.add_term(w.clone(), a * c);
        }
        out
    }

    /// `x^n`, with `x^0` the unit.
    pub fn pow(&self, n: u32) -> Self {
        (0..n).fold(Self::unit(), |acc, _| &acc * self)
    }

    /// `ϑ`: linear, antimultiplicative, `E_i <-> F_i`, fixes `K_i` and `H`.
    pub fn theta(&self) -> Self {
        let mut out = Self::zero();
        for (w, c) in &self.terms {
            out.add_term(w.reversed_with(GeneratorName::theta), c.clone());
        }
        out
    }

    /// The `*`-structure. Coefficients are real (q real), so conjugation
    /// acts trivially on them.
    pub fn star(&self) -> Self {
        let mut out = Self::zero();
        for (w, c) in &self.terms {
            out.add_term(w.reversed_with(GeneratorName::star), c.clone());
        }
        out
    }

    /// Numeric coefficients at `q`, in word order.
    fn float_terms(&self, q: QValue) -> Vec<(&Word, f64)> {
        self.terms
            .iter()
            .map(|(w, c)| (w, c.eval(q.get())))
            .collect()
    }

    /// Applies the element to a vector of `V(label)`.
    pub fn apply(&self, label: IrrepLabel, q: QValue, v: &DVector<f64>) -> DVector<f64> {
        let mut out = DVector::zeros(label.dim());
        for (w, c) in self.float_terms(q) {
            let mut x = v.clone();
            for g in w.0.iter().rev() {
                x = float_matrix(label, *g, q).apply(&x);
            }
            out.axpy(c, &x, 1.0);
        }
        out
    }

    /// Dense matrix of the element on `V(label)`.
    pub fn evaluate(&self, label: IrrepLabel, q: QValue) -> DMatrix<f64> {
        let n = label.dim();
        let mut out = DMatrix::zeros(n, n);
        for (w, c) in self.float_terms(q) {
            let mut m = DMatrix::identity(n, n);
            for g in w.0.iter().rev() {
                m = sparse_times_dense(&float_matrix(label, *g, q), &m);
            }
            out += m * c;
        }
        out
    }

    /// Exact diagonal of a purely diagonal element.
    pub fn evaluate_exact(&self, label: IrrepLabel) -> Result<Vec<QRatio>, IrrepError> {
        let mut out = vec![QRatio::zero(); label.dim()];
        for (w, c) in &self.terms {
            let mut d = vec![LaurentScalar::one(); label.dim()];
            for g in &w.0 {
                for (x, y) in d.iter_mut().zip(exact_diagonal(label, *g)?) {
                    *x = &*x * &y;
                }
            }
            for (o, x) in out.iter_mut().zip(d) {
                *o = &*o + &(c * &QRatio::from(x));
            }
        }
        Ok(out)
    }

    /// Evaluation in either arithmetic mode.
    pub fn evaluate_in(&self, label: IrrepLabel, p: &QParam) -> Result<Evaluation, IrrepError> {
        match p {
            QParam::Float(q) => Ok(Evaluation::Float(self.evaluate(label, *q))),
            QParam::Exact => self.evaluate_exact(label).map(Evaluation::ExactDiagonal),
        }
    }
}

/// Result of [`AlgebraElement::evaluate_in`].
#[derive(Clone, Debug, PartialEq)]
pub enum Evaluation {
    Float(DMatrix<f64>),
    ExactDiagonal(Vec<QRatio>),
}

pub(crate) fn sparse_times_dense(a: &OperatorMatrix, m: &DMatrix<f64>) -> DMatrix<f64> {
    let n = a.dim();
    let mut out = DMatrix::zeros(n, m.ncols());
    for c in 0..n {
        for &(r, v) in a.column(c) {
            for k in 0..m.ncols() {
                out[(r, k)] += v * m[(c, k)];
            }
        }
    }
    out
}

impl<'a> Add<&'a AlgebraElement> for &AlgebraElement {
    type Output = AlgebraElement;
    fn add(self, rhs: &'a AlgebraElement) -> AlgebraElement {
        let mut out = self.clone();
        for (w, c) in &rhs.terms {
            out.add_term(w.clone(), c.clone());
        }
        out
    }
}

impl Add for AlgebraElement {
    type Output = AlgebraElement;
    fn add(self, rhs: AlgebraElement) -> AlgebraElement {
        &self + &rhs
    }
}

impl Neg for &AlgebraElement {
    type Output = AlgebraElement;
    fn neg(self) -> AlgebraElement {
        self.scale(&QRatio::from_integer(-1))
    }
}

impl Neg for AlgebraElement {
    type Output = AlgebraElement;
    fn neg(self) -> AlgebraElement {
        -&self
    }
}

impl<'a> Sub<&'a AlgebraElement> for &AlgebraElement {
    type Output = AlgebraElement;
    fn sub(self, rhs: &'a AlgebraElement) -> AlgebraElement {
        self + &(-rhs)
    }
}

impl Sub for AlgebraElement {
    type Output = AlgebraElement;
    fn sub(self, rhs: AlgebraElement) -> AlgebraElement {
        &self - &rhs
    }
}

impl<'a> Mul<&'a AlgebraElement> for &AlgebraElement {
    type Output = AlgebraElement;
    fn mul(self, rhs: &'a AlgebraElement) -> AlgebraElement {
        let mut out = AlgebraElement::zero();
        for (a, x) in &self.terms {
            for (b, y) in &rhs.terms {
                out.add_term(a.concat(b), x * y);
            }
        }
        out
    }
}

impl Mul for AlgebraElement {
    type Output = AlgebraElement;
    fn mul(self, rhs: AlgebraElement) -> AlgebraElement {
        &self * &rhs
    }
}

impl fmt::Display for AlgebraElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        for (i, (w, c)) in self.terms.iter().enumerate() {
            if i > 0 {
                f.write_str(" + ")?;
            }
            if c.is_one() {
                write!(f, "{w}")?;
            } else if w.is_unit() {
                write!(f, "({c})")?;
            } else {
                write!(f, "({c}) {w}")?;
            }
        }
        Ok(())
    }
}

fn gen(g: GeneratorName) -> AlgebraElement {
    AlgebraElement::generator(g)
}

fn q_pow(e: i32) -> QRatio {
    QRatio::from(LaurentScalar::q_pow(e))
}

/// `2/[2] = 2/(q + q^-1)`.
pub fn two_over_qint2() -> QRatio {
    QRatio::new(LaurentScalar::from_integer(2), LaurentScalar::qint(2)).expect("[2] is nonzero")
}

/// `[a,b]_q = ab - q^-1 ba`.
pub fn qcommutator(a: &AlgebraElement, b: &AlgebraElement) -> AlgebraElement {
    &(a * b) - &(b * a).scale(&q_pow(-1))
}

pub fn commutator(a: &AlgebraElement, b: &AlgebraElement) -> AlgebraElement {
    &(a * b) - &(b * a)
}

/// `X = F2 F1 - 2[2]^-1 F1 F2`.
pub fn x_element() -> AlgebraElement {
    use GeneratorName::*;
    &AlgebraElement::word(&[F2, F1]) - &AlgebraElement::word(&[F1, F2]).scale(&two_over_qint2())
}

/// `Y = E2 E1 - 2[2]^-1 E1 E2`.
pub fn y_element() -> AlgebraElement {
    use GeneratorName::*;
    &AlgebraElement::word(&[E2, E1]) - &AlgebraElement::word(&[E1, E2]).scale(&two_over_qint2())
}

/// `X* = E1 E2 - 2[2]^-1 E2 E1`.
pub fn x_star_element() -> AlgebraElement {
    x_element().star()
}

/// `Y* = F1 F2 - 2[2]^-1 F2 F1`.
pub fn y_star_element() -> AlgebraElement {
    y_element().star()
}

/// The extended Casimir `C_q`.
pub fn casimir_element() -> AlgebraElement {
    use GeneratorName::*;
    let (h, hi) = (gen(H), gen(HInv));
    let qk1k2 = AlgebraElement::word(&[K1, K2, K1, K2]).scale(&q_pow(2));
    let qk1k2_inv = AlgebraElement::word(&[K1Inv, K2Inv, K1Inv, K2Inv]).scale(&q_pow(-2));
    let qdiff = &LaurentScalar::q_pow(1) - &LaurentScalar::q_pow(-1);
    let pref = QRatio::new(LaurentScalar::one(), qdiff.pow(2)).expect("nonzero");

    let diag = &(&(&(&h + &hi) * &(&qk1k2 + &qk1k2_inv)) + &(&(&h * &h) + &(&hi * &hi)))
        - &AlgebraElement::scalar(QRatio::from_integer(6));
    let first = diag.scale(&pref);

    let c1 = &AlgebraElement::word(&[H, K2, K2]).scale(&q_pow(1))
        + &AlgebraElement::word(&[HInv, K2Inv, K2Inv]).scale(&q_pow(-1));
    let c2 = &AlgebraElement::word(&[HInv, K1, K1]).scale(&q_pow(1))
        + &AlgebraElement::word(&[H, K1Inv, K1Inv]).scale(&q_pow(-1));
    let second =
        &(&c1 * &AlgebraElement::word(&[F1, E1])) + &(&c2 * &AlgebraElement::word(&[F2, E2]));

    let (e1, e2, f1, f2) = (gen(E1), gen(E2), gen(F1), gen(F2));
    let third = &(&h.scale(&q_pow(1)) * &(&qcommutator(&f2, &f1) * &qcommutator(&e1, &e2)))
        + &(&hi.scale(&q_pow(1)) * &(&qcommutator(&f1, &f2) * &qcommutator(&e2, &e1)));

    &(&first + &second) + &third
}

/// Outcome of [`verify_casimir_scalar`].
#[derive(Clone, Debug, Serialize)]
pub struct CasimirCheck {
    pub label: IrrepLabel,
    pub q: f64,
    pub expected: f64,
    pub scalar: f64,
    /// `max|C - expected·1| / expected`.
    pub off_scalar_residual: f64,
    /// Largest relative `[C, g]` over the generators.
    pub commutator_residual: f64,
    pub report: Report,
}

/// Checks that `C_q` acts on `V(label)` as the closed-form scalar and
/// commutes with every generator.
pub fn verify_casimir_scalar(label: IrrepLabel, q: QValue, tol: f64) -> CasimirCheck {
    let c = casimir_element().evaluate(label, q);
    let n = label.dim();
    let expected = crate::irreps::casimir_value(label, q.get());
    let scalar = c.trace() / n as f64;
    let off =
        relations::max_abs(&(&c - DMatrix::identity(n, n) * expected)) / expected.abs().max(1.0);
    let mut comm: f64 = 0.0;
    for g in GeneratorName::ALL {
        let m = float_matrix(label, g, q).to_dense();
        let cg = &c * &m;
        let gc = &m * &c;
        comm = comm.max(relations::relative_residual(&cg, &gc, &[]));
    }
    let mut report = Report::new(format!("Casimir on V{label}, q = {q}"));
    report.record("C_q is the closed-form scalar", off, tol);
    report.record("[C_q, g] = 0 for all generators", comm, tol);
    CasimirCheck {
        label,
        q: q.get(),
        expected,
        scalar,
        off_scalar_residual: off,
        commutator_residual: comm,
        report,
    }
}

/// Largest relative residual of `a = b` over the labels and q values.
pub fn certify_equal(
    a: &AlgebraElement,
    b: &AlgebraElement,
    labels: &[IrrepLabel],
    qs: &[f64],
) -> f64 {
    let mut worst: f64 = 0.0;
    for &l in labels {
        for &qv in qs {
            let q = QValue::new(qv).expect("valid q");
            let ma = a.evaluate(l, q);
            let mb = b.evaluate(l, q);
            worst = worst.max(relations::relative_residual(&ma, &mb, &[]));
        }
    }
    worst
}

/// The certification battery: all irreps with `n1 + n2 <= 4`.
pub fn battery_labels() -> Vec<IrrepLabel> {
    IrrepLabel::up_to_total(4)
}

pub const BATTERY_QS: [f64; 3] = [0.3, 0.5, 0.9];

#[cfg(test)]
mod tests {
    use super::*;
    use GeneratorName::*;

    fn q(v: f64) -> QValue {
        QValue::new(v).unwrap()
    }

    fn close(a: &DMatrix<f64>, b: &DMatrix<f64>, tol: f64) -> bool {
        relations::relative_residual(a, b, &[]) < tol
    }

    #[test]
    fn unit_evaluates_to_identity() {
        let l = IrrepLabel::new(1, 1);
        assert_eq!(
            AlgebraElement::unit().evaluate(l, q(0.5)),
            DMatrix::identity(8, 8)
        );
    }

    #[test]
    fn ef_commutator_on_fundamental() {
        let l = IrrepLabel::new(0, 1);
        let lhs = commutator(&gen(E1), &gen(F1));
        let qd = &LaurentScalar::q_pow(1) - &LaurentScalar::q_pow(-1);
        let rhs = (&AlgebraElement::word(&[K1, K1]) - &AlgebraElement::word(&[K1Inv, K1Inv]))
            .scale(&QRatio::new(LaurentScalar::one(), qd).unwrap());
        assert!(close(
            &lhs.evaluate(l, q(0.5)),
            &rhs.evaluate(l, q(0.5)),
            1e-14
        ));
    }

    #[test]
    fn x_on_fundamental() {
        let l = IrrepLabel::new(0, 1);
        let f1 = float_matrix(l, F1, q(0.5)).to_dense();
        let f2 = float_matrix(l, F2, q(0.5)).to_dense();
        let want = &f2 * &f1 - (&f1 * &f2) * (2.0 / 2.5);
        assert!(close(&x_element().evaluate(l, q(0.5)), &want, 1e-15));
    }

    #[test]
    fn qcommutator_with_itself() {
        let e = gen(E1);
        let want = AlgebraElement::word(&[E1, E1]).scale(&(&QRatio::one() - &q_pow(-1)));
        assert_eq!(qcommutator(&e, &e), want);
    }

    #[test]
    fn q_serre_form_vanishes() {
        let l = IrrepLabel::new(1, 1);
        for (a, b) in [(E1, E2), (E2, E1), (F1, F2), (F2, F1)] {
            let z = qcommutator(&gen(a), &qcommutator(&gen(b), &gen(a)));
            assert!(relations::max_abs(&z.evaluate(l, q(0.5))) < 1e-12);
        }
    }

    #[test]
    fn casimir_examples() {
        let c = casimir_element();
        let triv = c.evaluate(IrrepLabel::new(0, 0), q(0.5));
        assert!((triv[(0, 0)] - 2.0).abs() < 1e-12);
        let r = verify_casimir_scalar(IrrepLabel::new(1, 1), q(0.5), 1e-10);
        assert!(r.report.all_passed(), "{}", r.report);
        assert!((r.scalar - 12.5).abs() < 1e-10);
        let r = verify_casimir_scalar(IrrepLabel::new(1, 0), q(0.5), 1e-10);
        assert!(r.report.all_passed(), "{}", r.report);
        let r = verify_casimir_scalar(IrrepLabel::new(2, 2), q(0.9), 1e-10);
        let three = crate::qarith::qnum(3.0, 0.9);
        assert!((r.scalar - 2.0 * three * three).abs() < 1e-9);
        // Near the classical limit the fundamental rep gives 14/3.
        let r = verify_casimir_scalar(IrrepLabel::new(0, 1), q(0.9999), 1e-8);
        assert!((r.scalar - 14.0 / 3.0).abs() < 1e-6);
    }

    #[test]
    fn casimir_exact_diagonal_part() {
        // The purely diagonal part is exact; on V(0,0) it already gives 2.
        let c = casimir_element();
        let diag: AlgebraElement = {
            let mut d = AlgebraElement::zero();
            for (w, k) in c.terms().filter(|(w, _)| w.is_diagonal()) {
                d.add_term(w.clone(), k.clone());
            }
            d
        };
        let v = diag.evaluate_exact(IrrepLabel::new(0, 0)).unwrap();
        assert_eq!(v[0], QRatio::from_integer(2));
    }

    #[test]
    fn theta_examples() {
        let w = AlgebraElement::word(&[E1, F2]);
        assert_eq!(w.theta(), AlgebraElement::word(&[E2, F1]));
        let c = casimir_element();
        assert_eq!(c.theta().theta(), c);
        assert_eq!(x_element().star(), x_star_element());
        let want = &AlgebraElement::word(&[E1, E2])
            - &AlgebraElement::word(&[E2, E1]).scale(&two_over_qint2());
        assert_eq!(x_star_element(), want);
    }

    #[test]
    fn theta_casimir_by_evaluation() {
        let c = casimir_element();
        let labels = [IrrepLabel::new(1, 1), IrrepLabel::new(2, 1)];
        assert!(certify_equal(&c.theta(), &c, &labels, &[0.5]) < 1e-12);
        assert!(certify_equal(&c.star(), &c, &labels, &[0.5]) < 1e-12);
    }

    #[test]
    fn boh_identities() {
        let k1k2sq = AlgebraElement::word(&[K1, K2, K2]);
        let xs = x_star_element();
        let e2 = gen(E2);
        let k1 = gen(K1);
        let sc = |e: i32| QRatio::from(LaurentScalar::q_pow_twelfths(e));
        let pairs = [
            (&k1k2sq * &xs, (&xs * &k1k2sq).scale(&sc(18))),
            (&k1 * &xs, (&xs * &k1).scale(&sc(6))),
            (&k1k2sq * &e2, (&e2 * &k1k2sq).scale(&sc(18))),
            (&k1 * &e2, (&e2 * &k1).scale(&sc(-6))),
        ];
        let labels = [IrrepLabel::new(1, 1), IrrepLabel::new(1, 4)];
        for (a, b) in &pairs {
            assert!(certify_equal(a, b, &labels, &[0.5]) < 1e-12);
        }
    }

    #[test]
    fn serre_b_identities() {
        let (e1, e2) = (gen(E1), gen(E2));
        let (y, xs) = (y_element(), x_star_element());
        let labels = battery_labels();
        let zero = AlgebraElement::zero();
        assert!(certify_equal(&(&(&e1 * &y) + &(&xs * &e1)), &zero, &labels, &BATTERY_QS) < 1e-11);
        assert!(certify_equal(&(&(&e2 * &xs) + &(&y * &e2)), &zero, &labels, &BATTERY_QS) < 1e-11);
    }

    #[test]
    fn evaluate_exact_matches_float() {
        let w = &AlgebraElement::word(&[H, K2Inv, K1]) + &AlgebraElement::scalar(two_over_qint2());
        let l = IrrepLabel::new(2, 1);
        let ex = w.evaluate_exact(l).unwrap();
        let fl = w.evaluate(l, q(0.4));
        for (i, e) in ex.iter().enumerate() {
            assert!((e.eval(0.4) - fl[(i, i)]).abs() < 1e-13);
        }
        assert!(gen(E1).evaluate_exact(l).is_err());
    }

    #[test]
    fn apply_agrees_with_evaluate() {
        let l = IrrepLabel::new(1, 2);
        let x = casimir_element();
        let v = DVector::from_fn(l.dim(), |i, _| (i as f64 * 0.37).sin());
        let a = x.apply(l, q(0.6), &v);
        let b = x.evaluate(l, q(0.6)) * &v;
        assert!((a - b).amax() < 1e-10);
    }
}
