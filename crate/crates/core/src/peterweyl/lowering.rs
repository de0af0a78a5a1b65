use nalgebra::DVector;

use super::PeterWeylError;
use crate::irreps::relations::relative_residual;
use crate::irreps::{GeneratorName, GtTriple, IrrepLabel};
use crate::qarith::{qbinom_exact, qfact_exact, LaurentScalar, QRatio, QValue};
use crate::report::Report;
use crate::ualg::{commutator, qcommutator, AlgebraElement};

/// `X^{n1,n2}_{j1,j2,m} = N · body`, with `N²` exact and `N` taken
/// numerically.
#[derive(Clone, Debug, PartialEq)]
pub struct LoweringWord {
    pub label: IrrepLabel,
    pub triple: GtTriple,
    pub normalization_sq: QRatio,
    pub body: AlgebraElement,
}

impl LoweringWord {
    pub fn normalization(&self, q: QValue) -> f64 {
        self.normalization_sq.eval(q.get()).sqrt()
    }

    /// `X v` on `V(label)`.
    pub fn apply(&self, q: QValue, v: &DVector<f64>) -> DVector<f64> {
        self.body.apply(self.label, q, v) * self.normalization(q)
    }

    /// `X` applied to the highest weight vector.
    pub fn on_highest_weight(&self, q: QValue) -> DVector<f64> {
        let l = self.label;
        let mut hw = DVector::zeros(l.dim());
        hw[l.index_of(l.highest_weight()).expect("highest weight")] = 1.0;
        self.apply(q, &hw)
    }
}

fn fact(n: i64) -> LaurentScalar {
    qfact_exact(n).expect("non-negative")
}

fn ratio(num: LaurentScalar, den: LaurentScalar) -> QRatio {
    QRatio::new(num, den).expect("q-factorials are nonzero")
}

/// The lowering element producing `|n1,n2,j1,j2,m>` from the highest weight.
pub fn gt_lowering_word(
    label: IrrepLabel,
    triple: GtTriple,
) -> Result<LoweringWord, PeterWeylError> {
    use GeneratorName::*;
    if !triple.is_valid_for(label) {
        return Err(PeterWeylError::InvalidLabel(format!("{label} {triple}")));
    }
    let (n1, n2) = (i64::from(label.n1), i64::from(label.n2));
    let (j1, j2) = (i64::from(triple.j1), i64::from(triple.j2));
    let s = j1 + j2;
    // (j1+j2)/2 ± m, both integers.
    let up = (s + i64::from(triple.two_m)) / 2;
    let down = (s - i64::from(triple.two_m)) / 2;

    let nsq = QRatio::from(LaurentScalar::qint(s + 1))
        * ratio(fact(up), fact(down))
        * ratio(&fact(n2 - j2) * &fact(j1), &fact(n1 - j1) * &fact(j2))
        * ratio(
            &fact(n1 + j2 + 1) * &fact(n2 + j1 + 1),
            &(&fact(n1) * &fact(n2)) * &fact(n1 + n2 + 1),
        );

    let f1 = AlgebraElement::generator(F1);
    let f2 = AlgebraElement::generator(F2);
    let c = qcommutator(&f2, &f1);
    let mut body = AlgebraElement::zero();
    for k in 0..=(n1 - j1) {
        let coeff = ratio(
            &LaurentScalar::q_pow(-(k * (s + k + 1)) as i32)
                * &qbinom_exact(n1 - j1, k).expect("in range"),
            fact(s + k + 1),
        );
        let word =
            &(&f1.pow((down + k) as u32) * &c.pow((n1 - j1 - k) as u32)) * &f2.pow((j2 + k) as u32);
        body = &body + &word.scale(&coeff);
    }
    Ok(LoweringWord {
        label,
        triple,
        normalization_sq: nsq,
        body,
    })
}

/// Applies every `X^{n1,n2}_{j1,j2,m}` to the highest weight vector of
/// `V(label)` and compares with the basis vector.
pub fn verify_gt_lemma(label: IrrepLabel, q: QValue, tol: f64) -> Report {
    let mut r = Report::new(format!("Gelfand-Tsetlin lowering on V{label}, q = {q}"));
    for (i, t) in label.basis().into_iter().enumerate() {
        let x = gt_lowering_word(label, t).expect("basis triple is valid");
        let mut v = x.on_highest_weight(q);
        v[i] -= 1.0;
        r.record("X |hw> = |j1,j2,m>", v.amax(), tol);
    }
    r
}

/// Coefficient convention for the `[E_i, F_i^n]` identities.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CommutatorForm {
    /// Factor `(q - q^-1)^-1`, consistent with `[E_i, F_i]`.
    Consistent,
    /// Factor `(q - q^-1)` as printed.
    Printed,
}

fn qpow(e: i64) -> QRatio {
    QRatio::from(LaurentScalar::q_pow(e as i32))
}

/// Both sides of the five identities for power `n`.
fn identities(n: u32, form: CommutatorForm) -> Vec<(&'static str, AlgebraElement, AlgebraElement)> {
    use GeneratorName::*;
    let g = AlgebraElement::generator;
    let ni = i64::from(n);
    let qn = QRatio::from(LaurentScalar::qint(ni));
    let qd = &LaurentScalar::q_pow(1) - &LaurentScalar::q_pow(-1);
    let fac = match form {
        CommutatorForm::Consistent => ratio(LaurentScalar::one(), qd),
        CommutatorForm::Printed => QRatio::from(qd),
    };
    let kk = |k, ki| {
        &AlgebraElement::word(&[k, k]).scale(&qpow(1 - ni))
            - &AlgebraElement::word(&[ki, ki]).scale(&qpow(ni - 1))
    };
    let c = qcommutator(&g(F2), &g(F1));
    vec![
        (
            "[E1, F1^n]",
            commutator(&g(E1), &g(F1).pow(n)),
            (&g(F1).pow(n - 1) * &kk(K1, K1Inv)).scale(&(&qn * &fac)),
        ),
        (
            "[E1, [F2,F1]_q^n]",
            commutator(&g(E1), &c.pow(n)),
            (&(&c.pow(n - 1) * &g(F2)) * &AlgebraElement::word(&[K1Inv, K1Inv]))
                .scale(&(-&(&qn * &qpow(ni - 2)))),
        ),
        (
            "[E2, F2^n]",
            commutator(&g(E2), &g(F2).pow(n)),
            (&g(F2).pow(n - 1) * &kk(K2, K2Inv)).scale(&(&qn * &fac)),
        ),
        (
            "[E2, [F2,F1]_q^n]",
            commutator(&g(E2), &c.pow(n)),
            (&(&g(F1) * &c.pow(n - 1)) * &AlgebraElement::word(&[K2, K2])).scale(&qn),
        ),
        (
            "F2 F1^n - q^-n F1^n F2",
            &(&g(F2) * &g(F1).pow(n)) - &(&g(F1).pow(n) * &g(F2)).scale(&qpow(-ni)),
            (&g(F1).pow(n - 1) * &c).scale(&qn),
        ),
    ]
}

/// `(identity, n, relative residual)` on `V(label)`.
pub fn lemma_commutator_residuals(
    label: IrrepLabel,
    nmax_power: u32,
    q: QValue,
    form: CommutatorForm,
) -> Vec<(&'static str, u32, f64)> {
    let mut out = Vec::new();
    for n in 1..=nmax_power {
        for (name, lhs, rhs) in identities(n, form) {
            let a = lhs.evaluate(label, q);
            let b = rhs.evaluate(label, q);
            out.push((name, n, relative_residual(&a, &b, &[])));
        }
    }
    out
}

/// The five commutator identities of the lowering lemma for `n <= nmax_power`.
pub fn verify_lemma_commutators(label: IrrepLabel, nmax_power: u32, q: QValue, tol: f64) -> Report {
    let mut r = Report::new(format!(
        "lowering-lemma commutators on V{label}, n <= {nmax_power}, q = {q}"
    ));
    for (name, _, res) in
        lemma_commutator_residuals(label, nmax_power, q, CommutatorForm::Consistent)
    {
        r.record(name, res, tol);
    }
    r
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(v: f64) -> QValue {
        QValue::new(v).unwrap()
    }

    #[test]
    fn highest_weight_word_is_unit() {
        for l in IrrepLabel::up_to_total(4) {
            let x = gt_lowering_word(l, l.highest_weight()).unwrap();
            // N · body = 1, checked exactly as N² · body² = 1.
            let terms: Vec<_> = x.body.terms().collect();
            assert_eq!(terms.len(), 1);
            assert!(terms[0].0.is_unit());
            let c = terms[0].1;
            assert!((&(c * c) * &x.normalization_sq).is_one(), "{l}");
        }
    }

    #[test]
    fn reproduces_v11() {
        let l = IrrepLabel::new(1, 1);
        let r = verify_gt_lemma(l, q(0.5), 1e-10);
        assert!(r.all_passed(), "{r}");
        let x = gt_lowering_word(l, GtTriple::new(1, 0, -1)).unwrap();
        let v = x.on_highest_weight(q(0.5));
        let i = l.index_of(GtTriple::new(1, 0, -1)).unwrap();
        assert!((v[i] - 1.0).abs() < 1e-10);
    }

    #[test]
    fn invalid_labels_rejected() {
        assert!(gt_lowering_word(IrrepLabel::new(1, 1), GtTriple::new(2, 0, 0)).is_err());
    }

    #[test]
    fn commutators() {
        let r = verify_lemma_commutators(IrrepLabel::new(1, 1), 3, q(0.5), 1e-11);
        assert!(r.all_passed(), "{r}");
        let r = verify_lemma_commutators(IrrepLabel::new(2, 1), 2, q(0.9), 1e-11);
        assert!(r.all_passed(), "{r}");
        let printed =
            lemma_commutator_residuals(IrrepLabel::new(1, 1), 1, q(0.5), CommutatorForm::Printed);
        assert!(printed.iter().any(|(_, _, res)| *res > 1e-2));
    }
}
