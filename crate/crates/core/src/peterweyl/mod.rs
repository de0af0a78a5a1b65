//! The Peter–Weyl model of `A(SU_q(3))`.
//!
//! The basis vector `t(n1,n2)^{l1,l2,k}_{j1,j2,m}` is identified with
//! `|n1,n2,j1,j2,m> ⊗ |n1,n2,l1,l2,k>`; the white action acts on the first
//! (white) triple and the black action on the second. The basis is taken
//! orthonormal, so inner products are Euclidean in these labels.

mod lowering;

use std::collections::BTreeMap;
use std::fmt;

use nalgebra::DVector;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::irreps::{GeneratorName, GtTriple, IrrepLabel};
use crate::qarith::QValue;
use crate::ualg::AlgebraElement;

pub use lowering::{
    gt_lowering_word, lemma_commutator_residuals, verify_gt_lemma, verify_lemma_commutators,
    CommutatorForm, LoweringWord,
};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum PeterWeylError {
    #[error("invalid Gelfand-Tsetlin labels {0}")]
    InvalidLabel(String),
}

/// `t(n1,n2)^{black}_{white}`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct PwBasisVector {
    pub label: IrrepLabel,
    pub white: GtTriple,
    pub black: GtTriple,
}

impl PwBasisVector {
    pub fn new(
        label: IrrepLabel,
        white: GtTriple,
        black: GtTriple,
    ) -> Result<Self, PeterWeylError> {
        if white.is_valid_for(label) && black.is_valid_for(label) {
            Ok(Self {
                label,
                white,
                black,
            })
        } else {
            Err(PeterWeylError::InvalidLabel(format!(
                "{label} white {white} black {black}"
            )))
        }
    }

    /// JSON-lines record; half-integers doubled.
    pub fn dump(&self) -> BasisDump {
        BasisDump {
            n1: self.label.n1,
            n2: self.label.n2,
            white: [self.white.j1 as i32, self.white.j2 as i32, self.white.two_m],
            black: [self.black.j1 as i32, self.black.j2 as i32, self.black.two_m],
        }
    }
}

impl fmt::Display for PwBasisVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "t{}^{}_{}", self.label, self.black, self.white)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BasisDump {
    pub n1: u32,
    pub n2: u32,
    pub white: [i32; 3],
    pub black: [i32; 3],
}

/// A finite combination of Peter–Weyl basis vectors.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct PwVector {
    coeffs: BTreeMap<PwBasisVector, f64>,
}

/// Which leg of `V ⊗ V` an action uses.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Side {
    White,
    Black,
}

impl PwVector {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn basis(b: PwBasisVector) -> Self {
        let mut v = Self::zero();
        v.add(b, 1.0);
        v
    }

    pub fn add(&mut self, b: PwBasisVector, c: f64) {
        if c == 0.0 {
            return;
        }
        *self.coeffs.entry(b).or_insert(0.0) += c;
    }

    pub fn get(&self, b: &PwBasisVector) -> f64 {
        self.coeffs.get(b).copied().unwrap_or(0.0)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&PwBasisVector, &f64)> {
        self.coeffs.iter()
    }

    pub fn support_len(&self) -> usize {
        self.coeffs.len()
    }

    pub fn scaled(&self, c: f64) -> Self {
        Self {
            coeffs: self.coeffs.iter().map(|(b, x)| (*b, x * c)).collect(),
        }
    }

    pub fn plus(&self, other: &PwVector) -> PwVector {
        self.axpy(1.0, other)
    }

    pub fn minus(&self, other: &PwVector) -> PwVector {
        self.axpy(-1.0, other)
    }

    /// `self + a·other`.
    pub fn axpy(&self, a: f64, other: &PwVector) -> PwVector {
        let mut out = self.clone();
        for (b, x) in &other.coeffs {
            *out.coeffs.entry(*b).or_insert(0.0) += a * x;
        }
        out
    }

    /// Euclidean inner product in the orthonormal basis.
    pub fn inner(&self, other: &PwVector) -> f64 {
        self.coeffs.iter().map(|(b, x)| x * other.get(b)).sum()
    }

    pub fn norm(&self) -> f64 {
        self.inner(self).sqrt()
    }

    pub fn max_abs(&self) -> f64 {
        self.coeffs.values().fold(0.0, |m, x| m.max(x.abs()))
    }

    /// Acts with `h` on the chosen leg.
    pub fn act(&self, side: Side, h: &AlgebraElement, q: QValue) -> PwVector {
        // Group by (label, fixed triple); apply h to the moving triple.
        let mut groups: BTreeMap<(IrrepLabel, GtTriple), Vec<(GtTriple, f64)>> = BTreeMap::new();
        for (b, x) in &self.coeffs {
            let (fixed, moving) = match side {
                Side::White => (b.black, b.white),
                Side::Black => (b.white, b.black),
            };
            groups
                .entry((b.label, fixed))
                .or_default()
                .push((moving, *x));
        }
        let mut out = PwVector::zero();
        for ((label, fixed), entries) in groups {
            let basis = label.basis();
            let mut v = DVector::zeros(label.dim());
            for (t, x) in entries {
                v[label.index_of(t).expect("valid triple")] += x;
            }
            let w = h.apply(label, q, &v);
            for (i, y) in w.iter().enumerate() {
                if *y != 0.0 {
                    let (white, black) = match side {
                        Side::White => (basis[i], fixed),
                        Side::Black => (fixed, basis[i]),
                    };
                    out.add(
                        PwBasisVector {
                            label,
                            white,
                            black,
                        },
                        *y,
                    );
                }
            }
        }
        out
    }
}

/// `h ▷ v`.
pub fn white_act(h: &AlgebraElement, v: &PwVector, q: QValue) -> PwVector {
    v.act(Side::White, h, q)
}

/// `h ▶ v`.
pub fn black_act(h: &AlgebraElement, v: &PwVector, q: QValue) -> PwVector {
    v.act(Side::Black, h, q)
}

/// Subspaces of `A(SU_q(3))` carved out by black labels.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum SubspaceKind {
    /// `A(S⁵_q)`: black triple `(0,0,0)`.
    Sphere,
    /// `A(CP²_q)`: sphere with `n1 = n2`.
    Cp2,
    /// `L_N`: sphere with `n2 - n1 = N`.
    LineBundle(i32),
    /// `Ω^(0,1)` doublets: black `(1,0,±1/2)` in `V(n,n)`, `n >= 1`, or
    /// `(0,1,±1/2)` in `V(n,n+3)`.
    Form1Doublet,
}

/// Subspace plus truncation. For `Sphere` the truncation is `n1, n2 <= nmax`;
/// for the other kinds it bounds the running index `n` of the decomposition.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SubspaceSpec {
    pub kind: SubspaceKind,
    pub nmax: u32,
}

/// Irreps appearing in `L_N` up to truncation, in the order of `n`.
pub fn line_bundle_labels(n_charge: i32, nmax: u32) -> Vec<IrrepLabel> {
    (0..=nmax)
        .map(|n| {
            if n_charge >= 0 {
                IrrepLabel::new(n, n + n_charge as u32)
            } else {
                IrrepLabel::new(n + n_charge.unsigned_abs(), n)
            }
        })
        .collect()
}

const SINGLET: GtTriple = GtTriple::new(0, 0, 0);

/// Doublet black triples `(v+, v-)` for the two families.
pub fn doublet_triples(label: IrrepLabel) -> Option<(GtTriple, GtTriple)> {
    if label.n1 == label.n2 && label.n1 >= 1 {
        Some((GtTriple::new(1, 0, 1), GtTriple::new(1, 0, -1)))
    } else if label.n2 == label.n1 + 3 {
        Some((GtTriple::new(0, 1, 1), GtTriple::new(0, 1, -1)))
    } else {
        None
    }
}

/// A degree-1 slot `(t^{+}, t^{-})` sharing label and white triple.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub struct DoubletSlot {
    pub plus: PwBasisVector,
    pub minus: PwBasisVector,
}

/// Ordered basis of a singlet-type subspace.
pub fn subspace_basis(spec: SubspaceSpec) -> Vec<PwBasisVector> {
    let labels: Vec<IrrepLabel> = match spec.kind {
        SubspaceKind::Sphere => (0..=spec.nmax)
            .flat_map(|n1| (0..=spec.nmax).map(move |n2| IrrepLabel::new(n1, n2)))
            .collect(),
        SubspaceKind::Cp2 => line_bundle_labels(0, spec.nmax),
        SubspaceKind::LineBundle(n) => line_bundle_labels(n, spec.nmax),
        SubspaceKind::Form1Doublet => {
            return form1_slots(spec.nmax)
                .into_iter()
                .flat_map(|s| [s.plus, s.minus])
                .collect()
        }
    };
    labels
        .into_iter()
        .flat_map(|l| {
            l.basis().into_iter().map(move |w| PwBasisVector {
                label: l,
                white: w,
                black: SINGLET,
            })
        })
        .collect()
}

/// Degree-1 slots: `V(n,n)` for `1 <= n <= nmax`, then `V(n,n+3)` for
/// `n <= nmax`, each over the ordered white basis.
pub fn form1_slots(nmax: u32) -> Vec<DoubletSlot> {
    let labels = (1..=nmax)
        .map(|n| IrrepLabel::new(n, n))
        .chain((0..=nmax).map(|n| IrrepLabel::new(n, n + 3)));
    let mut out = Vec::new();
    for l in labels {
        let (p, m) = doublet_triples(l).expect("doublet family");
        for w in l.basis() {
            out.push(DoubletSlot {
                plus: PwBasisVector {
                    label: l,
                    white: w,
                    black: p,
                },
                minus: PwBasisVector {
                    label: l,
                    white: w,
                    black: m,
                },
            });
        }
    }
    out
}

/// A violated `Ω^(0,1)` condition.
#[derive(Debug, Error, Clone, PartialEq)]
#[error("{condition}: residual {residual:.3e}")]
pub struct MembershipViolation {
    pub condition: &'static str,
    pub residual: f64,
}

/// Checks the four defining conditions of `Ω^(0,1)` by black action.
pub fn check_form1_membership(
    vplus: &PwVector,
    vminus: &PwVector,
    q: QValue,
    tol: f64,
) -> Result<(), MembershipViolation> {
    use GeneratorName::*;
    let qv = q.get();
    let k1k2sq = AlgebraElement::word(&[K1, K2, K2]);
    let k1 = AlgebraElement::generator(K1);
    let e1 = AlgebraElement::generator(E1);
    let f1 = AlgebraElement::generator(F1);
    let scale = vplus.max_abs().max(vminus.max_abs()).max(1.0);
    let res = |a: PwVector, b: &PwVector| a.minus(b).max_abs() / scale;
    let zero = PwVector::zero();
    let checks: [(&'static str, f64); 8] = [
        (
            "K1K2² ▶ v+ = q^(3/2) v+",
            res(black_act(&k1k2sq, vplus, q), &vplus.scaled(qv.powf(1.5))),
        ),
        (
            "K1K2² ▶ v- = q^(3/2) v-",
            res(black_act(&k1k2sq, vminus, q), &vminus.scaled(qv.powf(1.5))),
        ),
        (
            "K1 ▶ v+ = q^(1/2) v+",
            res(black_act(&k1, vplus, q), &vplus.scaled(qv.sqrt())),
        ),
        (
            "K1 ▶ v- = q^(-1/2) v-",
            res(black_act(&k1, vminus, q), &vminus.scaled(1.0 / qv.sqrt())),
        ),
        ("E1 ▶ v+ = 0", res(black_act(&e1, vplus, q), &zero)),
        ("E1 ▶ v- = v+", res(black_act(&e1, vminus, q), vplus)),
        ("F1 ▶ v+ = v-", res(black_act(&f1, vplus, q), vminus)),
        ("F1 ▶ v- = 0", res(black_act(&f1, vminus, q), &zero)),
    ];
    for (condition, residual) in checks {
        if !(residual <= tol) {
            return Err(MembershipViolation {
                condition,
                residual,
            });
        }
    }
    Ok(())
}

/// White and black Casimir actions agree on every basis vector of `V⊗V`
/// and equal the closed-form scalar.
pub fn verify_casimir_sides(label: IrrepLabel, q: QValue, tol: f64) -> crate::report::Report {
    let c = crate::ualg::casimir_element();
    let want = crate::irreps::casimir_value(label, q.get());
    let mut r = crate::report::Report::new(format!("white and black Casimir on V{label}, q = {q}"));
    for w in label.basis() {
        for b in label.basis() {
            let v = PwVector::basis(PwBasisVector {
                label,
                white: w,
                black: b,
            });
            let x = white_act(&c, &v, q);
            let y = black_act(&c, &v, q);
            r.record(
                "C ▶ v = v ◀ C",
                x.minus(&y).max_abs() / want.abs().max(1.0),
                tol,
            );
            r.record(
                "C ▶ v = c(n1,n2) v",
                x.minus(&v.scaled(want)).max_abs() / want.abs().max(1.0),
                tol,
            );
        }
    }
    r
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::irreps::casimir_value;
    use crate::ualg::casimir_element;
    use GeneratorName::*;

    fn q(v: f64) -> QValue {
        QValue::new(v).unwrap()
    }

    fn t(l: (u32, u32), w: (u32, u32, i32), b: (u32, u32, i32)) -> PwBasisVector {
        PwBasisVector::new(
            IrrepLabel::new(l.0, l.1),
            GtTriple::new(w.0, w.1, w.2),
            GtTriple::new(b.0, b.1, b.2),
        )
        .unwrap()
    }

    #[test]
    fn subspace_counts() {
        let cp2 = subspace_basis(SubspaceSpec {
            kind: SubspaceKind::Cp2,
            nmax: 2,
        });
        assert_eq!(cp2.len(), 36);
        let l3 = subspace_basis(SubspaceSpec {
            kind: SubspaceKind::LineBundle(3),
            nmax: 1,
        });
        assert_eq!(l3.len(), 45);
        let l0 = subspace_basis(SubspaceSpec {
            kind: SubspaceKind::LineBundle(0),
            nmax: 3,
        });
        assert_eq!(
            l0,
            subspace_basis(SubspaceSpec {
                kind: SubspaceKind::Cp2,
                nmax: 3
            })
        );
        let lm = line_bundle_labels(-2, 1);
        assert_eq!(lm, vec![IrrepLabel::new(2, 0), IrrepLabel::new(3, 1)]);
        // Ω^(0,1) ≃ ⊕_{n>=1} V(n,n) ⊕ ⊕_{n>=0} V(n,n+3)
        assert_eq!(form1_slots(1).len(), 8 + 10 + 35);
    }

    #[test]
    fn black_action_examples() {
        let k1k2sq = AlgebraElement::word(&[K1, K2, K2]);
        for (n1, n2) in [(0, 0), (1, 1), (0, 3), (2, 1)] {
            let l = IrrepLabel::new(n1, n2);
            let b = PwBasisVector {
                label: l,
                white: l.basis()[0],
                black: SINGLET,
            };
            let v = PwVector::basis(b);
            let got = black_act(&k1k2sq, &v, q(0.5));
            let want = 0.5f64.powi(n2 as i32 - n1 as i32);
            assert!((got.get(&b) - want).abs() < 1e-14);
            assert_eq!(
                black_act(&AlgebraElement::generator(E1), &v, q(0.5)).support_len(),
                0
            );
        }
    }

    #[test]
    fn casimir_white_equals_black() {
        let c = casimir_element();
        for l in IrrepLabel::up_to_total(3) {
            let want = casimir_value(l, 0.6);
            for w in l.basis() {
                for b in l.basis() {
                    let v = PwVector::basis(PwBasisVector {
                        label: l,
                        white: w,
                        black: b,
                    });
                    let x = white_act(&c, &v, q(0.6));
                    let y = black_act(&c, &v, q(0.6));
                    assert!(x.minus(&y).max_abs() < 1e-10 * want);
                    assert!(x.minus(&v.scaled(want)).max_abs() < 1e-10 * want);
                }
            }
        }
    }

    #[test]
    fn actions_commute() {
        let gens = [E1, E2, F1, F2, K1, K2];
        let l = IrrepLabel::new(2, 1);
        let mut v = PwVector::zero();
        for (i, w) in l.basis().into_iter().enumerate() {
            for (j, b) in l.basis().into_iter().enumerate() {
                v.add(
                    PwBasisVector {
                        label: l,
                        white: w,
                        black: b,
                    },
                    ((i * 7 + j * 3) % 11) as f64 - 5.0,
                );
            }
        }
        for a in gens {
            for b in gens {
                let h = AlgebraElement::generator(a);
                let g = AlgebraElement::generator(b);
                let x = white_act(&h, &black_act(&g, &v, q(0.5)), q(0.5));
                let y = black_act(&g, &white_act(&h, &v, q(0.5)), q(0.5));
                assert!(x.minus(&y).max_abs() < 1e-12);
            }
        }
    }

    #[test]
    fn form1_membership_examples() {
        let n = 2;
        let plus = PwVector::basis(t((n, n), (0, 0, 0), (1, 0, 1)));
        let minus = PwVector::basis(t((n, n), (0, 0, 0), (1, 0, -1)));
        assert!(check_form1_membership(&plus, &minus, q(0.5), 1e-12).is_ok());
        assert!(
            check_form1_membership(&PwVector::zero(), &PwVector::zero(), q(0.5), 1e-12).is_ok()
        );
        assert!(check_form1_membership(&minus, &plus, q(0.5), 1e-12).is_err());
        let plus = PwVector::basis(t((1, 4), (1, 2, 1), (0, 1, 1)));
        let minus = PwVector::basis(t((1, 4), (1, 2, 1), (0, 1, -1)));
        assert!(check_form1_membership(&plus, &minus, q(0.3), 1e-12).is_ok());
    }

    #[test]
    fn doublet_eigenvalues() {
        // K1K2² on black (l1,l2,k) scales by q^{(3/2)(l1-l2) + n2 - n1}.
        let k1k2sq = AlgebraElement::word(&[K1, K2, K2]);
        for l in IrrepLabel::up_to_total(4) {
            for b in l.basis() {
                let v = PwVector::basis(PwBasisVector {
                    label: l,
                    white: l.basis()[0],
                    black: b,
                });
                let e = 1.5 * (b.j1 as f64 - b.j2 as f64) + l.n2 as f64 - l.n1 as f64;
                let got = black_act(&k1k2sq, &v, q(0.5));
                assert!(
                    (got.get(&v.iter().next().unwrap().0.clone()) - 0.5f64.powf(e)).abs() < 1e-12
                );
            }
        }
    }

    #[test]
    fn basis_dump_doubles_halves() {
        let d = t((0, 1), (0, 1, -1), (0, 0, 0)).dump();
        assert_eq!(
            serde_json::to_string(&d).unwrap(),
            r#"{"n1":0,"n2":1,"white":[0,1,-1],"black":[0,0,0]}"#
        );
    }
}
