use nalgebra::Complex;
use rand::Rng;
use rand_distr::StandardNormal;
use serde::Serialize;

use super::{Letter, NcMonomial, NcPoly, RewriteError, RuleSet};
use crate::qarith::LaurentScalar;
use crate::report::{Check, Report};

/// `p_ij = z_i* z_j`.
pub fn p(i: usize, j: usize) -> NcPoly {
    NcPoly::monomial(NcMonomial(vec![Letter::zs(i), Letter::z(j)]))
}

fn qp(n: i32) -> LaurentScalar {
    LaurentScalar::q_pow(n)
}

fn one_minus_q2() -> LaurentScalar {
    &LaurentScalar::one() - &qp(2)
}

fn sign(a: usize, b: usize) -> i32 {
    (a as i32 - b as i32).signum()
}

/// A named identity `lhs = rhs`.
#[derive(Clone, Debug)]
pub struct Identity {
    pub family: &'static str,
    pub indices: Vec<usize>,
    pub lhs: NcPoly,
    pub rhs: NcPoly,
}

impl Identity {
    pub fn name(&self) -> String {
        let idx: Vec<String> = self.indices.iter().map(usize::to_string).collect();
        format!("{} [{}]", self.family, idx.join(","))
    }
}

/// Coefficient conventions for the `p_ii p_ij` and `p_ij p_ji` families.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum FamiliesForm {
    /// `p_ii p_ij` with weights `q^(6-2k)`, and
    /// `p_ij p_ji = (1-q²)(Σ_{l<i} p_jl p_lj - Σ_{l<j} p_il p_li)`.
    AsPrinted,
    /// `p_ii p_ij` with weights `q^(2(i-k))`, and, with `s = sign(i-j)`,
    /// `p_ij p_ji = q^(2s) p_ji p_ij + (1-q²)(q^(2s) Σ_{l<i} p_jl p_lj - Σ_{l<j} p_il p_li)`.
    Derived,
}

/// The five families of commutation relations among the `p_ij`.
pub fn cp2_relations(form: FamiliesForm) -> Vec<Identity> {
    let mut out = Vec::new();
    let r = 1..=3usize;
    for i in r.clone() {
        for j in r.clone() {
            for k in r.clone() {
                if i != j && j != k && i != k {
                    out.push(Identity {
                        family: "p_ii p_jk",
                        indices: vec![i, j, k],
                        lhs: &p(i, i) * &p(j, k),
                        rhs: (&p(j, k) * &p(i, i)).scale(&qp(sign(i, j) + sign(k, i))),
                    });
                }
            }
        }
    }
    for i in r.clone() {
        for j in r.clone().filter(|&j| j != i) {
            let mut rhs = (&p(i, j) * &p(i, i)).scale(&qp(sign(j, i) + 1));
            for k in 1..i {
                let w = match form {
                    FamiliesForm::AsPrinted => 6 - 2 * k as i32,
                    FamiliesForm::Derived => 2 * (i - k) as i32,
                };
                let t = (&p(k, k) * &p(i, j)).scale(&(&one_minus_q2() * &qp(w)));
                rhs = &rhs - &t;
            }
            out.push(Identity {
                family: "p_ii p_ij",
                indices: vec![i, j],
                lhs: &p(i, i) * &p(i, j),
                rhs,
            });
        }
    }
    for i in r.clone() {
        for j in r.clone().filter(|&j| j != i) {
            for k in r.clone().filter(|&k| k != i && k != j) {
                out.push(Identity {
                    family: "p_ij p_ik",
                    indices: vec![i, j, k],
                    lhs: &p(i, j) * &p(i, k),
                    rhs: (&p(i, k) * &p(i, j)).scale(&qp(sign(k, j))),
                });
            }
        }
    }
    for i in r.clone() {
        for j in r.clone() {
            for k in r.clone() {
                if i != j && j != k && i != k {
                    let mut rhs = (&p(j, k) * &p(i, j)).scale(&qp(sign(i, j) + sign(k, j) + 1));
                    for l in 1..j {
                        rhs = &rhs - &(&p(i, l) * &p(l, k)).scale(&one_minus_q2());
                    }
                    out.push(Identity {
                        family: "p_ij p_jk",
                        indices: vec![i, j, k],
                        lhs: &p(i, j) * &p(j, k),
                        rhs,
                    });
                }
            }
        }
    }
    for i in r.clone() {
        for j in r.clone().filter(|&j| j != i) {
            let s2 = match form {
                FamiliesForm::AsPrinted => 0,
                FamiliesForm::Derived => 2 * sign(i, j),
            };
            let mut sum = NcPoly::zero();
            for l in 1..i {
                sum = &sum + &(&p(j, l) * &p(l, j)).scale(&qp(s2));
            }
            for l in 1..j {
                sum = &sum - &(&p(i, l) * &p(l, i));
            }
            let mut rhs = sum.scale(&one_minus_q2());
            if form == FamiliesForm::Derived {
                rhs = &rhs + &(&p(j, i) * &p(i, j)).scale(&qp(s2));
            }
            out.push(Identity {
                family: "p_ij p_ji",
                indices: vec![i, j],
                lhs: &p(i, j) * &p(j, i),
                rhs,
            });
        }
    }
    out
}

/// `Σ_k p_jk p_kl = p_jl` for all `j, l`.
pub fn projector_identities() -> Vec<Identity> {
    let mut out = Vec::new();
    for j in 1..=3 {
        for l in 1..=3 {
            let mut lhs = NcPoly::zero();
            for k in 1..=3 {
                lhs = &lhs + &(&p(j, k) * &p(k, l));
            }
            out.push(Identity {
                family: "P² = P",
                indices: vec![j, l],
                lhs,
                rhs: p(j, l),
            });
        }
    }
    out
}

/// `q⁴p11 + q²p22 + p33 = 1`.
pub fn q_trace_identity() -> Identity {
    let lhs = &(&p(1, 1).scale(&qp(4)) + &p(2, 2).scale(&qp(2))) + &p(3, 3);
    Identity {
        family: "Tr_q(P) = 1",
        indices: vec![],
        lhs,
        rhs: NcPoly::one(),
    }
}

/// Every relation family, the projector identities and the q-trace,
/// verified by exact normal forms.
pub fn verify_cp2_relations(rules: &RuleSet, form: FamiliesForm) -> Result<Report, RewriteError> {
    let mut r = Report::new(format!("CP²_q relations by rewriting ({form:?})"));
    let all = cp2_relations(form)
        .into_iter()
        .chain(projector_identities())
        .chain(std::iter::once(q_trace_identity()));
    for id in all {
        let ok = rules.verify_identity(&id.lhs, &id.rhs)?;
        r.push(Check::flag(id.name(), ok));
    }
    Ok(r)
}

/// A uniformly random point of the unit sphere in `ℂ³`.
pub fn random_sphere_point(rng: &mut impl Rng) -> [Complex<f64>; 3] {
    let mut z: [Complex<f64>; 3] = std::array::from_fn(|_| {
        Complex::new(rng.sample(StandardNormal), rng.sample(StandardNormal))
    });
    let n = z.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt();
    for c in &mut z {
        *c /= n;
    }
    z
}

/// Commutative evaluation at `q = 1`, `z_i* -> conj(z_i)`.
pub fn evaluate_classical(f: &NcPoly, z: &[Complex<f64>; 3]) -> Complex<f64> {
    f.terms()
        .map(|(m, c)| {
            let v = m.0.iter().fold(Complex::new(1.0, 0.0), |acc, l| {
                let x = z[l.index() - 1];
                acc * if l.is_star() { x.conj() } else { x }
            });
            v * c.eval(1.0)
        })
        .sum()
}

/// Both sides of each identity agree at `points` random sphere points.
pub fn verify_q1_cross_check(
    ids: &[Identity],
    points: usize,
    rng: &mut impl Rng,
    tol: f64,
) -> Report {
    let mut r = Report::new(format!("q = 1 evaluation at {points} sphere points"));
    let zs: Vec<_> = (0..points).map(|_| random_sphere_point(rng)).collect();
    for id in ids {
        let worst = zs
            .iter()
            .map(|z| (evaluate_classical(&id.lhs, z) - evaluate_classical(&id.rhs, z)).norm())
            .fold(0.0, f64::max);
        r.record(&id.name(), worst, tol);
    }
    r
}
