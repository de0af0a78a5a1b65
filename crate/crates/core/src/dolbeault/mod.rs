//! Antiholomorphic forms `Ω^(0,0) ⊕ Ω^(0,1) ⊕ Ω^(0,2)` on `CP²_q` in the
//! Peter–Weyl block model, with `∂̄`, `∂̄†` and the inner product.
//!
//! Degree-1 forms are pairs `(v+, v-)` of Peter–Weyl vectors. Every operator
//! here acts by black actions, so it commutes with the white action and is
//! block diagonal in `(family, white triple)`.

mod blocks;

use nalgebra::DVector;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use thiserror::Error;

use crate::irreps::GeneratorName;
use crate::peterweyl::{
    black_act, check_form1_membership, white_act, MembershipViolation, PwVector,
};
use crate::qarith::QValue;
use crate::report::Report;
use crate::ualg::{x_element, x_star_element, y_element, y_star_element, AlgebraElement};

pub use blocks::{block_structure, BlockDump, BlockIndex, Family, FormBlock, Slot};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum DolbeaultError {
    #[error("degree-1 image leaves Ω^(0,1): {0}")]
    NotAForm(MembershipViolation),
    #[error("degree-{degree} image leaves its space: stray weight {residual:.3e}")]
    StrayComponent { degree: u8, residual: f64 },
}

/// A graded form `(a, (v+, v-), b)`.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct FormVector {
    pub deg0: PwVector,
    pub plus: PwVector,
    pub minus: PwVector,
    pub deg2: PwVector,
}

impl FormVector {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn from_deg0(a: PwVector) -> Self {
        Self {
            deg0: a,
            ..Self::default()
        }
    }

    pub fn from_deg1(plus: PwVector, minus: PwVector) -> Self {
        Self {
            plus,
            minus,
            ..Self::default()
        }
    }

    pub fn from_deg2(b: PwVector) -> Self {
        Self {
            deg2: b,
            ..Self::default()
        }
    }

    /// Component of degree `d` alone.
    pub fn degree_part(&self, d: u8) -> FormVector {
        match d {
            0 => Self::from_deg0(self.deg0.clone()),
            1 => Self::from_deg1(self.plus.clone(), self.minus.clone()),
            _ => Self::from_deg2(self.deg2.clone()),
        }
    }

    pub fn axpy(&self, a: f64, o: &FormVector) -> FormVector {
        FormVector {
            deg0: self.deg0.axpy(a, &o.deg0),
            plus: self.plus.axpy(a, &o.plus),
            minus: self.minus.axpy(a, &o.minus),
            deg2: self.deg2.axpy(a, &o.deg2),
        }
    }

    pub fn plus_form(&self, o: &FormVector) -> FormVector {
        self.axpy(1.0, o)
    }

    pub fn minus_form(&self, o: &FormVector) -> FormVector {
        self.axpy(-1.0, o)
    }

    pub fn scaled(&self, c: f64) -> FormVector {
        FormVector::zero().axpy(c, self)
    }

    pub fn max_abs(&self) -> f64 {
        [&self.deg0, &self.plus, &self.minus, &self.deg2]
            .iter()
            .map(|v| v.max_abs())
            .fold(0.0, f64::max)
    }

    pub fn norm(&self) -> f64 {
        inner_product(self, self).sqrt()
    }

    /// The grading `γ = +1` on degrees 0 and 2, `-1` on degree 1.
    pub fn grading(&self) -> FormVector {
        FormVector {
            deg0: self.deg0.clone(),
            plus: self.plus.scaled(-1.0),
            minus: self.minus.scaled(-1.0),
            deg2: self.deg2.clone(),
        }
    }

    /// White action on every component.
    pub fn white(&self, h: &AlgebraElement, q: QValue) -> FormVector {
        FormVector {
            deg0: white_act(h, &self.deg0, q),
            plus: white_act(h, &self.plus, q),
            minus: white_act(h, &self.minus, q),
            deg2: white_act(h, &self.deg2, q),
        }
    }

    /// Black action on every component.
    pub fn black(&self, h: &AlgebraElement, q: QValue) -> FormVector {
        FormVector {
            deg0: black_act(h, &self.deg0, q),
            plus: black_act(h, &self.plus, q),
            minus: black_act(h, &self.minus, q),
            deg2: black_act(h, &self.deg2, q),
        }
    }
}

/// `⟨ω1, ω2⟩ = φ(a1* a2) + φ(v1+* v2+ + v1-* v2-) + φ(b1* b2)`, Euclidean in
/// the orthonormal basis.
pub fn inner_product(f: &FormVector, g: &FormVector) -> f64 {
    f.deg0.inner(&g.deg0) + f.plus.inner(&g.plus) + f.minus.inner(&g.minus) + f.deg2.inner(&g.deg2)
}

/// The named elements used by `∂̄` and `∂̄†`.
#[derive(Clone, Debug)]
pub struct DolbeaultElements {
    pub x: AlgebraElement,
    pub x_star: AlgebraElement,
    pub y: AlgebraElement,
    pub y_star: AlgebraElement,
    pub e2: AlgebraElement,
    pub f2: AlgebraElement,
}

impl DolbeaultElements {
    pub fn new() -> Self {
        Self {
            x: x_element(),
            x_star: x_star_element(),
            y: y_element(),
            y_star: y_star_element(),
            e2: AlgebraElement::generator(GeneratorName::E2),
            f2: AlgebraElement::generator(GeneratorName::F2),
        }
    }
}

impl Default for DolbeaultElements {
    fn default() -> Self {
        Self::new()
    }
}

fn elements() -> &'static DolbeaultElements {
    static EL: std::sync::OnceLock<DolbeaultElements> = std::sync::OnceLock::new();
    EL.get_or_init(DolbeaultElements::new)
}

/// `∂̄a = (X* ▶ a, E2 ▶ a)`, `∂̄v = -E2 ▶ v+ - Y ▶ v-`.
pub fn dbar(f: &FormVector, q: QValue) -> FormVector {
    let el = elements();
    FormVector {
        deg0: PwVector::zero(),
        plus: black_act(&el.x_star, &f.deg0, q),
        minus: black_act(&el.e2, &f.deg0, q),
        deg2: black_act(&el.e2, &f.plus, q)
            .plus(&black_act(&el.y, &f.minus, q))
            .scaled(-1.0),
    }
}

/// `∂̄†b = (-F2 ▶ b, -Y* ▶ b)`, `∂̄†v = X ▶ v+ + F2 ▶ v-`.
pub fn dbar_dag(f: &FormVector, q: QValue) -> FormVector {
    let el = elements();
    FormVector {
        deg0: black_act(&el.x, &f.plus, q).plus(&black_act(&el.f2, &f.minus, q)),
        plus: black_act(&el.f2, &f.deg2, q).scaled(-1.0),
        minus: black_act(&el.y_star, &f.deg2, q).scaled(-1.0),
        deg2: PwVector::zero(),
    }
}

/// Largest coefficient outside the allowed labels of each degree.
fn stray(f: &FormVector) -> Option<(u8, f64)> {
    let bad0 = f
        .deg0
        .iter()
        .filter(|(b, _)| {
            b.label.n1 != b.label.n2 || b.black != crate::irreps::GtTriple::new(0, 0, 0)
        })
        .fold(0.0f64, |m, (_, x)| m.max(x.abs()));
    let bad2 = f
        .deg2
        .iter()
        .filter(|(b, _)| {
            b.label.n2 != b.label.n1 + 3 || b.black != crate::irreps::GtTriple::new(0, 0, 0)
        })
        .fold(0.0f64, |m, (_, x)| m.max(x.abs()));
    if bad0 > 0.0 {
        Some((0, bad0))
    } else if bad2 > 0.0 {
        Some((2, bad2))
    } else {
        None
    }
}

/// Checks that `f` is a well-formed graded form within `tol`.
pub fn check_form(f: &FormVector, q: QValue, tol: f64) -> Result<(), DolbeaultError> {
    let scale = f.max_abs().max(1.0);
    if let Some((degree, residual)) = stray(f) {
        if residual > tol * scale {
            return Err(DolbeaultError::StrayComponent { degree, residual });
        }
    }
    check_form1_membership(&f.plus, &f.minus, q, tol).map_err(DolbeaultError::NotAForm)
}

/// `∂̄` with its image validated.
pub fn dbar_checked(f: &FormVector, q: QValue, tol: f64) -> Result<FormVector, DolbeaultError> {
    let g = dbar(f, q);
    check_form(&g, q, tol)?;
    Ok(g)
}

/// `∂̄†` with its image validated.
pub fn dbar_dag_checked(f: &FormVector, q: QValue, tol: f64) -> Result<FormVector, DolbeaultError> {
    let g = dbar_dag(f, q);
    check_form(&g, q, tol)?;
    Ok(g)
}

/// Random form with uniform coefficients on the slot basis up to `nmax`.
pub fn random_form(nmax: u32, rng: &mut impl Rng) -> FormVector {
    let mut f = FormVector::zero();
    for block in block_structure(nmax) {
        for slot in &block.slots {
            f = f.axpy(rng.random_range(-1.0..1.0), &slot.form());
        }
    }
    f
}

/// Random form of a single degree.
pub fn random_form_of_degree(nmax: u32, degree: u8, rng: &mut impl Rng) -> FormVector {
    random_form(nmax, rng).degree_part(degree)
}

fn rel(diff: &FormVector, scale: f64) -> f64 {
    diff.max_abs() / scale.max(1.0)
}

/// Options for [`verify_complex`].
#[derive(Clone, Copy, Debug, Serialize)]
pub struct ComplexCheckConfig {
    pub nmax: u32,
    pub tol: f64,
    /// Random pairs for adjointness.
    pub pairs: usize,
    /// Random vectors per generator for equivariance.
    pub samples: usize,
    pub seed: u64,
}

impl ComplexCheckConfig {
    pub fn new(nmax: u32) -> Self {
        Self {
            nmax,
            tol: 1e-10,
            pairs: 200,
            samples: 3,
            seed: 7,
        }
    }
}

/// `∂̄² = 0`, `(∂̄†)² = 0` on every slot vector, well-definedness of the
/// images, adjointness on random pairs, and equivariance under the white
/// action.
pub fn verify_complex(cfg: &ComplexCheckConfig, q: QValue) -> Report {
    let mut r = Report::new(format!("Dolbeault complex, nmax = {}, q = {q}", cfg.nmax));
    let tol = cfg.tol;
    for block in block_structure(cfg.nmax) {
        for slot in &block.slots {
            let f = slot.form();
            let d = dbar(&f, q);
            let dd = dbar(&d, q);
            r.record("∂̄² = 0", rel(&dd, d.max_abs()), tol);
            let s = dbar_dag(&f, q);
            let ss = dbar_dag(&s, q);
            r.record("(∂̄†)² = 0", rel(&ss, s.max_abs()), tol);
            let ok = check_form(&d, q, tol).is_ok() && check_form(&s, q, tol).is_ok();
            r.push_flag_once("∂̄ and ∂̄† land in the form spaces", ok);
        }
    }

    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let fs: Vec<FormVector> = (0..cfg.pairs.min(8))
        .map(|_| random_form(cfg.nmax, &mut rng))
        .collect();
    let gs: Vec<FormVector> = (0..cfg.pairs.min(8))
        .map(|_| random_form(cfg.nmax, &mut rng))
        .collect();
    let dfs: Vec<FormVector> = fs.iter().map(|f| dbar(f, q)).collect();
    let dgs: Vec<FormVector> = gs.iter().map(|g| dbar_dag(g, q)).collect();
    // Each pair (f_i, g_j) is an independent test of ⟨∂̄f, g⟩ = ⟨f, ∂̄†g⟩.
    let mut count = 0;
    'outer: for (f, df) in fs.iter().zip(&dfs) {
        for (g, dg) in gs.iter().zip(&dgs) {
            if count == cfg.pairs {
                break 'outer;
            }
            let lhs = inner_product(df, g);
            let rhs = inner_product(f, dg);
            let scale = df.norm() * g.norm() + f.norm() * dg.norm();
            r.record(
                "⟨∂̄f, g⟩ = ⟨f, ∂̄†g⟩",
                (lhs - rhs).abs() / scale.max(1.0),
                tol,
            );
            count += 1;
        }
    }

    use GeneratorName::*;
    for gen in [E1, F1, E2, F2, K1, K2] {
        let h = AlgebraElement::generator(gen);
        for f in fs.iter().take(cfg.samples) {
            let a = dbar(f, q).white(&h, q);
            let b = dbar(&f.white(&h, q), q);
            r.record(
                &format!("{gen} ▷ ∂̄ = ∂̄ {gen} ▷"),
                rel(&a.minus_form(&b), a.max_abs()),
                tol,
            );
            let a = dbar_dag(f, q).white(&h, q);
            let b = dbar_dag(&f.white(&h, q), q);
            r.record(
                &format!("{gen} ▷ ∂̄† = ∂̄† {gen} ▷"),
                rel(&a.minus_form(&b), a.max_abs()),
                tol,
            );
        }
    }
    r
}

trait FlagOnce {
    fn push_flag_once(&mut self, name: &str, ok: bool);
}

impl FlagOnce for Report {
    fn push_flag_once(&mut self, name: &str, ok: bool) {
        self.record(name, if ok { 0.0 } else { 1.0 }, 0.0);
    }
}

/// Coefficients of `f` in the given orthonormal slot basis.
pub fn coordinates(f: &FormVector, slots: &[Slot]) -> DVector<f64> {
    DVector::from_iterator(
        slots.len(),
        slots.iter().map(|s| inner_product(&s.form(), f)),
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::irreps::{GtTriple, IrrepLabel};
    use crate::peterweyl::PwBasisVector;

    fn q(v: f64) -> QValue {
        QValue::new(v).unwrap()
    }

    fn t(l: (u32, u32), w: GtTriple, b: (u32, u32, i32)) -> PwVector {
        PwVector::basis(
            PwBasisVector::new(IrrepLabel::new(l.0, l.1), w, GtTriple::new(b.0, b.1, b.2)).unwrap(),
        )
    }

    #[test]
    fn constants_are_closed() {
        let c = FormVector::from_deg0(t((0, 0), GtTriple::new(0, 0, 0), (0, 0, 0)));
        assert_eq!(dbar(&c, q(0.5)).max_abs(), 0.0);
        assert_eq!(dbar_dag(&c, q(0.5)).max_abs(), 0.0);
    }

    #[test]
    fn dbar_on_diag_block() {
        let qv = 0.5;
        for n in 1..=3u32 {
            let w = IrrepLabel::new(n, n).basis()[1];
            let a = FormVector::from_deg0(t((n, n), w, (0, 0, 0)));
            let d = dbar_checked(&a, q(qv), 1e-12).unwrap();
            let qn = |x: f64| crate::qarith::qnum(x, qv);
            let want = (qn(n as f64) * qn(n as f64 + 2.0) / qn(2.0)).sqrt();
            assert!((d.plus.get(&d.plus.iter().next().unwrap().0.clone()) - want).abs() < 1e-12);
            assert!(d
                .minus
                .iter()
                .all(|(b, x)| b.black == GtTriple::new(1, 0, -1) && (x - want).abs() < 1e-12));
        }
    }

    #[test]
    fn inner_product_examples() {
        let w = GtTriple::new(0, 0, 0);
        let a = FormVector::from_deg0(t((1, 1), w, (0, 0, 0)));
        assert_eq!(inner_product(&a, &a), 1.0);
        let v = FormVector::from_deg1(t((1, 1), w, (1, 0, 1)), t((1, 1), w, (1, 0, -1)));
        assert_eq!(inner_product(&a, &v), 0.0);
        assert_eq!(inner_product(&v, &v), 2.0);
    }

    #[test]
    fn complex_small() {
        let mut cfg = ComplexCheckConfig::new(2);
        cfg.pairs = 20;
        let r = verify_complex(&cfg, q(0.5));
        assert!(r.all_passed(), "{r}");
    }

    #[test]
    fn zero_form_equivariance() {
        let z = FormVector::zero();
        let h = AlgebraElement::generator(GeneratorName::E2);
        assert_eq!(dbar(&z.white(&h, q(0.5)), q(0.5)).max_abs(), 0.0);
    }

    #[test]
    fn swapped_doublet_detected() {
        let w = GtTriple::new(0, 0, 0);
        let bad = FormVector::from_deg1(t((1, 1), w, (1, 0, -1)), t((1, 1), w, (1, 0, 1)));
        assert!(matches!(
            check_form(&bad, q(0.5), 1e-12),
            Err(DolbeaultError::NotAForm(_))
        ));
    }
}
