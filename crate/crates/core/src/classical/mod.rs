//! Classical `CP²` at `q = 1`: random points of `SU(3)`, the matrices
//! `P^(j)` identifying equivariant pairs with antiholomorphic 1-forms,
//! transition functions and the local form of `∂̄`.

use nalgebra::{Complex, DMatrix, Matrix2, Matrix3, Vector3};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use serde::Serialize;
use thiserror::Error;

use crate::irreps::{float_matrix, GeneratorName, GtTriple, IrrepLabel};
use crate::qarith::QValue;
use crate::report::Report;

pub type C64 = Complex<f64>;

/// Charts with `|z_j|` below this are skipped.
pub const CHART_THRESHOLD: f64 = 0.1;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ClassicalError {
    #[error("chart {chart} is not active at this point (|z_j| = {modulus:.3})")]
    InactiveChart { chart: usize, modulus: f64 },
    #[error("chart index {0} outside 1..=3")]
    BadChart(usize),
    #[error("finite-difference step {0:e} outside [1e-8, 1e-2]")]
    BadStep(f64),
}

fn c(re: f64) -> C64 {
    Complex::new(re, 0.0)
}

/// A point of `SU(3)`; `u^k_j(g)` is row `k`, column `j`.
#[derive(Clone, Debug, PartialEq)]
pub struct GroupSample {
    pub g: Matrix3<C64>,
}

impl GroupSample {
    pub fn identity() -> Self {
        Self {
            g: Matrix3::identity(),
        }
    }

    /// `u^k_j` with 1-based indices.
    pub fn u(&self, k: usize, j: usize) -> C64 {
        self.g[(k - 1, j - 1)]
    }

    /// `z_j = u^3_j`.
    pub fn z(&self) -> [C64; 3] {
        [self.u(3, 1), self.u(3, 2), self.u(3, 3)]
    }

    pub fn unitarity_residual(&self) -> f64 {
        (self.g * self.g.adjoint() - Matrix3::identity())
            .iter()
            .map(|x| x.norm())
            .fold(0.0, f64::max)
    }

    pub fn det_residual(&self) -> f64 {
        (self.g.determinant() - c(1.0)).norm()
    }
}

/// Haar-random `SU(3)` element: QR of a complex Gaussian matrix with the
/// phases of `R` and of the determinant removed. Seed 0 gives the identity.
pub fn sample_su3(seed: u64) -> GroupSample {
    if seed == 0 {
        return GroupSample::identity();
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    sample_su3_with(&mut rng)
}

pub fn sample_su3_with(rng: &mut impl Rng) -> GroupSample {
    let m = Matrix3::from_fn(|_, _| {
        Complex::new(rng.sample(StandardNormal), rng.sample(StandardNormal))
    });
    let qr = m.qr();
    let (mut q, r) = qr.unpack();
    for i in 0..3 {
        let d = r[(i, i)];
        let ph = if d.norm() > 0.0 { d / d.norm() } else { c(1.0) };
        let mut col = q.column_mut(i);
        col *= ph;
    }
    let det = q.determinant();
    // spread the inverse determinant phase over the rows
    let fix = (det / det.norm()).powf(1.0 / 3.0).conj();
    q *= fix;
    GroupSample { g: q }
}

/// `p_kl = z̄_k z_l`.
pub fn projector(z: &[C64; 3]) -> Matrix3<C64> {
    Matrix3::from_fn(|k, l| z[k].conj() * z[l])
}

/// `{k, l} = {1,2,3} \ {j}` with `k < l`.
fn others(j: usize) -> (usize, usize) {
    match j {
        1 => (2, 3),
        2 => (1, 3),
        _ => (1, 2),
    }
}

/// `P^(j) = z̄_j [[u¹_k, u¹_l], [-u²_k, -u²_l]]`.
pub fn big_p(g: &GroupSample, j: usize) -> Matrix2<C64> {
    let (k, l) = others(j);
    let zb = g.u(3, j).conj();
    Matrix2::new(g.u(1, k), g.u(1, l), -g.u(2, k), -g.u(2, l)) * zb
}

/// The transition matrix `g_jk` on `U_j ∩ U_k`, `j ≠ k`.
pub fn transition(j: usize, k: usize, z: &[C64; 3]) -> Matrix2<C64> {
    let zb = |i: usize| z[i - 1].conj();
    let direct = |a: usize| -> Matrix2<C64> {
        match a {
            1 => Matrix2::new(-zb(2), c(0.0), -zb(3), zb(1)) * (zb(2) / (zb(1) * zb(1))),
            2 => Matrix2::new(zb(2), -zb(1), c(0.0), -zb(3)) * (zb(3) / (zb(2) * zb(2))),
            _ => Matrix2::new(c(0.0), -zb(1), zb(3), -zb(2)) * (zb(1) / (zb(3) * zb(3))),
        }
    };
    match (j, k) {
        (1, 2) => direct(1),
        (2, 3) => direct(2),
        (3, 1) => direct(3),
        (2, 1) => direct(1).try_inverse().expect("active overlap"),
        (3, 2) => direct(2).try_inverse().expect("active overlap"),
        (1, 3) => direct(3).try_inverse().expect("active overlap"),
        _ => Matrix2::identity(),
    }
}

/// Affine coordinates `(Z^(j)_1, Z^(j)_2)`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ChartPoint {
    pub chart: usize,
    pub coords: [C64; 2],
}

impl ChartPoint {
    pub fn from_sphere(chart: usize, z: &[C64; 3]) -> Result<Self, ClassicalError> {
        if !(1..=3).contains(&chart) {
            return Err(ClassicalError::BadChart(chart));
        }
        let zj = z[chart - 1];
        if zj.norm() <= CHART_THRESHOLD {
            return Err(ClassicalError::InactiveChart {
                chart,
                modulus: zj.norm(),
            });
        }
        let (k, l) = others(chart);
        Ok(Self {
            chart,
            coords: [z[k - 1] / zj, z[l - 1] / zj],
        })
    }

    /// Unit representative with `x_j > 0`.
    pub fn to_sphere(&self) -> [C64; 3] {
        let (k, l) = others(self.chart);
        let mut x = [c(0.0); 3];
        x[self.chart - 1] = c(1.0);
        x[k - 1] = self.coords[0];
        x[l - 1] = self.coords[1];
        let n = x.iter().map(|v| v.norm_sqr()).sum::<f64>().sqrt();
        x.map(|v| v / n)
    }
}

/// A polynomial in the entries `p_kl`.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct PPolynomial {
    pub terms: Vec<(C64, Vec<(usize, usize)>)>,
}

impl PPolynomial {
    pub fn constant(x: C64) -> Self {
        Self {
            terms: vec![(x, vec![])],
        }
    }

    pub fn entry(k: usize, l: usize) -> Self {
        Self {
            terms: vec![(c(1.0), vec![(k, l)])],
        }
    }

    pub fn plus(mut self, o: PPolynomial) -> Self {
        self.terms.extend(o.terms);
        self
    }

    pub fn times(&self, o: &PPolynomial) -> Self {
        let mut terms = Vec::new();
        for (a, x) in &self.terms {
            for (b, y) in &o.terms {
                terms.push((a * b, x.iter().chain(y).copied().collect()));
            }
        }
        Self { terms }
    }

    pub fn eval(&self, p: &Matrix3<C64>) -> C64 {
        self.terms
            .iter()
            .map(|(x, f)| f.iter().fold(*x, |acc, &(k, l)| acc * p[(k - 1, l - 1)]))
            .sum()
    }
}

/// `p_kl` as a holomorphic function of the matrix entries: `z̄_k` is the
/// cofactor `(u¹ × u²)_k`, which equals the conjugate on `SU(3)`.
fn p_holomorphic(g: &Matrix3<C64>) -> Matrix3<C64> {
    let r1 = Vector3::new(g[(0, 0)], g[(0, 1)], g[(0, 2)]);
    let r2 = Vector3::new(g[(1, 0)], g[(1, 1)], g[(1, 2)]);
    let zb = r1.cross(&r2);
    Matrix3::from_fn(|k, l| zb[k] * g[(2, l)])
}

/// Fundamental matrices of the classical generators.
pub fn sigma(gen: ClassicalGenerator) -> Matrix3<f64> {
    let mut m = Matrix3::zeros();
    match gen {
        ClassicalGenerator::H1 => m.set_diagonal(&Vector3::new(-1.0, 1.0, 0.0)),
        ClassicalGenerator::H2 => m.set_diagonal(&Vector3::new(0.0, -1.0, 1.0)),
        ClassicalGenerator::E1 => m[(1, 0)] = 1.0,
        ClassicalGenerator::E2 => m[(2, 1)] = 1.0,
        ClassicalGenerator::F1 => m[(0, 1)] = 1.0,
        ClassicalGenerator::F2 => m[(1, 2)] = 1.0,
    }
    m
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum ClassicalGenerator {
    H1,
    H2,
    E1,
    E2,
    F1,
    F2,
}

/// `(X ▶ a)(g) = d/dt a(exp(t σ(X)ᵀ) g)` by central differences, `σ(X)`
/// nilpotent or not.
fn black_derivative(a: &PPolynomial, x: &Matrix3<f64>, g: &Matrix3<C64>, h: f64) -> C64 {
    let b: Matrix3<C64> = x.transpose().map(c);
    let flow = |t: f64| {
        let tb = b * c(t);
        let e = Matrix3::identity() + tb + tb * tb * c(0.5) + tb * tb * tb * c(1.0 / 6.0);
        e * g
    };
    (a.eval(&p_holomorphic(&flow(h))) - a.eval(&p_holomorphic(&flow(-h)))) / c(2.0 * h)
}

/// `∂a/∂Z̄_m` in chart coordinates by central differences.
fn wirtinger_bar(a: &PPolynomial, pt: &ChartPoint, m: usize, h: f64) -> C64 {
    let f = |d: C64| {
        let mut q = *pt;
        q.coords[m] += d;
        a.eval(&projector(&q.to_sphere()))
    };
    let dx = (f(c(h)) - f(c(-h))) / c(2.0 * h);
    let dy = (f(Complex::new(0.0, h)) - f(Complex::new(0.0, -h))) / c(2.0 * h);
    (dx + C64::i() * dy) * c(0.5)
}

/// Compares `([E1,E2] ▶ a, E2 ▶ a) P^(j)` with `(∂a/∂Z̄_1, ∂a/∂Z̄_2)` on
/// chart `j`.
pub fn dbar_local_check(
    a: &PPolynomial,
    g: &GroupSample,
    chart: usize,
    h: f64,
    tol: f64,
) -> Result<Report, ClassicalError> {
    if !(1e-8..=1e-2).contains(&h) {
        return Err(ClassicalError::BadStep(h));
    }
    let pt = ChartPoint::from_sphere(chart, &g.z())?;
    let e1 = sigma(ClassicalGenerator::E1);
    let e2 = sigma(ClassicalGenerator::E2);
    let comm = e1 * e2 - e2 * e1;
    let v = [
        black_derivative(a, &comm, &g.g, h),
        black_derivative(a, &e2, &g.g, h),
    ];
    let pj = big_p(g, chart);
    let lhs = [
        v[0] * pj[(0, 0)] + v[1] * pj[(1, 0)],
        v[0] * pj[(0, 1)] + v[1] * pj[(1, 1)],
    ];
    let rhs = [wirtinger_bar(a, &pt, 0, h), wirtinger_bar(a, &pt, 1, h)];
    let mut r = Report::new(format!("local ∂̄ on chart {chart}, h = {h:e}"));
    for m in 0..2 {
        r.record(
            &format!("component {}", m + 1),
            (lhs[m] - rhs[m]).norm(),
            tol,
        );
    }
    Ok(r)
}

fn max_entry<const R: usize, const S: usize>(
    m: &nalgebra::Matrix<
        C64,
        nalgebra::Const<R>,
        nalgebra::Const<S>,
        nalgebra::ArrayStorage<C64, R, S>,
    >,
) -> f64 {
    m.iter().map(|x| x.norm()).fold(0.0, f64::max)
}

/// Transition, determinant, row-orthogonality and projector identities at
/// one sample.
pub fn transition_check(g: &GroupSample, tol: f64) -> Report {
    let mut r = Report::new("transition functions".to_string());
    let z = g.z();
    let active: Vec<usize> = (1..=3)
        .filter(|&j| z[j - 1].norm() > CHART_THRESHOLD)
        .collect();
    r.record("g g† = 1", g.unitarity_residual(), tol);
    r.record("det g = 1", g.det_residual(), tol);
    for &j in &active {
        let sign = if j % 2 == 0 { 1.0 } else { -1.0 };
        let zb = z[j - 1].conj();
        r.record(
            "det P(j) = (-1)^j z̄_j³",
            (big_p(g, j).determinant() - zb * zb * zb * c(sign)).norm(),
            tol,
        );
        for &k in active.iter().filter(|&&k| k != j) {
            let gjk = transition(j, k, &z);
            r.record(
                "P(k) = P(j) g_jk",
                max_entry(&(big_p(g, j) * gjk - big_p(g, k))),
                tol,
            );
            let back = transition(k, j, &z);
            r.record(
                "g_jk g_kj = 1",
                max_entry(&(gjk * back - Matrix2::identity())),
                tol,
            );
        }
    }
    for j in 1..=2 {
        let s: C64 = (1..=3).map(|k| z[k - 1].conj() * g.u(j, k)).sum();
        r.record("Σ_k z̄_k u^j_k = 0", s.norm(), tol);
    }
    let p = projector(&z);
    r.record("p² = p", max_entry(&(p * p - p)), tol);
    r.record("p† = p", max_entry(&(p.adjoint() - p)), tol);
    r.record("tr p = 1", (p.trace() - c(1.0)).norm(), tol);
    r
}

/// Serre-presentation relations of the classical `σ` and the `q -> 1`
/// limit of the deformed fundamental representation.
pub fn classical_rep_check(tol: f64) -> Report {
    use ClassicalGenerator::*;
    let mut r = Report::new("classical fundamental representation".to_string());
    let s = sigma;
    let br = |a: Matrix3<f64>, b: Matrix3<f64>| a * b - b * a;
    let res = |m: Matrix3<f64>| m.amax();
    for (e, f, h, hj, ej, fj) in [(E1, F1, H1, H2, E2, F2), (E2, F2, H2, H1, E1, F1)] {
        r.record("[H_k, E_k] = 2E_k", res(br(s(h), s(e)) - s(e) * 2.0), tol);
        r.record("[H_k, F_k] = -2F_k", res(br(s(h), s(f)) + s(f) * 2.0), tol);
        r.record("[E_k, F_k] = H_k", res(br(s(e), s(f)) - s(h)), tol);
        r.record("[H_k, H_j] = 0", res(br(s(h), s(hj))), tol);
        r.record("[E_k, F_j] = 0", res(br(s(e), s(fj))), tol);
        r.record("[H_k, E_j] = -E_j", res(br(s(h), s(ej)) + s(ej)), tol);
        r.record("[H_k, F_j] = F_j", res(br(s(h), s(fj)) - s(fj)), tol);
        r.record("(ad E_k)²(E_j) = 0", res(br(s(e), br(s(e), s(ej)))), tol);
        r.record("(ad F_k)²(F_j) = 0", res(br(s(f), br(s(f), s(fj)))), tol);
        r.record("(ad E_k)²(F_j) = 0", res(br(s(e), br(s(e), s(fj)))), tol);
        r.record("(ad F_k)²(E_j) = 0", res(br(s(f), br(s(f), s(ej)))), tol);
    }
    let lim = deformed_fundamental_limit(0.999);
    for (gen, name) in [(E1, "E1"), (E2, "E2"), (F1, "F1"), (F2, "F2")] {
        let m = &lim[&gen_key(gen)];
        r.record(
            &format!("deformed {name} at q = 0.999 ≈ σ({name})"),
            (m - s(gen)).amax(),
            1e-3,
        );
    }
    r
}

fn gen_key(g: ClassicalGenerator) -> &'static str {
    match g {
        ClassicalGenerator::E1 => "E1",
        ClassicalGenerator::E2 => "E2",
        ClassicalGenerator::F1 => "F1",
        ClassicalGenerator::F2 => "F2",
        ClassicalGenerator::H1 => "H1",
        ClassicalGenerator::H2 => "H2",
    }
}

/// Deformed `V(0,1)` matrices in the basis `(|-½>, |+½>, |000>)`.
pub fn deformed_fundamental_limit(q: f64) -> std::collections::HashMap<&'static str, Matrix3<f64>> {
    let l = IrrepLabel::new(0, 1);
    let order = [
        GtTriple::new(0, 1, -1),
        GtTriple::new(0, 1, 1),
        GtTriple::new(0, 0, 0),
    ];
    let idx: Vec<usize> = order
        .iter()
        .map(|t| l.index_of(*t).expect("fundamental"))
        .collect();
    let qv = QValue::new(q).expect("0 < q < 1");
    let mut out = std::collections::HashMap::new();
    for (g, key) in [
        (GeneratorName::E1, "E1"),
        (GeneratorName::E2, "E2"),
        (GeneratorName::F1, "F1"),
        (GeneratorName::F2, "F2"),
    ] {
        let d: DMatrix<f64> = float_matrix(l, g, qv).to_dense();
        out.insert(key, Matrix3::from_fn(|i, j| d[(idx[i], idx[j])]));
    }
    out
}

/// Max residual per identity family over `samples` random points.
#[derive(Clone, Debug, Serialize)]
pub struct ClassicalSummary {
    pub samples: usize,
    pub seed: u64,
    pub report: Report,
}

pub fn run_classical_check(samples: usize, seed: u64, tol: f64, fd_tol: f64) -> ClassicalSummary {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut report = Report::new(format!("classical checks, {samples} samples, seed {seed}"));
    let a_list = [
        ("p11", PPolynomial::entry(1, 1)),
        ("p12", PPolynomial::entry(1, 2)),
        (
            "p23 p31",
            PPolynomial::entry(2, 3).times(&PPolynomial::entry(3, 1)),
        ),
    ];
    for _ in 0..samples {
        let g = sample_su3_with(&mut rng);
        report.extend(transition_check(&g, tol));
        for chart in 1..=3 {
            for (name, a) in &a_list {
                if let Ok(r) = dbar_local_check(a, &g, chart, 1e-5, fd_tol) {
                    report.record(&format!("local ∂̄ of {name}"), r.max_residual(), fd_tol);
                }
            }
        }
    }
    report.extend(classical_rep_check(tol));
    ClassicalSummary {
        samples,
        seed,
        report,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn samples_are_special_unitary() {
        for seed in 0..20 {
            let g = sample_su3(seed);
            assert!(g.unitarity_residual() < 1e-12, "{seed}");
            assert!(g.det_residual() < 1e-12, "{seed}");
        }
        assert_eq!(sample_su3(0), GroupSample::identity());
        assert_eq!(sample_su3(5), sample_su3(5));
    }

    #[test]
    fn identity_point() {
        let g = GroupSample::identity();
        let z = g.z();
        let active: Vec<usize> = (1..=3)
            .filter(|&j| z[j - 1].norm() > CHART_THRESHOLD)
            .collect();
        assert_eq!(active, vec![3]);
        assert!((big_p(&g, 3).determinant() + c(1.0)).norm() < 1e-15);
        assert!(transition_check(&g, 1e-12).all_passed());
    }

    #[test]
    fn random_transitions() {
        for seed in 1..30 {
            let r = transition_check(&sample_su3(seed), 1e-10);
            assert!(r.all_passed(), "{r}");
        }
    }

    // Jacobian of the chart change by complex finite differences.
    #[test]
    fn transition_is_the_conjugate_jacobian() {
        let g = sample_su3(3);
        let z = g.z();
        for (j, k) in [(1, 2), (2, 1), (2, 3), (3, 2), (3, 1), (1, 3)] {
            if z[j - 1].norm() < CHART_THRESHOLD || z[k - 1].norm() < CHART_THRESHOLD {
                continue;
            }
            let pk = ChartPoint::from_sphere(k, &z).unwrap();
            let h = 1e-6;
            let mut jac = Matrix2::zeros();
            for b in 0..2 {
                let shift = |d: f64| {
                    let mut q = pk;
                    q.coords[b] += c(d);
                    ChartPoint::from_sphere(j, &q.to_sphere()).unwrap().coords
                };
                // chart maps are holomorphic, the phase of the representative cancels
                let (fp, fm) = (shift(h), shift(-h));
                for a in 0..2 {
                    jac[(a, b)] = ((fp[a] - fm[a]) / c(2.0 * h)).conj();
                }
            }
            let want = transition(j, k, &z);
            assert!(max_entry(&(jac - want)) < 1e-8, "g_{j}{k}");
        }
    }

    #[test]
    fn local_dbar_examples() {
        let g = sample_su3(7);
        let chart = (1..=3).find(|&j| g.z()[j - 1].norm() > 0.3).unwrap();
        for a in [PPolynomial::entry(1, 1), PPolynomial::entry(1, 2)] {
            let r = dbar_local_check(&a, &g, chart, 1e-5, 1e-6).unwrap();
            assert!(r.all_passed(), "{r}");
        }
        let r = dbar_local_check(&PPolynomial::constant(c(2.0)), &g, chart, 1e-5, 1e-12).unwrap();
        assert_eq!(r.max_residual(), 0.0);
        assert!(matches!(
            dbar_local_check(&PPolynomial::entry(1, 1), &g, chart, 0.5, 1e-6),
            Err(ClassicalError::BadStep(_))
        ));
        let id = GroupSample::identity();
        assert!(matches!(
            dbar_local_check(&PPolynomial::entry(1, 1), &id, 1, 1e-5, 1e-6),
            Err(ClassicalError::InactiveChart { chart: 1, .. })
        ));
    }

    // The action on p_ij through P^(1) matches p_1j(δ_i2 - p_i2, δ_i3 - p_i3).
    #[test]
    fn closed_form_on_chart_one() {
        let g = sample_su3(11);
        let z = g.z();
        assert!(z[0].norm() > CHART_THRESHOLD);
        let p = projector(&z);
        let e1 = sigma(ClassicalGenerator::E1);
        let e2 = sigma(ClassicalGenerator::E2);
        let comm = e1 * e2 - e2 * e1;
        for i in 1..=3 {
            for j in 1..=3 {
                let a = PPolynomial::entry(i, j);
                let v = [
                    black_derivative(&a, &comm, &g.g, 1e-5),
                    black_derivative(&a, &e2, &g.g, 1e-5),
                ];
                let p1 = big_p(&g, 1);
                let got = [
                    v[0] * p1[(0, 0)] + v[1] * p1[(1, 0)],
                    v[0] * p1[(0, 1)] + v[1] * p1[(1, 1)],
                ];
                let d = |a: usize, b: usize| if a == b { c(1.0) } else { c(0.0) };
                let want = [
                    p[(0, j - 1)] * (d(i, 2) - p[(i - 1, 1)]),
                    p[(0, j - 1)] * (d(i, 3) - p[(i - 1, 2)]),
                ];
                assert!(
                    (got[0] - want[0]).norm() < 1e-8 && (got[1] - want[1]).norm() < 1e-8,
                    "p{i}{j}"
                );
            }
        }
    }

    #[test]
    fn representation_relations() {
        let r = classical_rep_check(1e-12);
        assert!(r.all_passed(), "{r}");
    }

    #[test]
    fn summary_passes() {
        let s = run_classical_check(10, 42, 1e-10, 1e-6);
        assert!(s.report.all_passed(), "{}", s.report);
    }
}
