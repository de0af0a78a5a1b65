//! Irreducible *-representations `V(n1,n2)` of `U_q(su(3))` in the
//! Gelfand–Tsetlin basis `|n1,n2,j1,j2,m>`.
//!
//! Diagonal generators (`K1`, `K2`, `H` and inverses) are available exactly
//! as monomials in `t = q^(1/12)`; raising and lowering generators carry
//! square roots of q-number products and are built in floating point only.
//! With real entries, `F_i` is the transpose of `E_i`.

mod cache;
pub(crate) mod relations;

use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::qarith::{qnum, LaurentScalar, QParam, QValue};

pub use cache::MatrixCache;
pub use relations::verify_hopf_relations;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum IrrepError {
    #[error("generator {0} has no exact matrix (square-root entries); use float mode")]
    UnsupportedMode(GeneratorName),
    #[error("invalid Gelfand-Tsetlin label {0}")]
    InvalidLabel(String),
    #[error("unknown generator name {0:?}")]
    UnknownGenerator(String),
}

/// Highest weight `(n1, n2)` of an irreducible representation.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct IrrepLabel {
    pub n1: u32,
    pub n2: u32,
}

impl IrrepLabel {
    pub const fn new(n1: u32, n2: u32) -> Self {
        Self { n1, n2 }
    }

    /// `(n1+1)(n2+1)(n1+n2+2)/2`.
    pub fn dim(self) -> usize {
        let (a, b) = (self.n1 as usize, self.n2 as usize);
        (a + 1) * (b + 1) * (a + b + 2) / 2
    }

    /// Ordered Gelfand–Tsetlin basis: lexicographic in `(j1, j2, m)`.
    pub fn basis(self) -> Vec<GtTriple> {
        let mut out = Vec::with_capacity(self.dim());
        for j1 in 0..=self.n1 {
            for j2 in 0..=self.n2 {
                let s = (j1 + j2) as i32;
                for two_m in (-s..=s).step_by(2) {
                    out.push(GtTriple { j1, j2, two_m });
                }
            }
        }
        out
    }

    /// Position of `t` in [`IrrepLabel::basis`].
    pub fn index_of(self, t: GtTriple) -> Option<usize> {
        if !t.is_valid_for(self) {
            return None;
        }
        // Blocks of fixed j1 have sum_{j2} (j1+j2+1) vectors.
        let n2 = self.n2 as usize;
        let block = |j1: usize| (n2 + 1) * (j1 + 1) + n2 * (n2 + 1) / 2;
        let mut idx: usize = (0..t.j1 as usize).map(block).sum();
        idx += (0..t.j2 as usize)
            .map(|j2| t.j1 as usize + j2 + 1)
            .sum::<usize>();
        let s = (t.j1 + t.j2) as i32;
        idx += ((t.two_m + s) / 2) as usize;
        Some(idx)
    }

    /// The highest weight vector `|n1,n2,n1,0,n1/2>`.
    pub fn highest_weight(self) -> GtTriple {
        GtTriple {
            j1: self.n1,
            j2: 0,
            two_m: self.n1 as i32,
        }
    }

    /// All labels with `n1 + n2 <= total`.
    pub fn up_to_total(total: u32) -> Vec<IrrepLabel> {
        let mut out = Vec::new();
        for s in 0..=total {
            for n1 in 0..=s {
                out.push(IrrepLabel::new(n1, s - n1));
            }
        }
        out
    }
}

impl fmt::Display for IrrepLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{})", self.n1, self.n2)
    }
}

/// A Gelfand–Tsetlin triple `(j1, j2, m)`; `m` is stored doubled.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct GtTriple {
    pub j1: u32,
    pub j2: u32,
    pub two_m: i32,
}

impl GtTriple {
    pub const fn new(j1: u32, j2: u32, two_m: i32) -> Self {
        Self { j1, j2, two_m }
    }

    pub fn m(self) -> f64 {
        f64::from(self.two_m) / 2.0
    }

    /// `j_i <= n_i` and `(j1+j2)/2 - |m|` a non-negative integer.
    pub fn is_valid_for(self, label: IrrepLabel) -> bool {
        let s = (self.j1 + self.j2) as i32;
        self.j1 <= label.n1
            && self.j2 <= label.n2
            && self.two_m.abs() <= s
            && (s - self.two_m.abs()) % 2 == 0
    }
}

impl fmt::Display for GtTriple {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.two_m % 2 == 0 {
            write!(f, "({},{},{})", self.j1, self.j2, self.two_m / 2)
        } else {
            write!(f, "({},{},{}/2)", self.j1, self.j2, self.two_m)
        }
    }
}

/// A labelled basis vector `|n1,n2,j1,j2,m>`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct GtVector {
    pub label: IrrepLabel,
    pub triple: GtTriple,
}

impl GtVector {
    pub fn new(label: IrrepLabel, triple: GtTriple) -> Result<Self, IrrepError> {
        if triple.is_valid_for(label) {
            Ok(Self { label, triple })
        } else {
            Err(IrrepError::InvalidLabel(format!("{label} {triple}")))
        }
    }
}

/// Generators of the extended algebra; `H = (K1 K2^-1)^(2/3)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum GeneratorName {
    K1,
    K1Inv,
    K2,
    K2Inv,
    E1,
    E2,
    F1,
    F2,
    H,
    HInv,
}

impl GeneratorName {
    pub const ALL: [GeneratorName; 10] = [
        GeneratorName::K1,
        GeneratorName::K1Inv,
        GeneratorName::K2,
        GeneratorName::K2Inv,
        GeneratorName::E1,
        GeneratorName::E2,
        GeneratorName::F1,
        GeneratorName::F2,
        GeneratorName::H,
        GeneratorName::HInv,
    ];

    pub fn is_diagonal(self) -> bool {
        !matches!(
            self,
            GeneratorName::E1 | GeneratorName::E2 | GeneratorName::F1 | GeneratorName::F2
        )
    }

    pub fn inverse(self) -> Option<GeneratorName> {
        use GeneratorName::*;
        Some(match self {
            K1 => K1Inv,
            K1Inv => K1,
            K2 => K2Inv,
            K2Inv => K2,
            H => HInv,
            HInv => H,
            _ => return None,
        })
    }

    /// The `*`-structure: `K* = K`, `E_i* = F_i`.
    pub fn star(self) -> GeneratorName {
        use GeneratorName::*;
        match self {
            E1 => F1,
            F1 => E1,
            E2 => F2,
            F2 => E2,
            g => g,
        }
    }

    /// `ϑ(E_i) = F_i`, `ϑ(F_i) = E_i`, `ϑ(K_i) = K_i`; on generators it agrees
    /// with the star.
    pub fn theta(self) -> GeneratorName {
        self.star()
    }

    pub fn symbol(self) -> &'static str {
        use GeneratorName::*;
        match self {
            K1 => "K1",
            K1Inv => "K1'",
            K2 => "K2",
            K2Inv => "K2'",
            E1 => "E1",
            E2 => "E2",
            F1 => "F1",
            F2 => "F2",
            H => "H",
            HInv => "H'",
        }
    }

    /// Exponent, in units of `q^(1/12)`, by which a diagonal generator scales
    /// `|j1,j2,m>` in `V(n1,n2)`.
    pub fn weight_twelfths(self, label: IrrepLabel, t: GtTriple) -> Option<i32> {
        use GeneratorName::*;
        let (n1, n2) = (label.n1 as i32, label.n2 as i32);
        let (j1, j2) = (t.j1 as i32, t.j2 as i32);
        let k1 = 6 * t.two_m;
        let k2 = 9 * (j1 - j2) + 6 * (n2 - n1) - 3 * t.two_m;
        let h = 6 * t.two_m - 6 * (j1 - j2) - 4 * (n2 - n1);
        Some(match self {
            K1 => k1,
            K1Inv => -k1,
            K2 => k2,
            K2Inv => -k2,
            H => h,
            HInv => -h,
            _ => return None,
        })
    }
}

impl fmt::Display for GeneratorName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.symbol())
    }
}

impl FromStr for GeneratorName {
    type Err = IrrepError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        GeneratorName::ALL
            .into_iter()
            .find(|g| g.symbol() == s)
            .ok_or_else(|| IrrepError::UnknownGenerator(s.to_string()))
    }
}

/// Sparse real matrix on the ordered Gelfand–Tsetlin basis of one irrep.
///
/// Stored column-wise: `cols[c]` lists `(row, value)` with rows ascending.
#[derive(Clone, Debug, PartialEq)]
pub struct OperatorMatrix {
    pub label: IrrepLabel,
    cols: Vec<Vec<(usize, f64)>>,
}

impl OperatorMatrix {
    pub fn from_triplets(
        label: IrrepLabel,
        triplets: impl IntoIterator<Item = (usize, usize, f64)>,
    ) -> Self {
        let mut cols = vec![Vec::new(); label.dim()];
        for (r, c, v) in triplets {
            if v != 0.0 {
                cols[c].push((r, v));
            }
        }
        for col in &mut cols {
            col.sort_by_key(|(r, _)| *r);
        }
        Self { label, cols }
    }

    pub fn dim(&self) -> usize {
        self.cols.len()
    }

    /// Nonzero entries of column `c`.
    pub fn column(&self, c: usize) -> &[(usize, f64)] {
        &self.cols[c]
    }

    /// `(row, col, value)` sorted by row, then column.
    pub fn triplets(&self) -> Vec<(usize, usize, f64)> {
        let mut out: Vec<_> = self
            .cols
            .iter()
            .enumerate()
            .flat_map(|(c, col)| col.iter().map(move |(r, v)| (*r, c, *v)))
            .collect();
        out.sort_by_key(|(r, c, _)| (*r, *c));
        out
    }

    pub fn nnz(&self) -> usize {
        self.cols.iter().map(Vec::len).sum()
    }

    pub fn get(&self, r: usize, c: usize) -> f64 {
        self.cols[c]
            .iter()
            .find(|(row, _)| *row == r)
            .map(|(_, v)| *v)
            .unwrap_or(0.0)
    }

    pub fn transpose(&self) -> Self {
        Self::from_triplets(
            self.label,
            self.triplets().into_iter().map(|(r, c, v)| (c, r, v)),
        )
    }

    pub fn is_diagonal(&self) -> bool {
        self.cols
            .iter()
            .enumerate()
            .all(|(c, col)| col.iter().all(|(r, _)| *r == c))
    }

    pub fn to_dense(&self) -> DMatrix<f64> {
        let n = self.dim();
        let mut m = DMatrix::zeros(n, n);
        for (c, col) in self.cols.iter().enumerate() {
            for (r, v) in col {
                m[(*r, c)] = *v;
            }
        }
        m
    }

    pub fn apply(&self, v: &DVector<f64>) -> DVector<f64> {
        let mut out = DVector::zeros(self.dim());
        for (c, col) in self.cols.iter().enumerate() {
            if v[c] == 0.0 {
                continue;
            }
            for (r, a) in col {
                out[*r] += a * v[c];
            }
        }
        out
    }
}

/// A generator in the requested arithmetic mode.
#[derive(Clone, Debug, PartialEq)]
pub enum GeneratorMatrix {
    Float(Arc<OperatorMatrix>),
    /// Diagonal entries, one Laurent monomial per basis vector.
    Exact(Vec<LaurentScalar>),
}

/// Exact diagonal of `K1`, `K2`, `H` or an inverse.
pub fn exact_diagonal(
    label: IrrepLabel,
    gen: GeneratorName,
) -> Result<Vec<LaurentScalar>, IrrepError> {
    if !gen.is_diagonal() {
        return Err(IrrepError::UnsupportedMode(gen));
    }
    Ok(label
        .basis()
        .into_iter()
        .map(|t| LaurentScalar::q_pow_twelfths(gen.weight_twelfths(label, t).expect("diagonal")))
        .collect())
}

/// Matrix of `gen` on `V(label)`; exact mode only for diagonal generators.
pub fn generator_matrix(
    label: IrrepLabel,
    gen: GeneratorName,
    p: &QParam,
) -> Result<GeneratorMatrix, IrrepError> {
    match p {
        QParam::Exact => exact_diagonal(label, gen).map(GeneratorMatrix::Exact),
        QParam::Float(q) => Ok(GeneratorMatrix::Float(float_matrix(label, gen, *q))),
    }
}

/// Cached floating matrix of a generator.
pub fn float_matrix(label: IrrepLabel, gen: GeneratorName, q: QValue) -> Arc<OperatorMatrix> {
    MatrixCache::global().get_or_build(label, gen, q)
}

/// Builds the matrix of `gen` on `V(label)` directly from the action formulas.
pub fn build_float_matrix(label: IrrepLabel, gen: GeneratorName, q: QValue) -> OperatorMatrix {
    use GeneratorName::*;
    let basis = label.basis();
    let qv = q.get();
    match gen {
        E1 | E2 => {
            let mut trip = Vec::new();
            for (c, t) in basis.iter().enumerate() {
                let images = if gen == E1 {
                    e1_images(label, *t, q)
                } else {
                    e2_images(label, *t, q)
                };
                for (target, v) in images {
                    let r = label
                        .index_of(target)
                        .expect("action formula lands on a valid label");
                    trip.push((r, c, v));
                }
            }
            OperatorMatrix::from_triplets(label, trip)
        }
        F1 => build_float_matrix(label, E1, q).transpose(),
        F2 => build_float_matrix(label, E2, q).transpose(),
        _ => OperatorMatrix::from_triplets(
            label,
            basis.iter().enumerate().map(|(i, t)| {
                let e = gen.weight_twelfths(label, *t).expect("diagonal");
                (i, i, qv.powf(f64::from(e) / 12.0))
            }),
        ),
    }
}

fn e1_images(_label: IrrepLabel, t: GtTriple, q: QValue) -> Vec<(GtTriple, f64)> {
    let s = f64::from(t.j1 + t.j2) / 2.0;
    let m = t.m();
    let c = (q.qnum(s - m) * q.qnum(s + m + 1.0)).max(0.0).sqrt();
    if c == 0.0 {
        return Vec::new();
    }
    vec![(GtTriple::new(t.j1, t.j2, t.two_m + 2), c)]
}

fn e2_images(label: IrrepLabel, t: GtTriple, q: QValue) -> Vec<(GtTriple, f64)> {
    let s = f64::from(t.j1 + t.j2) / 2.0;
    let m = t.m();
    let mut out = Vec::with_capacity(2);
    if t.j1 < label.n1 {
        let c = q.qnum(s - m + 1.0).max(0.0).sqrt() * coeff_a(label, t.j1, t.j2, q);
        if c != 0.0 {
            out.push((GtTriple::new(t.j1 + 1, t.j2, t.two_m - 1), c));
        }
    }
    if t.j2 > 0 {
        let c = q.qnum(s + m).max(0.0).sqrt() * coeff_b(label, t.j1, t.j2, q);
        if c != 0.0 {
            out.push((GtTriple::new(t.j1, t.j2 - 1, t.two_m - 1), c));
        }
    }
    out
}

/// `A_{j1,j2}`; vanishes at `j1 = n1` through `[n1 - j1]`.
fn coeff_a(label: IrrepLabel, j1: u32, j2: u32, q: QValue) -> f64 {
    let (n1, n2) = (f64::from(label.n1), f64::from(label.n2));
    let (j1, j2) = (f64::from(j1), f64::from(j2));
    let num = q.qnum(n1 - j1) * q.qnum(n2 + j1 + 2.0) * q.qnum(j1 + 1.0);
    let den = q.qnum(j1 + j2 + 1.0) * q.qnum(j1 + j2 + 2.0);
    (num / den).max(0.0).sqrt()
}

/// `B_{j1,j2}`, equal to 1 when `j1 + j2 = 0`.
fn coeff_b(label: IrrepLabel, j1: u32, j2: u32, q: QValue) -> f64 {
    if j1 + j2 == 0 {
        return 1.0;
    }
    let (n1, n2) = (f64::from(label.n1), f64::from(label.n2));
    let (j1, j2) = (f64::from(j1), f64::from(j2));
    let num = q.qnum(n1 + j2 + 1.0) * q.qnum(n2 - j2 + 1.0) * q.qnum(j2);
    let den = q.qnum(j1 + j2) * q.qnum(j1 + j2 + 1.0);
    (num / den).max(0.0).sqrt()
}

/// Value of the extended Casimir on `V(n1,n2)`:
/// `[(n1-n2)/3]^2 + [(2n1+n2)/3 + 1]^2 + [(n1+2n2)/3 + 1]^2`.
pub fn casimir_value(label: IrrepLabel, q: f64) -> f64 {
    let (n1, n2) = (f64::from(label.n1), f64::from(label.n2));
    qnum((n1 - n2) / 3.0, q).powi(2)
        + qnum((2.0 * n1 + n2) / 3.0 + 1.0, q).powi(2)
        + qnum((n1 + 2.0 * n2) / 3.0 + 1.0, q).powi(2)
}

/// JSON export record for one generator matrix.
#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct MatrixExport {
    pub label: IrrepLabel,
    pub generator: String,
    pub q: f64,
    pub triplets: Vec<(usize, usize, f64)>,
}

impl MatrixExport {
    pub fn new(m: &OperatorMatrix, gen: GeneratorName, q: QValue) -> Self {
        Self {
            label: m.label,
            generator: gen.symbol().to_string(),
            q: q.get(),
            triplets: m.triplets(),
        }
    }

    pub fn into_matrix(self) -> OperatorMatrix {
        OperatorMatrix::from_triplets(self.label, self.triplets)
    }
}
