//! The Dirac operator `D(a, v, b) = (∂̄†v, ∂̄a + s∂̄†b, s∂̄v)` and its
//! spectral data.

mod dense;
mod hodge;
mod summability;

use std::collections::BTreeMap;
use std::fmt;

use nalgebra::{DMatrix, SymmetricEigen};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::dolbeault::{block_structure, dbar, dbar_dag, Family, FormBlock, FormVector};
use crate::qarith::QValue;
use crate::report::Report;
use crate::ualg::casimir_element;

pub use dense::{dense_dirac, dense_spectrum, verify_dense_spectrum, DenseDirac};
pub use hodge::{cohomology, constants_are_harmonic, Cohomology, DegreeDecomposition};
pub use summability::{
    classical_limit_scan, scan_is_monotone, summability_probe, ClassicalRow, ShellRow,
    SummabilityTable,
};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum DiracError {
    #[error("mixing parameter s = {0} must be positive and finite")]
    InvalidS(f64),
    #[error("{family}: blocks disagree on the eigenvalue (spread {spread:.3e})")]
    InconsistentFamily { family: String, spread: f64 },
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct DiracConfig {
    #[serde(serialize_with = "ser_q")]
    pub q: QValue,
    pub nmax: u32,
    pub s: f64,
    pub tol: f64,
}

fn ser_q<S: serde::Serializer>(q: &QValue, s: S) -> Result<S::Ok, S::Error> {
    s.serialize_f64(q.get())
}

impl DiracConfig {
    /// Configuration with `s = √([2]/2)`.
    pub fn new(q: QValue, nmax: u32) -> Self {
        Self {
            q,
            nmax,
            s: default_s(q),
            tol: 1e-10,
        }
    }

    pub fn with_s(mut self, s: f64) -> Result<Self, DiracError> {
        if !(s.is_finite() && s > 0.0) {
            return Err(DiracError::InvalidS(s));
        }
        self.s = s;
        Ok(self)
    }

    pub fn with_tol(mut self, tol: f64) -> Self {
        self.tol = tol;
        self
    }
}

pub fn default_s(q: QValue) -> f64 {
    (q.qnum(2.0) / 2.0).sqrt()
}

/// `D` on a graded form.
pub fn dirac_apply(f: &FormVector, cfg: &DiracConfig) -> FormVector {
    let q = cfg.q;
    let a = f.degree_part(0);
    let v = f.degree_part(1);
    let b = f.degree_part(2);
    dbar_dag(&v, q)
        .plus_form(&dbar(&a, q))
        .plus_form(&dbar_dag(&b, q).scaled(cfg.s))
        .plus_form(&dbar(&v, q).scaled(cfg.s))
}

/// Matrix of `D` on a block, with the leakage out of the block.
pub fn block_dirac(block: &FormBlock, cfg: &DiracConfig) -> (DMatrix<f64>, f64) {
    block.matrix_of(|f| dirac_apply(f, cfg))
}

/// Checks `D² = [2]⁻¹(C_q - 2)▶` on every block up to `cfg.nmax`, with the
/// Casimir acting by the black action.
pub fn verify_laplacian_identity(cfg: &DiracConfig) -> Report {
    let q = cfg.q;
    let c = casimir_element();
    let q2 = q.qnum(2.0);
    let results: Vec<(Family, f64)> = block_structure(cfg.nmax)
        .par_iter()
        .map(|b| {
            let (d, leak) = block_dirac(b, cfg);
            let (cas, cleak) = b.matrix_of(|f| f.black(&c, q));
            let rhs = (cas - DMatrix::identity(b.dim(), b.dim()) * 2.0) / q2;
            let lhs = &d * &d;
            let scale = lhs.amax().max(rhs.amax()).max(1.0);
            (b.index.family, ((lhs - rhs).amax() + leak + cleak) / scale)
        })
        .collect();
    let mut r = Report::new(format!(
        "D² = [2]⁻¹(C_q - 2) on blocks up to nmax = {}, q = {q}, s = {}",
        cfg.nmax, cfg.s
    ));
    for (family, res) in results {
        r.record(&format!("D² on {family}"), res, cfg.tol);
    }
    r
}

/// Spectral family of a row.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SpectralFamily {
    Zero,
    Alpha,
    Beta,
}

impl fmt::Display for SpectralFamily {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            SpectralFamily::Zero => "zero",
            SpectralFamily::Alpha => "alpha",
            SpectralFamily::Beta => "beta",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SpectrumRow {
    pub family: SpectralFamily,
    pub n: u32,
    pub eigenvalue: f64,
    pub multiplicity: u64,
}

/// Eigenvalues with multiplicities, sorted by family, `n`, then value.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SpectrumTable {
    pub q: f64,
    pub s: f64,
    pub nmax: u32,
    pub rows: Vec<SpectrumRow>,
}

impl SpectrumTable {
    pub fn total_multiplicity(&self) -> u64 {
        self.rows.iter().map(|r| r.multiplicity).sum()
    }

    /// Every eigenvalue repeated by multiplicity, ascending.
    pub fn expanded(&self) -> Vec<f64> {
        let mut v: Vec<f64> = self
            .rows
            .iter()
            .flat_map(|r| std::iter::repeat_n(r.eigenvalue, r.multiplicity as usize))
            .collect();
        v.sort_by(f64::total_cmp);
        v
    }

    /// For every row `λ ≠ 0` a row `-λ` with equal multiplicity exists.
    pub fn is_symmetric(&self, rel: f64) -> bool {
        self.rows.iter().all(|r| {
            r.family == SpectralFamily::Zero
                || self.rows.iter().any(|o| {
                    o.family == r.family
                        && o.n == r.n
                        && o.multiplicity == r.multiplicity
                        && (o.eigenvalue + r.eigenvalue).abs() <= rel * r.eigenvalue.abs()
                })
        })
    }

    pub fn to_csv(&self) -> String {
        let mut s = String::from("family,n,eigenvalue,multiplicity\n");
        for r in &self.rows {
            s.push_str(&format!(
                "{},{},{:.15e},{}\n",
                r.family, r.n, r.eigenvalue, r.multiplicity
            ));
        }
        s
    }
}

impl fmt::Display for SpectrumTable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(
            f,
            "spectrum of D, q = {}, s = {}, nmax = {}",
            self.q, self.s, self.nmax
        )?;
        writeln!(
            f,
            "{:<8}{:>4}{:>24}{:>14}",
            "family", "n", "eigenvalue", "multiplicity"
        )?;
        for r in &self.rows {
            writeln!(
                f,
                "{:<8}{:>4}{:>24.15}{:>14}",
                r.family.to_string(),
                r.n,
                r.eigenvalue,
                r.multiplicity
            )?;
        }
        Ok(())
    }
}

fn family_of(f: Family) -> (SpectralFamily, u32) {
    match f {
        Family::Diag(0) => (SpectralFamily::Zero, 0),
        Family::Diag(n) => (SpectralFamily::Alpha, n),
        Family::OffDiag(m) => (SpectralFamily::Beta, m),
    }
}

/// Spectrum by diagonalizing every block of `D`.
pub fn spectrum(cfg: &DiracConfig) -> Result<SpectrumTable, DiracError> {
    let per_block: Vec<(Family, Vec<f64>)> = block_structure(cfg.nmax)
        .par_iter()
        .map(|b| {
            let (d, _) = block_dirac(b, cfg);
            let mut ev: Vec<f64> = SymmetricEigen::new(d).eigenvalues.iter().copied().collect();
            ev.sort_by(f64::total_cmp);
            (b.index.family, ev)
        })
        .collect();

    // Eigenvalues of one family agree across white indices; group and check.
    let mut groups: BTreeMap<(SpectralFamily, u32, usize), Vec<f64>> = BTreeMap::new();
    for (family, ev) in per_block {
        let (fam, n) = family_of(family);
        for (k, x) in ev.into_iter().enumerate() {
            groups.entry((fam, n, k)).or_default().push(x);
        }
    }
    let mut rows = Vec::new();
    for ((family, n, _), xs) in groups {
        let lo = xs.iter().copied().fold(f64::INFINITY, f64::min);
        let hi = xs.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        let spread = (hi - lo) / hi.abs().max(lo.abs()).max(1.0);
        if spread > 1e-12 {
            return Err(DiracError::InconsistentFamily {
                family: format!("{family}({n})"),
                spread,
            });
        }
        rows.push(SpectrumRow {
            family,
            n,
            eigenvalue: xs.iter().sum::<f64>() / xs.len() as f64,
            multiplicity: xs.len() as u64,
        });
    }
    rows.sort_by(|a, b| {
        (a.family, a.n)
            .cmp(&(b.family, b.n))
            .then(a.eigenvalue.total_cmp(&b.eigenvalue))
    });
    Ok(SpectrumTable {
        q: cfg.q.get(),
        s: cfg.s,
        nmax: cfg.nmax,
        rows,
    })
}

/// Closed-form multiplicity of the `alpha(n)` rows, `(n+1)³`.
pub fn alpha_multiplicity(n: u32) -> u64 {
    u64::from(n + 1).pow(3)
}

/// Closed-form multiplicity of the `beta(m)` rows, `½(m+1)(m+4)(2m+5)`.
pub fn beta_multiplicity(m: u32) -> u64 {
    let m = u64::from(m);
    (m + 1) * (m + 4) * (2 * m + 5) / 2
}

/// The predicted spectrum at `s = √([2]/2)`.
pub fn closed_form_spectrum(q: QValue, nmax: u32) -> SpectrumTable {
    let qn = |x: u32| q.qnum(f64::from(x));
    let mut rows = vec![SpectrumRow {
        family: SpectralFamily::Zero,
        n: 0,
        eigenvalue: 0.0,
        multiplicity: 1,
    }];
    for n in 1..=nmax {
        let a = (2.0 * qn(n) * qn(n + 2) / qn(2)).sqrt();
        for sign in [-1.0, 1.0] {
            rows.push(SpectrumRow {
                family: SpectralFamily::Alpha,
                n,
                eigenvalue: sign * a,
                multiplicity: alpha_multiplicity(n),
            });
        }
    }
    for m in 0..=nmax {
        let b = (qn(m + 2) * qn(m + 3)).sqrt();
        for sign in [-1.0, 1.0] {
            rows.push(SpectrumRow {
                family: SpectralFamily::Beta,
                n: m,
                eigenvalue: sign * b,
                multiplicity: beta_multiplicity(m),
            });
        }
    }
    SpectrumTable {
        q: q.get(),
        s: default_s(q),
        nmax,
        rows,
    }
}

/// Row-by-row comparison: exact multiplicities, relative `rel` on values.
pub fn compare_spectra(got: &SpectrumTable, want: &SpectrumTable, rel: f64) -> Report {
    let mut r = Report::new(format!(
        "spectrum vs closed form, q = {}, nmax = {}",
        got.q, got.nmax
    ));
    r.push(crate::report::Check::flag(
        "same number of rows",
        got.rows.len() == want.rows.len(),
    ));
    for (g, w) in got.rows.iter().zip(&want.rows) {
        let sign = if w.eigenvalue < 0.0 { "-" } else { "+" };
        let name = format!("{}({}) {sign}", w.family, w.n);
        let same = g.family == w.family && g.n == w.n && g.multiplicity == w.multiplicity;
        r.push(crate::report::Check::flag(
            format!("{name} multiplicity {}", w.multiplicity),
            same,
        ));
        let res = (g.eigenvalue - w.eigenvalue).abs() / w.eigenvalue.abs().max(1.0);
        r.record(&format!("{name} eigenvalue"), res, rel);
    }
    r.push(crate::report::Check::flag(
        "±λ symmetric",
        got.is_symmetric(1e-12),
    ));
    r
}
