use std::collections::HashMap;
use std::f64::consts::FRAC_1_SQRT_2;

use nalgebra::{DMatrix, SymmetricEigen};

use super::{dirac_apply, DiracConfig, SpectrumTable};
use crate::dolbeault::FormVector;
use crate::peterweyl::{
    form1_slots, subspace_basis, PwBasisVector, PwVector, SubspaceKind, SubspaceSpec,
};
use crate::report::{Check, Report};

/// `D` as one dense matrix on the whole truncated form space, assembled
/// without the block decomposition.
#[derive(Clone, Debug)]
pub struct DenseDirac {
    pub matrix: DMatrix<f64>,
    /// Relative squared norm of images lost to the truncation.
    pub leakage: f64,
}

#[derive(Clone, Copy)]
enum Coord {
    Deg0(usize),
    Plus(usize),
    Minus(usize),
    Deg2(usize),
}

pub fn dense_dirac(cfg: &DiracConfig) -> DenseDirac {
    let deg0 = subspace_basis(SubspaceSpec {
        kind: SubspaceKind::Cp2,
        nmax: cfg.nmax,
    });
    let deg1 = form1_slots(cfg.nmax);
    let deg2 = subspace_basis(SubspaceSpec {
        kind: SubspaceKind::LineBundle(3),
        nmax: cfg.nmax,
    });

    let mut index: HashMap<(u8, PwBasisVector), Coord> = HashMap::new();
    let mut forms = Vec::new();
    for b in &deg0 {
        index.insert((0, *b), Coord::Deg0(forms.len()));
        forms.push(FormVector::from_deg0(PwVector::basis(*b)));
    }
    for s in &deg1 {
        index.insert((1, s.plus), Coord::Plus(forms.len()));
        index.insert((1, s.minus), Coord::Minus(forms.len()));
        forms.push(FormVector::from_deg1(
            PwVector::basis(s.plus).scaled(FRAC_1_SQRT_2),
            PwVector::basis(s.minus).scaled(FRAC_1_SQRT_2),
        ));
    }
    for b in &deg2 {
        index.insert((2, *b), Coord::Deg2(forms.len()));
        forms.push(FormVector::from_deg2(PwVector::basis(*b)));
    }

    let dim = forms.len();
    let mut m = DMatrix::zeros(dim, dim);
    let mut leakage = 0.0f64;
    for (j, f) in forms.iter().enumerate() {
        let img = dirac_apply(f, cfg);
        for (deg, part) in [
            (0u8, &img.deg0),
            (1, &img.plus),
            (1, &img.minus),
            (2, &img.deg2),
        ] {
            for (b, x) in part.iter() {
                match index.get(&(deg, *b)) {
                    Some(Coord::Deg0(i) | Coord::Deg2(i)) => m[(*i, j)] += x,
                    Some(Coord::Plus(i) | Coord::Minus(i)) => m[(*i, j)] += x * FRAC_1_SQRT_2,
                    None => {}
                }
            }
        }
        // doublet coordinates capture the whole image only when v+ and v- match
        let col_norm2: f64 = m.column(j).iter().map(|x| x * x).sum();
        let total = img.norm().powi(2);
        leakage = leakage.max((total - col_norm2).abs() / total.max(1.0));
    }
    DenseDirac { matrix: m, leakage }
}

/// All eigenvalues of the dense matrix, ascending.
pub fn dense_spectrum(cfg: &DiracConfig) -> (Vec<f64>, f64) {
    let d = dense_dirac(cfg);
    let mut ev: Vec<f64> = SymmetricEigen::new(d.matrix)
        .eigenvalues
        .iter()
        .copied()
        .collect();
    ev.sort_by(f64::total_cmp);
    (ev, d.leakage)
}

/// Dense diagonalization against the block spectrum.
pub fn verify_dense_spectrum(cfg: &DiracConfig, table: &SpectrumTable, rel: f64) -> Report {
    let mut r = Report::new(format!(
        "dense D vs block spectrum, nmax = {}, q = {}",
        cfg.nmax, cfg.q
    ));
    let (dense, leakage) = dense_spectrum(cfg);
    let blocks = table.expanded();
    r.push(Check::flag(
        format!("dimension {} = {}", dense.len(), blocks.len()),
        dense.len() == blocks.len(),
    ));
    r.record("no leakage out of the truncated space", leakage, rel);
    for (a, b) in dense.iter().zip(&blocks) {
        r.record("eigenvalues agree", (a - b).abs() / b.abs().max(1.0), rel);
    }
    r
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dirac::spectrum;
    use crate::qarith::QValue;

    #[test]
    fn dense_matches_blocks_small() {
        let cfg = DiracConfig::new(QValue::new(0.5).unwrap(), 1);
        let d = dense_dirac(&cfg);
        assert_eq!(d.matrix.nrows(), 1 + 8 + 8 + 10 + 35 + 10 + 35);
        assert!((d.matrix.clone() - d.matrix.transpose()).amax() < 1e-12);
        let t = spectrum(&cfg).unwrap();
        let r = verify_dense_spectrum(&cfg, &t, 1e-9);
        assert!(r.all_passed(), "{r}");
    }
}
