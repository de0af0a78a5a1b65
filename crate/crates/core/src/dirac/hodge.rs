use nalgebra::DMatrix;
use rayon::prelude::*;
use serde::Serialize;

use super::{block_dirac, DiracConfig};
use crate::dolbeault::{block_structure, dbar, dbar_dag, FormBlock, FormVector};
use crate::irreps::{GtTriple, IrrepLabel};
use crate::peterweyl::{PwBasisVector, PwVector};
use crate::report::{Check, Report};

/// Rank and orthogonal projector onto the column space of `m`.
fn range_projector(m: &DMatrix<f64>, rows: usize) -> (usize, DMatrix<f64>) {
    if m.ncols() == 0 || m.nrows() == 0 {
        return (0, DMatrix::zeros(rows, rows));
    }
    let svd = m.clone().svd(true, false);
    let u = svd.u.expect("u requested");
    let smax = svd.singular_values.max();
    let cut = 1e-9 * smax.max(1.0);
    let keep: Vec<usize> = (0..svd.singular_values.len())
        .filter(|&i| svd.singular_values[i] > cut)
        .collect();
    let mut p = DMatrix::zeros(rows, rows);
    for &i in &keep {
        let c = u.column(i);
        p += c * c.transpose();
    }
    (keep.len(), p)
}

fn select(m: &DMatrix<f64>, rows: &[usize], cols: &[usize]) -> DMatrix<f64> {
    DMatrix::from_fn(rows.len(), cols.len(), |i, j| m[(rows[i], cols[j])])
}

/// Hodge data of one degree, summed over blocks.
#[derive(Clone, Debug, Default, PartialEq, Serialize)]
pub struct DegreeDecomposition {
    pub degree: u8,
    pub dim: usize,
    pub harmonic: usize,
    pub exact_rank: usize,
    pub coexact_rank: usize,
    /// `max |P_h + P_e + P_c - 1|`.
    pub reassembly_residual: f64,
    /// Largest entry of the pairwise products of the three projectors.
    pub orthogonality_residual: f64,
}

impl DegreeDecomposition {
    pub fn ranks_add_up(&self) -> bool {
        self.harmonic + self.exact_rank + self.coexact_rank == self.dim
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Cohomology {
    pub q: f64,
    pub nmax: u32,
    pub betti: [usize; 3],
    pub degrees: [DegreeDecomposition; 3],
}

impl Cohomology {
    pub fn report(&self, tol: f64) -> Report {
        let mut r = Report::new(format!(
            "Hodge decomposition, q = {}, nmax = {}",
            self.q, self.nmax
        ));
        r.push(Check::flag(
            format!("harmonic dimensions {:?} = [1, 0, 0]", self.betti),
            self.betti == [1, 0, 0],
        ));
        for d in &self.degrees {
            r.push(Check::flag(
                format!(
                    "degree {}: {} + {} + {} = {}",
                    d.degree, d.harmonic, d.exact_rank, d.coexact_rank, d.dim
                ),
                d.ranks_add_up(),
            ));
            r.record(
                &format!("degree {} reassembles", d.degree),
                d.reassembly_residual,
                tol,
            );
            r.record(
                &format!("degree {} summands orthogonal", d.degree),
                d.orthogonality_residual,
                tol,
            );
        }
        r
    }
}

fn block_decomposition(block: &FormBlock, cfg: &DiracConfig) -> [DegreeDecomposition; 3] {
    let (d, _) = block_dirac(block, cfg);
    let (db, _) = block.matrix_of(|f| dbar(f, cfg.q));
    let idx: Vec<Vec<usize>> = (0..3u8)
        .map(|deg| {
            (0..block.dim())
                .filter(|&i| block.slots[i].degree() == deg)
                .collect()
        })
        .collect();
    let all: Vec<usize> = (0..block.dim()).collect();
    std::array::from_fn(|n| {
        let here = &idx[n];
        let k = here.len();
        let mut out = DegreeDecomposition {
            degree: n as u8,
            dim: k,
            ..Default::default()
        };
        if k == 0 {
            return out;
        }
        // ker D on degree n = complement of the row space of D[:, here]
        let dn = select(&d, &all, here);
        let (r, p_row) = range_projector(&dn.transpose(), k);
        let p_h = DMatrix::identity(k, k) - p_row;
        out.harmonic = k - r;
        let (re, p_e) = if n > 0 {
            range_projector(&select(&db, here, &idx[n - 1]), k)
        } else {
            (0, DMatrix::zeros(k, k))
        };
        let (rc, p_c) = if n < 2 {
            range_projector(&select(&db, &idx[n + 1], here).transpose(), k)
        } else {
            (0, DMatrix::zeros(k, k))
        };
        out.exact_rank = re;
        out.coexact_rank = rc;
        out.reassembly_residual = (&p_h + &p_e + &p_c - DMatrix::identity(k, k)).amax();
        out.orthogonality_residual = (&p_h * &p_e)
            .amax()
            .max((&p_h * &p_c).amax())
            .max((&p_e * &p_c).amax());
        out
    })
}

/// Harmonic dimensions as per-degree kernels of `D`, with the three-way
/// Hodge splitting checked block by block.
pub fn cohomology(cfg: &DiracConfig) -> Cohomology {
    let parts: Vec<[DegreeDecomposition; 3]> = block_structure(cfg.nmax)
        .par_iter()
        .map(|b| block_decomposition(b, cfg))
        .collect();
    let mut degrees: [DegreeDecomposition; 3] = std::array::from_fn(|n| DegreeDecomposition {
        degree: n as u8,
        ..Default::default()
    });
    for p in parts {
        for (acc, x) in degrees.iter_mut().zip(p) {
            acc.dim += x.dim;
            acc.harmonic += x.harmonic;
            acc.exact_rank += x.exact_rank;
            acc.coexact_rank += x.coexact_rank;
            acc.reassembly_residual = acc.reassembly_residual.max(x.reassembly_residual);
            acc.orthogonality_residual = acc.orthogonality_residual.max(x.orthogonality_residual);
        }
    }
    Cohomology {
        q: cfg.q.get(),
        nmax: cfg.nmax,
        betti: [
            degrees[0].harmonic,
            degrees[1].harmonic,
            degrees[2].harmonic,
        ],
        degrees,
    }
}

/// `∂̄ω = ∂̄†ω = 0` for the constant function.
pub fn constants_are_harmonic(cfg: &DiracConfig) -> bool {
    let one = PwBasisVector::new(
        IrrepLabel::new(0, 0),
        GtTriple::new(0, 0, 0),
        GtTriple::new(0, 0, 0),
    )
    .expect("trivial label");
    let c = FormVector::from_deg0(PwVector::basis(one));
    dbar(&c, cfg.q).max_abs() == 0.0 && dbar_dag(&c, cfg.q).max_abs() == 0.0
}
