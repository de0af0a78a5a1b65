use std::f64::consts::FRAC_1_SQRT_2;
use std::fmt;

use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use super::{dbar, inner_product, FormVector};
use crate::irreps::{GtTriple, IrrepLabel};
use crate::peterweyl::{doublet_triples, BasisDump, DoubletSlot, PwBasisVector, PwVector};
use crate::qarith::QValue;

const SINGLET: GtTriple = GtTriple::new(0, 0, 0);

/// Block families. `Diag(n)` lives on `V(n,n)`, `OffDiag(m)` on `V(m,m+3)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(tag = "family", content = "n", rename_all = "lowercase")]
pub enum Family {
    Diag(u32),
    OffDiag(u32),
}

impl Family {
    pub fn label(self) -> IrrepLabel {
        match self {
            Family::Diag(n) => IrrepLabel::new(n, n),
            Family::OffDiag(m) => IrrepLabel::new(m, m + 3),
        }
    }

    pub fn n(self) -> u32 {
        match self {
            Family::Diag(n) | Family::OffDiag(n) => n,
        }
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Family::Diag(n) => write!(f, "diag({n})"),
            Family::OffDiag(m) => write!(f, "offdiag({m})"),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct BlockIndex {
    pub family: Family,
    pub white: GtTriple,
}

/// One orthonormal basis form of a block.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum Slot {
    Deg0(PwBasisVector),
    /// `(t+, t-)/√2`.
    Doublet(DoubletSlot),
    Deg2(PwBasisVector),
}

impl Slot {
    pub fn degree(&self) -> u8 {
        match self {
            Slot::Deg0(_) => 0,
            Slot::Doublet(_) => 1,
            Slot::Deg2(_) => 2,
        }
    }

    pub fn form(&self) -> FormVector {
        match *self {
            Slot::Deg0(b) => FormVector::from_deg0(PwVector::basis(b)),
            Slot::Deg2(b) => FormVector::from_deg2(PwVector::basis(b)),
            Slot::Doublet(d) => FormVector::from_deg1(
                PwVector::basis(d.plus).scaled(FRAC_1_SQRT_2),
                PwVector::basis(d.minus).scaled(FRAC_1_SQRT_2),
            ),
        }
    }

    fn dump(&self) -> SlotDump {
        match self {
            Slot::Deg0(b) => SlotDump {
                degree: 0,
                components: vec![b.dump()],
            },
            Slot::Deg2(b) => SlotDump {
                degree: 2,
                components: vec![b.dump()],
            },
            Slot::Doublet(d) => SlotDump {
                degree: 1,
                components: vec![d.plus.dump(), d.minus.dump()],
            },
        }
    }
}

/// A `D`-invariant block: one or two slots sharing label and white triple.
#[derive(Clone, Debug, PartialEq)]
pub struct FormBlock {
    pub index: BlockIndex,
    pub slots: Vec<Slot>,
}

impl FormBlock {
    pub fn dim(&self) -> usize {
        self.slots.len()
    }

    /// Matrix of `op` in the slot basis, with the norm of the part of
    /// `op(slot)` that leaves the block.
    pub fn matrix_of(&self, op: impl Fn(&FormVector) -> FormVector) -> (DMatrix<f64>, f64) {
        let forms: Vec<FormVector> = self.slots.iter().map(Slot::form).collect();
        let k = forms.len();
        let mut m = DMatrix::zeros(k, k);
        let mut leak = 0.0f64;
        for (j, fj) in forms.iter().enumerate() {
            let img = op(fj);
            let mut rest = img.clone();
            for (i, fi) in forms.iter().enumerate() {
                let c = inner_product(fi, &img);
                m[(i, j)] = c;
                rest = rest.axpy(-c, fi);
            }
            leak = leak.max(rest.max_abs());
        }
        (m, leak)
    }

    /// `∂̄` on this block.
    pub fn dbar_matrix(&self, q: QValue) -> DMatrix<f64> {
        self.matrix_of(|f| dbar(f, q)).0
    }

    pub fn dump(&self, q: QValue) -> BlockDump {
        let d = self.dbar_matrix(q);
        BlockDump {
            family: self.index.family,
            white: [
                self.index.white.j1 as i32,
                self.index.white.j2 as i32,
                self.index.white.two_m,
            ],
            slots: self.slots.iter().map(Slot::dump).collect(),
            dbar_matrix: d.row_iter().map(|r| r.iter().copied().collect()).collect(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SlotDump {
    pub degree: u8,
    pub components: Vec<BasisDump>,
}

/// JSON form of a block.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BlockDump {
    #[serde(flatten)]
    pub family: Family,
    pub white: [i32; 3],
    pub slots: Vec<SlotDump>,
    pub dbar_matrix: Vec<Vec<f64>>,
}

fn pw(l: IrrepLabel, w: GtTriple, b: GtTriple) -> PwBasisVector {
    PwBasisVector {
        label: l,
        white: w,
        black: b,
    }
}

/// All blocks up to `nmax`, sorted by family then white triple.
pub fn block_structure(nmax: u32) -> Vec<FormBlock> {
    let mut out = Vec::new();
    let l0 = IrrepLabel::new(0, 0);
    out.push(FormBlock {
        index: BlockIndex {
            family: Family::Diag(0),
            white: SINGLET,
        },
        slots: vec![Slot::Deg0(pw(l0, SINGLET, SINGLET))],
    });
    for n in 1..=nmax {
        let l = IrrepLabel::new(n, n);
        let (p, m) = doublet_triples(l).expect("diag doublet");
        for w in l.basis() {
            out.push(FormBlock {
                index: BlockIndex {
                    family: Family::Diag(n),
                    white: w,
                },
                slots: vec![
                    Slot::Deg0(pw(l, w, SINGLET)),
                    Slot::Doublet(DoubletSlot {
                        plus: pw(l, w, p),
                        minus: pw(l, w, m),
                    }),
                ],
            });
        }
    }
    for n in 0..=nmax {
        let l = IrrepLabel::new(n, n + 3);
        let (p, m) = doublet_triples(l).expect("offdiag doublet");
        for w in l.basis() {
            out.push(FormBlock {
                index: BlockIndex {
                    family: Family::OffDiag(n),
                    white: w,
                },
                slots: vec![
                    Slot::Doublet(DoubletSlot {
                        plus: pw(l, w, p),
                        minus: pw(l, w, m),
                    }),
                    Slot::Deg2(pw(l, w, SINGLET)),
                ],
            });
        }
    }
    out
}
