//! Peter–Weyl bases of the sphere, CP² and the line bundles, and the
//! lowering words that produce the GT basis.

use cp2q::irreps::{GtTriple, IrrepLabel};
use cp2q::peterweyl::{
    gt_lowering_word, subspace_basis, verify_gt_lemma, SubspaceKind, SubspaceSpec,
};
use cp2q::qarith::QValue;

fn main() {
    for (kind, name) in [
        (SubspaceKind::Cp2, "A(CP²)"),
        (SubspaceKind::LineBundle(3), "L_3"),
        (SubspaceKind::LineBundle(-3), "L_-3"),
        (SubspaceKind::Form1Doublet, "Ω^(0,1)"),
    ] {
        let b = subspace_basis(SubspaceSpec { kind, nmax: 2 });
        println!("{name:<9} nmax 2: {} basis vectors", b.len());
    }
    let first = subspace_basis(SubspaceSpec {
        kind: SubspaceKind::Cp2,
        nmax: 1,
    })[1];
    println!("{}", serde_json::to_string(&first.dump()).unwrap());

    let q = QValue::new(0.5).unwrap();
    let l = IrrepLabel::new(2, 1);
    let w = gt_lowering_word(l, GtTriple::new(1, 0, -1)).unwrap();
    println!("lowering word for |1,0,-1/2> in V{l}: {}", w.body);
    print!("{}", verify_gt_lemma(l, q, 1e-9));
}
