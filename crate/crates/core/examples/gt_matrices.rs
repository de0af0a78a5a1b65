//! Generator matrices in the Gelfand–Tsetlin basis and the algebra relations.

use cp2q::irreps::{float_matrix, verify_hopf_relations, GeneratorName, IrrepLabel, MatrixExport};
use cp2q::qarith::QValue;

fn main() {
    let q = QValue::new(0.5).unwrap();
    let adj = IrrepLabel::new(1, 1);
    println!("V{adj} has dimension {}, basis:", adj.dim());
    for t in adj.basis() {
        println!("  {t}");
    }

    let e2 = float_matrix(adj, GeneratorName::E2, q);
    println!("E2 on V{adj}: {} nonzeros", e2.nnz());
    println!(
        "{}",
        serde_json::to_string(&MatrixExport::new(&e2, GeneratorName::E2, q)).unwrap()
    );

    let mut worst: f64 = 0.0;
    for l in IrrepLabel::up_to_total(4) {
        let r = verify_hopf_relations(l, q, 1e-11);
        assert!(r.all_passed(), "{r}");
        worst = worst.max(r.max_residual());
    }
    println!("all relations hold up to n1 + n2 = 4, worst residual {worst:.2e}");
}
