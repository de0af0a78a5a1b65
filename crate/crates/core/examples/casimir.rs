//! Algebra elements from text, the Casimir and the coproduct of X.

use cp2q::irreps::IrrepLabel;
use cp2q::qarith::QValue;
use cp2q::ualg::{parse_element, verify_casimir_scalar, verify_coproduct_identity};

fn main() {
    let q = QValue::new(0.6).unwrap();
    let kk = parse_element("K1 K1'").unwrap();
    println!("K1 K1' = {kk}");
    let m = kk.evaluate(IrrepLabel::new(2, 1), q);
    println!(
        "  on V(2,1): max |K1 K1' - 1| = {:.1e}",
        (m.clone() - nalgebra::DMatrix::identity(m.nrows(), m.ncols())).amax()
    );

    for l in [
        IrrepLabel::new(0, 0),
        IrrepLabel::new(1, 0),
        IrrepLabel::new(1, 1),
        IrrepLabel::new(2, 2),
    ] {
        let c = verify_casimir_scalar(l, q, 1e-10);
        println!(
            "C_q on V{l} = {:.10} (closed form {:.10})",
            c.scalar, c.expected
        );
    }

    let r = verify_coproduct_identity(IrrepLabel::new(1, 0), IrrepLabel::new(0, 1), q, 1e-10);
    print!("{r}");
}
