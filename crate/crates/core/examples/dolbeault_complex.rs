//! The Dolbeault complex: ∂̄ on random forms and its block structure.

use cp2q::dolbeault::{
    block_structure, dbar, inner_product, random_form, verify_complex, ComplexCheckConfig,
};
use cp2q::qarith::QValue;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn main() {
    let q = QValue::new(0.5).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let f = random_form(2, &mut rng);
    let ddf = dbar(&dbar(&f, q), q);
    println!(
        "|f| = {:.4}, |∂̄∂̄f| = {:.2e}",
        inner_product(&f, &f).sqrt(),
        ddf.norm()
    );

    let blocks = block_structure(3);
    let dim: usize = blocks.iter().map(|b| b.dim()).sum();
    println!("{} blocks, total dimension {dim}", blocks.len());
    let d = blocks[1].dump(q);
    println!("{}", serde_json::to_string(&d).unwrap());

    print!("{}", verify_complex(&ComplexCheckConfig::new(2), q));
}
