//! Exact and floating q-numbers.

use cp2q::qarith::{qbinom_exact, qfact_exact, qint_exact, qnum, LaurentScalar};
use num_rational::Rational64;

fn main() {
    let two = LaurentScalar::qint(2);
    println!("[2] = {two}");
    println!("[3]! = {}", qfact_exact(3).unwrap());
    println!("[4 choose 2] = {}", qbinom_exact(4, 2).unwrap());

    // [1/3] lives on the twelfth-root lattice
    let third = qint_exact(Rational64::new(1, 3)).unwrap();
    println!("[1/3] = {third}");
    for q in [0.3, 0.5, 0.9] {
        println!(
            "q = {q}: [1/3] = {:.12} (direct {:.12})",
            third.eval(q),
            qnum(1.0 / 3.0, q)
        );
    }

    let x = &two * &two - LaurentScalar::qint(3);
    assert!(x.is_one());
    println!("[2]^2 - [3] = {x}");
}
