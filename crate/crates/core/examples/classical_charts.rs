//! The classical picture at random points of SU(3).

use cp2q::classical::{
    big_p, classical_rep_check, dbar_local_check, sample_su3, transition_check, PPolynomial,
};

fn main() {
    let g = sample_su3(4);
    println!("z = {:?}", g.z());
    print!("{}", transition_check(&g, 1e-10));
    println!("P^(3) = {}", big_p(&g, 3));

    let a = PPolynomial::entry(1, 2).times(&PPolynomial::entry(2, 1));
    for chart in 1..=3 {
        match dbar_local_check(&a, &g, chart, 1e-5, 1e-6) {
            Ok(r) => print!("{r}"),
            Err(e) => println!("chart {chart}: {e}"),
        }
    }
    println!(
        "representation checks pass: {}",
        classical_rep_check(1e-12).all_passed()
    );
}
