//! Normal forms in the quantum 5-sphere and the CP² relations.

use cp2q::ncrewrite::{
    confluence_check, parse_poly, sphere_rules, verify_cp2_relations, FamiliesForm,
};

fn main() {
    let rules = sphere_rules();
    println!("{} rewrite rules", rules.len());
    for src in ["z1* z1", "z3* z3", "p12 p21", "q^4 p11 + q^2 p22 + p33"] {
        let f = parse_poly(src).unwrap();
        println!("{src:<26} -> {}", rules.normal_form(&f).unwrap());
    }

    print!("{}", confluence_check(rules, 4).unwrap());
    let r = verify_cp2_relations(rules, FamiliesForm::Derived).unwrap();
    println!(
        "{} identities, all hold: {}",
        r.checks.len(),
        r.all_passed()
    );
    let printed = verify_cp2_relations(rules, FamiliesForm::AsPrinted).unwrap();
    for c in printed.failures() {
        println!("  printed form fails: {}", c.name);
    }
}
