//! Shell contributions to Tr (1 + D²)^(-ε/2) and the classical limit.

use cp2q::dirac::{classical_limit_scan, spectrum, summability_probe, DiracConfig};
use cp2q::qarith::QValue;

fn main() {
    let table = spectrum(&DiracConfig::new(QValue::new(0.5).unwrap(), 8)).unwrap();
    for t in summability_probe(&table, &[0.1, 1.0, 4.0]) {
        println!(
            "ε = {}: max shell ratio {:.4}, geometric decrease: {}",
            t.epsilon,
            t.max_ratio(),
            t.decreases_geometrically()
        );
        for s in &t.shells {
            println!(
                "  n = {}  mult {:>5}  increment {:.4e}  ratio {}",
                s.n,
                s.multiplicity,
                s.increment,
                s.ratio.map_or("-".into(), |r| format!("{r:.4}"))
            );
        }
    }

    let qs: Vec<QValue> = [0.9, 0.99, 0.999]
        .iter()
        .map(|&q| QValue::new(q).unwrap())
        .collect();
    for r in classical_limit_scan(3, &qs).unwrap() {
        println!(
            "q = {} {:?}({}): {:.5} vs {:.5}",
            r.q, r.family, r.n, r.eigenvalue, r.classical
        );
    }
}
