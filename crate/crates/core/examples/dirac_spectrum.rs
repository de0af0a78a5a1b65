//! Spectrum of the Dirac operator against the closed forms.

use cp2q::dirac::{
    closed_form_spectrum, compare_spectra, spectrum, verify_dense_spectrum,
    verify_laplacian_identity, DiracConfig,
};
use cp2q::qarith::QValue;

fn main() {
    let q = QValue::new(0.5).unwrap();
    let cfg = DiracConfig::new(q, 3);
    let table = spectrum(&cfg).unwrap();
    print!("{table}");
    assert!(compare_spectra(&table, &closed_form_spectrum(q, 3), 1e-9).all_passed());
    assert!(verify_laplacian_identity(&cfg).all_passed());

    // the identity D² = [2]⁻¹(C - 2) needs s² = [2]/2
    let off = verify_laplacian_identity(&cfg.with_s(1.0).unwrap());
    println!(
        "with s = 1 the Laplacian identity is off by {:.3e}",
        off.max_residual()
    );

    let dense = verify_dense_spectrum(
        &DiracConfig::new(q, 2),
        &spectrum(&DiracConfig::new(q, 2)).unwrap(),
        1e-9,
    );
    println!(
        "dense diagonalization at nmax 2 agrees: {}",
        dense.all_passed()
    );
}
