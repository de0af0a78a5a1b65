use nalgebra::DMatrix;

use super::{float_matrix, GeneratorName, IrrepLabel};
use crate::qarith::QValue;
use crate::report::Report;

/// Largest absolute entry.
pub(crate) fn max_abs(m: &DMatrix<f64>) -> f64 {
    m.iter().fold(0.0, |acc, x| acc.max(x.abs()))
}

/// `max|lhs - rhs|` scaled by the largest term entering the identity.
pub(crate) fn relative_residual(
    lhs: &DMatrix<f64>,
    rhs: &DMatrix<f64>,
    terms: &[&DMatrix<f64>],
) -> f64 {
    let scale = terms
        .iter()
        .map(|t| max_abs(t))
        .fold(max_abs(lhs).max(max_abs(rhs)), f64::max);
    max_abs(&(lhs - rhs)) / scale.max(1.0)
}

/// Checks the defining relations of the extended `U_q(su(3))` on `V(label)`.
pub fn verify_hopf_relations(label: IrrepLabel, q: QValue, tol: f64) -> Report {
    use GeneratorName::*;
    let g = |x: GeneratorName| float_matrix(label, x, q).to_dense();
    let qv = q.get();
    let n = label.dim();
    let id = DMatrix::<f64>::identity(n, n);
    let (k1, k1i, k2, k2i) = (g(K1), g(K1Inv), g(K2), g(K2Inv));
    let (h, hi) = (g(H), g(HInv));
    let e = [g(E1), g(E2)];
    let f = [g(F1), g(F2)];
    let k = [k1.clone(), k2.clone()];
    let ki = [k1i.clone(), k2i.clone()];
    let mut r = Report::new(format!("Hopf relations on V{label}, q = {qv}"));

    r.record(
        "K1 K2 = K2 K1",
        relative_residual(&(&k1 * &k2), &(&k2 * &k1), &[]),
        tol,
    );
    for i in 0..2 {
        r.record(
            &format!("K{0} K{0}^-1 = 1", i + 1),
            relative_residual(&(&k[i] * &ki[i]), &id, &[]),
            tol,
        );
    }
    r.record("H H^-1 = 1", relative_residual(&(&h * &hi), &id, &[]), tol);
    r.record(
        "H^3 = K1^2 K2^-2",
        relative_residual(&(&h * &h * &h), &(&k1 * &k1 * &k2i * &k2i), &[]),
        tol,
    );
    r.record(
        "H K1 = K1 H",
        relative_residual(&(&h * &k1), &(&k1 * &h), &[]),
        tol,
    );

    let scale = |i: usize, j: usize| if i == j { qv } else { qv.powf(-0.5) };
    for i in 0..2 {
        for j in 0..2 {
            let lhs = &k[i] * &e[j] * &ki[i];
            r.record(
                &format!("K{} E{} K{}^-1 = q^a E{}", i + 1, j + 1, i + 1, j + 1),
                relative_residual(&lhs, &(&e[j] * scale(i, j)), &[&e[j]]),
                tol,
            );
            let lhs = &k[i] * &f[j] * &ki[i];
            r.record(
                &format!("K{} F{} K{}^-1 = q^-a F{}", i + 1, j + 1, i + 1, j + 1),
                relative_residual(&lhs, &(&f[j] / scale(i, j)), &[&f[j]]),
                tol,
            );
        }
        let hs = if i == 0 { qv } else { 1.0 / qv };
        r.record(
            &format!("H E{0} H^-1 = q^(+-1) E{0}", i + 1),
            relative_residual(&(&h * &e[i] * &hi), &(&e[i] * hs), &[&e[i]]),
            tol,
        );
    }

    let qdiff = qv - 1.0 / qv;
    for i in 0..2 {
        for j in 0..2 {
            let comm = &e[i] * &f[j] - &f[j] * &e[i];
            let terms = [&e[i] * &f[j], &f[j] * &e[i]];
            if i == j {
                let rhs = (&k[i] * &k[i] - &ki[i] * &ki[i]) / qdiff;
                r.record(
                    &format!("[E{0},F{0}] = (K{0}^2 - K{0}^-2)/(q - q^-1)", i + 1),
                    relative_residual(&comm, &rhs, &[&terms[0], &terms[1]]),
                    tol,
                );
            } else {
                let zero = DMatrix::zeros(n, n);
                r.record(
                    &format!("[E{},F{}] = 0", i + 1, j + 1),
                    relative_residual(&comm, &zero, &[&terms[0], &terms[1]]),
                    tol,
                );
            }
        }
    }

    let two = qv + 1.0 / qv;
    for (name, x) in [("E", &e), ("F", &f)] {
        for (i, j) in [(0usize, 1usize), (1, 0)] {
            let (a, b) = (&x[i], &x[j]);
            let t1 = a * a * b;
            let t2 = a * b * a;
            let t3 = b * a * a;
            let serre = &t1 - &t2 * two + &t3;
            let zero = DMatrix::zeros(n, n);
            r.record(
                &format!("Serre {name}{0}^2 {name}{1} - [2] {name}{0}{name}{1}{name}{0} + {name}{1}{name}{0}^2", i + 1, j + 1),
                relative_residual(&serre, &zero, &[&t1, &t2, &t3]),
                tol,
            );
            let inner = b * a - a * b / qv;
            let qc = a * &inner - &inner * a / qv;
            r.record(
                &format!("[{name}{0},[{name}{1},{name}{0}]_q]_q = 0", i + 1, j + 1),
                relative_residual(&qc, &zero, &[&t1, &t2, &t3]),
                tol,
            );
        }
    }
    r
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn spec_examples() {
        for (l, q) in [((1, 1), 0.5), ((0, 1), 0.5), ((2, 1), 0.9)] {
            let rep =
                verify_hopf_relations(IrrepLabel::new(l.0, l.1), QValue::new(q).unwrap(), 1e-12);
            assert!(rep.all_passed(), "{rep}");
        }
    }

    #[test]
    fn wrong_scaling_detected() {
        // Sanity: the report can fail. Compare E1 against a rescaled copy.
        let q = QValue::new(0.5).unwrap();
        let e = float_matrix(IrrepLabel::new(1, 1), GeneratorName::E1, q).to_dense();
        assert!(relative_residual(&e, &(&e * 1.01), &[]) > 1e-3);
    }
}
