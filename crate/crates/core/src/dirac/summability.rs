use serde::Serialize;

use super::{spectrum, DiracConfig, DiracError, SpectralFamily, SpectrumTable};
use crate::qarith::QValue;
use crate::report::{Check, Report};

/// Contribution of shell `n` (the `alpha(n)` and `beta(n-1)` rows) to
/// `Tr (1 + D²)^(-ε/2)`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ShellRow {
    pub n: u32,
    pub multiplicity: u64,
    pub increment: f64,
    pub partial_sum: f64,
    /// `increment(n) / increment(n-1)`, absent for the first shell.
    pub ratio: Option<f64>,
    /// `(1 + λ_n²)^(-ε/2) / (1 + λ_(n-1)²)^(-ε/2)` for the `alpha` rows.
    pub weight_ratio: Option<f64>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SummabilityTable {
    pub q: f64,
    pub epsilon: f64,
    pub shells: Vec<ShellRow>,
}

impl SummabilityTable {
    pub fn max_ratio(&self) -> f64 {
        self.shells
            .iter()
            .filter_map(|s| s.ratio)
            .fold(0.0, f64::max)
    }

    /// Shells whose increment does not drop below the previous one.
    pub fn non_decreasing(&self) -> Vec<u32> {
        self.shells
            .iter()
            .filter(|s| s.ratio.is_some_and(|r| r >= 1.0))
            .map(|s| s.n)
            .collect()
    }

    /// Increments shrink by a common factor below one.
    pub fn decreases_geometrically(&self) -> bool {
        self.shells.len() >= 2 && self.max_ratio() < 1.0
    }

    pub fn report(&self) -> Report {
        let mut r = Report::new(format!(
            "shell increments, q = {}, ε = {}",
            self.q, self.epsilon
        ));
        for s in &self.shells {
            if let Some(ratio) = s.ratio {
                r.push(Check::flag(
                    format!("shell {} / shell {} = {ratio:.4} < 1", s.n, s.n - 1),
                    ratio < 1.0,
                ));
            }
        }
        r
    }
}

fn weight(lambda: f64, eps: f64) -> f64 {
    (1.0 + lambda * lambda).powf(-eps / 2.0)
}

/// Shell-wise partial traces for each `ε`, shells `1..=nmax`.
pub fn summability_probe(table: &SpectrumTable, epsilons: &[f64]) -> Vec<SummabilityTable> {
    epsilons
        .iter()
        .map(|&eps| {
            // shell 0 is the kernel
            let mut partial = table
                .rows
                .iter()
                .filter(|r| r.family == SpectralFamily::Zero)
                .map(|r| r.multiplicity as f64 * weight(r.eigenvalue, eps))
                .sum::<f64>();
            let mut shells: Vec<ShellRow> = Vec::new();
            let mut prev_alpha: Option<f64> = None;
            for n in 1..=table.nmax {
                let in_shell = |r: &&super::SpectrumRow| {
                    (r.family == SpectralFamily::Alpha && r.n == n)
                        || (r.family == SpectralFamily::Beta && r.n + 1 == n)
                };
                let rows: Vec<_> = table.rows.iter().filter(in_shell).collect();
                let increment: f64 = rows
                    .iter()
                    .map(|r| r.multiplicity as f64 * weight(r.eigenvalue, eps))
                    .sum();
                let multiplicity = rows.iter().map(|r| r.multiplicity).sum();
                partial += increment;
                let alpha = rows
                    .iter()
                    .find(|r| r.family == SpectralFamily::Alpha)
                    .map(|r| weight(r.eigenvalue, eps));
                shells.push(ShellRow {
                    n,
                    multiplicity,
                    increment,
                    partial_sum: partial,
                    ratio: shells.last().map(|p| increment / p.increment),
                    weight_ratio: prev_alpha.zip(alpha).map(|(p, a)| a / p),
                });
                prev_alpha = alpha;
            }
            SummabilityTable {
                q: table.q,
                epsilon: eps,
                shells,
            }
        })
        .collect()
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ClassicalRow {
    pub q: f64,
    pub family: SpectralFamily,
    pub n: u32,
    pub eigenvalue: f64,
    pub classical: f64,
    pub error: f64,
}

/// Positive eigenvalues against `√(n(n+2))` for `alpha(n)` and
/// `√((m+2)(m+3))` for `beta(m)`.
pub fn classical_limit_scan(nmax: u32, qs: &[QValue]) -> Result<Vec<ClassicalRow>, DiracError> {
    let mut out = Vec::new();
    for &q in qs {
        let t = spectrum(&DiracConfig::new(q, nmax))?;
        for r in t.rows.iter().filter(|r| r.eigenvalue > 0.0) {
            let n = f64::from(r.n);
            let classical = match r.family {
                SpectralFamily::Alpha => (n * (n + 2.0)).sqrt(),
                SpectralFamily::Beta => ((n + 2.0) * (n + 3.0)).sqrt(),
                SpectralFamily::Zero => 0.0,
            };
            out.push(ClassicalRow {
                q: q.get(),
                family: r.family,
                n: r.n,
                eigenvalue: r.eigenvalue,
                classical,
                error: (r.eigenvalue - classical).abs(),
            });
        }
    }
    Ok(out)
}

/// For each `(family, n)` the error shrinks as `q` increases.
pub fn scan_is_monotone(rows: &[ClassicalRow]) -> bool {
    let mut sorted: Vec<&ClassicalRow> = rows.iter().collect();
    sorted.sort_by(|a, b| {
        (a.family, a.n)
            .cmp(&(b.family, b.n))
            .then(a.q.total_cmp(&b.q))
    });
    sorted
        .windows(2)
        .filter(|w| (w[0].family, w[0].n) == (w[1].family, w[1].n))
        .all(|w| w[1].error <= w[0].error)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(v: f64) -> QValue {
        QValue::new(v).unwrap()
    }

    fn table(qv: f64, nmax: u32) -> SpectrumTable {
        spectrum(&DiracConfig::new(q(qv), nmax)).unwrap()
    }

    // Shell sums straight from the multiplicity and eigenvalue formulas.
    fn oracle_increment(qv: f64, n: u32, eps: f64) -> f64 {
        let qn = |x: f64| (qv.powf(-x) - qv.powf(x)) / (1.0 / qv - qv);
        let k = f64::from(n);
        let a2 = 2.0 * qn(k) * qn(k + 2.0) / qn(2.0);
        let b2 = qn(k + 1.0) * qn(k + 2.0);
        2.0 * (k + 1.0).powi(3) * (1.0 + a2).powf(-eps / 2.0)
            + k * (k + 3.0) * (2.0 * k + 3.0) * (1.0 + b2).powf(-eps / 2.0)
    }

    #[test]
    fn increments_match_oracle() {
        let t = &summability_probe(&table(0.5, 5), &[0.1])[0];
        for s in &t.shells {
            let want = oracle_increment(0.5, s.n, 0.1);
            assert!(
                (s.increment - want).abs() < 1e-9 * want,
                "{} {} {want}",
                s.n,
                s.increment
            );
        }
    }

    #[test]
    fn per_eigenvalue_weights_shrink_but_shells_grow_at_small_n() {
        let t = &summability_probe(&table(0.5, 6), &[0.1])[0];
        // single eigenvalue weights decay like q^(εn)
        for s in t.shells.iter().skip(1) {
            assert!(s.weight_ratio.unwrap() < 1.0);
        }
        // the (n+1)³ growth of multiplicities dominates for the first shells
        let r45 = t.shells[4].ratio.unwrap();
        assert!(r45 > 1.0, "{r45}");
        assert!(!t.decreases_geometrically());
    }

    #[test]
    fn large_epsilon_converges_fast() {
        let t = &summability_probe(&table(0.5, 5), &[4.0])[0];
        assert!(t.decreases_geometrically());
        assert!(t.max_ratio() < 0.5, "{}", t.max_ratio());
    }

    #[test]
    fn smaller_q_converges_faster() {
        let a = &summability_probe(&table(0.5, 5), &[1.0])[0];
        let b = &summability_probe(&table(0.9, 5), &[1.0])[0];
        for (x, y) in a.shells.iter().zip(&b.shells).skip(1) {
            assert!(x.ratio.unwrap() < y.ratio.unwrap());
        }
    }

    #[test]
    fn classical_limit() {
        let rows = classical_limit_scan(3, &[q(0.9), q(0.99), q(0.999)]).unwrap();
        assert!(scan_is_monotone(&rows));
        let find = |f, n| {
            rows.iter()
                .find(|r| r.q == 0.999 && r.family == f && r.n == n)
                .unwrap()
        };
        assert!((find(SpectralFamily::Alpha, 1).eigenvalue - 3f64.sqrt()).abs() < 1e-3);
        assert!((find(SpectralFamily::Beta, 0).eigenvalue - 6f64.sqrt()).abs() < 1e-2);
    }
}
