//! The ten acceptance criteria, one test each. Every test writes a single
//! `criterion N: PASS|FAIL` line to stdout before asserting.

use std::io::Write;
use std::time::Instant;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use cp2q::classical::{
    dbar_local_check, sample_su3_with, transition_check, PPolynomial, CHART_THRESHOLD,
};
use cp2q::dirac::{
    cohomology, dense_spectrum, spectrum, summability_probe, verify_laplacian_identity,
    DiracConfig, SpectralFamily, SpectrumTable,
};
use cp2q::dolbeault::{verify_complex, ComplexCheckConfig};
use cp2q::irreps::{verify_hopf_relations, IrrepLabel};
use cp2q::ncrewrite::{
    confluence_check, cp2_relations, projector_identities, q_trace_identity, sphere_rules,
    verify_cp2_relations, verify_q1_cross_check, FamiliesForm,
};
use cp2q::peterweyl::{verify_casimir_sides, verify_gt_lemma, verify_lemma_commutators};
use cp2q::qarith::QValue;
use cp2q::ualg::verify_casimir_scalar;

const QS: [f64; 3] = [0.3, 0.5, 0.9];

fn qv(q: f64) -> QValue {
    QValue::new(q).unwrap()
}

fn verdict(n: u32, what: &str, ok: bool, detail: &str) {
    let mut out = std::io::stdout().lock();
    let _ = writeln!(
        out,
        "criterion {n}: {} {what} ({detail})",
        if ok { "PASS" } else { "FAIL" }
    );
    let _ = out.flush();
    assert!(ok, "criterion {n} failed: {what} ({detail})");
}

// Oracles written from the closed forms, independent of the library.

fn qn(x: f64, q: f64) -> f64 {
    (q.powf(x) - q.powf(-x)) / (q - 1.0 / q)
}

fn casimir_oracle(n1: u32, n2: u32, q: f64) -> f64 {
    let (a, b) = (n1 as f64, n2 as f64);
    qn((a - b) / 3.0, q).powi(2)
        + qn((2.0 * a + b) / 3.0 + 1.0, q).powi(2)
        + qn((a + 2.0 * b) / 3.0 + 1.0, q).powi(2)
}

/// `(value, multiplicity)` for both signs, zero included.
fn spectrum_oracle(q: f64, nmax: u32) -> Vec<(f64, u64)> {
    let mut v = vec![(0.0, 1)];
    for n in 1..=nmax {
        let a = (2.0 * qn(n as f64, q) * qn(n as f64 + 2.0, q) / qn(2.0, q)).sqrt();
        let m = (n as u64 + 1).pow(3);
        v.push((a, m));
        v.push((-a, m));
    }
    for n in 1..=nmax + 1 {
        let b = (qn(n as f64 + 1.0, q) * qn(n as f64 + 2.0, q)).sqrt();
        let n = n as u64;
        let m = n * (n + 3) * (2 * n + 3) / 2;
        v.push((b, m));
        v.push((-b, m));
    }
    v.sort_by(|x, y| x.0.total_cmp(&y.0));
    v
}

fn table_pairs(t: &SpectrumTable) -> Vec<(f64, u64)> {
    let mut v: Vec<(f64, u64)> = t
        .rows
        .iter()
        .map(|r| (r.eigenvalue, r.multiplicity))
        .collect();
    v.sort_by(|x, y| x.0.total_cmp(&y.0));
    v
}

/// Worst relative value error, or `None` if the multiplicities differ.
fn match_spectrum(got: &[(f64, u64)], want: &[(f64, u64)]) -> Option<f64> {
    if got.len() != want.len() {
        return None;
    }
    let mut worst: f64 = 0.0;
    for (g, w) in got.iter().zip(want) {
        if g.1 != w.1 {
            return None;
        }
        worst = worst.max((g.0 - w.0).abs() / w.0.abs().max(1.0));
    }
    Some(worst)
}

#[test]
fn criterion_01_hopf_relations() {
    let t = Instant::now();
    let mut worst: f64 = 0.0;
    let mut ok = true;
    let labels = IrrepLabel::up_to_total(6);
    for q in QS {
        for &l in &labels {
            let r = verify_hopf_relations(l, qv(q), 1e-11);
            ok &= r.all_passed() && !r.checks.is_empty();
            worst = worst.max(r.max_residual());
        }
    }
    let secs = t.elapsed().as_secs_f64();
    verdict(
        1,
        "Hopf relations on n1 + n2 <= 6",
        ok && secs < 60.0,
        &format!(
            "{} irreps x 3 q, worst relative residual {worst:.2e}, {secs:.1}s",
            labels.len()
        ),
    );
}

#[test]
fn criterion_02_casimir() {
    let mut scal: f64 = 0.0;
    let mut comm: f64 = 0.0;
    let mut value: f64 = 0.0;
    for q in QS {
        for l in IrrepLabel::up_to_total(6) {
            let c = verify_casimir_scalar(l, qv(q), 1e-11);
            let want = casimir_oracle(l.n1, l.n2, q);
            value = value.max((c.scalar - want).abs() / want);
            scal = scal.max(c.off_scalar_residual);
            comm = comm.max(c.commutator_residual);
        }
    }
    let mut sides: f64 = 0.0;
    for q in QS {
        for l in IrrepLabel::up_to_total(3) {
            sides = sides.max(verify_casimir_sides(l, qv(q), 1e-10).max_residual());
        }
    }
    let ok = value < 1e-10 && scal < 1e-10 && comm < 1e-11 && sides < 1e-10;
    verdict(
        2,
        "Casimir is the closed-form scalar, central, white = black",
        ok,
        &format!("value {value:.1e}, off-scalar {scal:.1e}, commutators {comm:.1e}, white/black {sides:.1e}"),
    );
}

#[test]
fn criterion_03_gelfand_tsetlin() {
    let mut lemma: f64 = 0.0;
    let mut comm: f64 = 0.0;
    let mut ok = true;
    for q in QS {
        for l in IrrepLabel::up_to_total(4) {
            let r = verify_gt_lemma(l, qv(q), 1e-9);
            ok &= r.all_passed();
            lemma = lemma.max(r.max_residual());
            let c = verify_lemma_commutators(l, 3, qv(q), 1e-9);
            ok &= c.all_passed();
            comm = comm.max(c.max_residual());
        }
    }
    verdict(
        3,
        "lowering words and lemma commutators",
        ok,
        &format!("basis {lemma:.1e}, commutators {comm:.1e}"),
    );
}

#[test]
fn criterion_04_complex_structure() {
    let mut worst: f64 = 0.0;
    let mut ok = true;
    for (q, nmax) in [(0.3, 3), (0.5, 4), (0.9, 3)] {
        let r = verify_complex(&ComplexCheckConfig::new(nmax), qv(q));
        ok &= r.all_passed();
        worst = worst.max(r.max_residual());
    }
    verdict(
        4,
        "∂̄² = 0, (∂̄†)² = 0, adjoint, equivariant",
        ok,
        &format!("worst residual {worst:.1e}, nmax up to 4"),
    );
}

#[test]
fn criterion_05_laplacian() {
    let mut worst: f64 = 0.0;
    let mut ok = true;
    for q in QS {
        let r = verify_laplacian_identity(&DiracConfig::new(qv(q), 5));
        ok &= r.all_passed();
        worst = worst.max(r.max_residual());
    }
    let off = verify_laplacian_identity(&DiracConfig::new(qv(0.5), 5).with_s(1.0).unwrap())
        .max_residual();
    verdict(
        5,
        "D² = [2]⁻¹(C - 2) for s² = [2]/2, broken for s = 1",
        ok && worst < 1e-10 && off > 1e-3,
        &format!("residual {worst:.1e}; s = 1 gives {off:.3e}"),
    );
}

#[test]
fn criterion_06_spectrum() {
    let t = Instant::now();
    let mut worst: f64 = 0.0;
    let mut ok = true;
    for q in QS {
        let table = spectrum(&DiracConfig::new(qv(q), 5)).unwrap();
        match match_spectrum(&table_pairs(&table), &spectrum_oracle(q, 5)) {
            Some(e) => worst = worst.max(e),
            None => ok = false,
        }
    }
    // dense diagonalization at nmax 3
    let cfg = DiracConfig::new(qv(0.5), 3);
    let (mut dense, leak) = dense_spectrum(&cfg);
    dense.sort_by(f64::total_cmp);
    let mut want: Vec<f64> = spectrum_oracle(0.5, 3)
        .into_iter()
        .flat_map(|(v, m)| std::iter::repeat_n(v, m as usize))
        .collect();
    want.sort_by(f64::total_cmp);
    let dense_err = if dense.len() == want.len() {
        dense
            .iter()
            .zip(&want)
            .map(|(a, b)| (a - b).abs() / b.abs().max(1.0))
            .fold(0.0, f64::max)
    } else {
        f64::INFINITY
    };
    let secs = t.elapsed().as_secs_f64();
    verdict(
        6,
        "spectrum equals the closed forms at nmax 5",
        ok && worst < 1e-9 && dense_err < 1e-9 && leak < 1e-10 && secs < 120.0,
        &format!(
            "worst relative {worst:.1e}, dense nmax 3 ({} values) {dense_err:.1e}, {secs:.1}s",
            dense.len()
        ),
    );
}

#[test]
fn criterion_07_cohomology() {
    let mut ok = true;
    let mut detail = String::new();
    for (q, nmax) in [(0.3, 3), (0.5, 4), (0.9, 3)] {
        let h = cohomology(&DiracConfig::new(qv(q), nmax));
        ok &= h.betti == [1, 0, 0];
        for d in &h.degrees {
            ok &= d.ranks_add_up()
                && d.reassembly_residual < 1e-10
                && d.orthogonality_residual < 1e-10;
        }
        detail.push_str(&format!("q = {q}: {:?}; ", h.betti));
    }
    verdict(
        7,
        "harmonic dimensions (1, 0, 0), Hodge ranks exact",
        ok,
        detail.trim_end_matches("; "),
    );
}

// Shell n collects the eigenvalues alpha(n) and beta(n-1) of the closed
// forms, both signs.
fn shell_oracle(q: f64, eps: f64, nmax: u32) -> Vec<f64> {
    let w = |l2: f64| (1.0 + l2).powf(-eps / 2.0);
    (1..=nmax)
        .map(|n| {
            let a2 = 2.0 * qn(n as f64, q) * qn(n as f64 + 2.0, q) / qn(2.0, q);
            let b2 = qn(n as f64 + 1.0, q) * qn(n as f64 + 2.0, q);
            let na = (n as f64 + 1.0).powi(3);
            let nb = n as f64 * (n as f64 + 3.0) * (2.0 * n as f64 + 3.0) / 2.0;
            2.0 * (na * w(a2) + nb * w(b2))
        })
        .collect()
}

#[test]
fn criterion_08_summability() {
    let (q, eps) = (0.5, 0.1);
    let table = spectrum(&DiracConfig::new(qv(q), 8)).unwrap();
    let probe = &summability_probe(&table, &[eps])[0];
    let oracle = shell_oracle(q, eps, 8);
    let agree = probe
        .shells
        .iter()
        .zip(&oracle)
        .all(|(s, o)| (s.increment - o).abs() <= 1e-9 * o);
    let ratios: Vec<f64> = oracle.windows(2).map(|w| w[1] / w[0]).collect();
    let max_ratio = ratios.iter().copied().fold(0.0, f64::max);
    let geometric = agree && max_ratio < 1.0;
    let shown: Vec<String> = ratios.iter().map(|r| format!("{r:.3}")).collect();
    verdict(
        8,
        "shell contributions decrease geometrically at q = 0.5, ε = 0.1",
        geometric,
        &format!(
            "shell ratios n = 1..8: [{}]; lib agrees with oracle: {agree}",
            shown.join(", ")
        ),
    );
}

#[test]
fn criterion_09_rewriting() {
    let t = Instant::now();
    let rules = sphere_rules();
    let rel = verify_cp2_relations(rules, FamiliesForm::Derived).unwrap();
    let conf = confluence_check(rules, 6).unwrap();
    let mut ids = cp2_relations(FamiliesForm::Derived);
    ids.extend(projector_identities());
    ids.push(q_trace_identity());
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    let q1 = verify_q1_cross_check(&ids, 100, &mut rng, 1e-10);
    verdict(
        9,
        "CP² relations, P² = P, Tr_q P = 1, confluence to degree 6, q = 1 check",
        rel.all_passed() && rel.checks.len() == 40 && conf.is_confluent() && q1.all_passed(),
        &format!(
            "{} identities exact, {} reduct pairs joinable, q = 1 worst {:.1e}, {:.1}s",
            rel.checks.len(),
            conf.pairs,
            q1.max_residual(),
            t.elapsed().as_secs_f64()
        ),
    );
}

#[test]
fn criterion_10_classical_limit() {
    let mut rng = ChaCha8Rng::seed_from_u64(10);
    let mut trans: f64 = 0.0;
    let mut fd: f64 = 0.0;
    let mut ok = true;
    let mut local_checks = 0;
    let funcs = [
        PPolynomial::entry(1, 1),
        PPolynomial::entry(1, 2),
        PPolynomial::entry(2, 3).times(&PPolynomial::entry(3, 1)),
    ];
    for _ in 0..100 {
        let g = sample_su3_with(&mut rng);
        let r = transition_check(&g, 1e-10);
        ok &= r.all_passed();
        trans = trans.max(r.max_residual());
        for chart in (1..=3).filter(|&j| g.z()[j - 1].norm() > CHART_THRESHOLD) {
            for a in &funcs {
                let r = dbar_local_check(a, &g, chart, 1e-5, 1e-6).unwrap();
                ok &= r.all_passed();
                fd = fd.max(r.max_residual());
                local_checks += 1;
            }
        }
    }
    // classical values: alpha(n) -> √(n(n+2)), beta(n-1) -> √((n+1)(n+2))
    let table = spectrum(&DiracConfig::new(qv(0.999), 3)).unwrap();
    let mut lim: f64 = 0.0;
    for r in &table.rows {
        let n = r.n as f64;
        let want = match r.family {
            SpectralFamily::Zero => 0.0,
            SpectralFamily::Alpha => (n * (n + 2.0)).sqrt(),
            SpectralFamily::Beta => ((n + 2.0) * (n + 3.0)).sqrt(),
        };
        lim = lim.max((r.eigenvalue.abs() - want).abs());
    }
    verdict(
        10,
        "classical transition identities, local ∂̄, q -> 1 spectrum",
        ok && lim < 1e-2,
        &format!("transitions {trans:.1e}, {local_checks} local ∂̄ checks worst {fd:.1e}, q = 0.999 spectrum off by {lim:.1e}"),
    );
}
