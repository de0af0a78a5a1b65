//! The `cp2q` command line.
//!
//! Exit codes: 0 when every check passes, 1 when a verification fails
//! (the failing checks are listed in the output), 2 for invalid
//! configuration or input.

mod cache;

use std::fmt::Write as _;
use std::path::PathBuf;

use clap::{Parser, Subcommand, ValueEnum};
use nalgebra::DMatrix;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};
use thiserror::Error;

use crate::classical::run_classical_check;
use crate::dirac::{
    closed_form_spectrum, cohomology, compare_spectra, spectrum, summability_probe,
    verify_dense_spectrum, verify_laplacian_identity, DiracConfig, DiracError,
};
use crate::dolbeault::{block_structure, verify_complex, ComplexCheckConfig, Family};
use crate::irreps::{
    exact_diagonal, float_matrix, verify_hopf_relations, GeneratorName, IrrepLabel,
};
use crate::ncrewrite::{
    confluence_check, cp2_relations, parse_poly, projector_identities, q_trace_identity,
    sphere_rules, verify_cp2_relations, verify_q1_cross_check, FamiliesForm, PolyParseError,
    RewriteError,
};
use crate::peterweyl::{
    subspace_basis, verify_casimir_sides, verify_gt_lemma, verify_lemma_commutators, SubspaceKind,
    SubspaceSpec,
};
use crate::qarith::QValue;
use crate::report::{Check, Report};
use crate::ualg::{parse_element, verify_casimir_scalar, verify_coproduct_identity, ParseError};

pub use cache::{version_hash, ResultCache, CACHE_ENV};

pub const NMAX_LIMIT: u32 = 8;
pub const SPECTRAL_Q_RANGE: (f64, f64) = (0.3, 0.95);

#[derive(Debug, Error)]
pub enum CliError {
    #[error("cannot read {0:?} as q: expected a decimal or a/b")]
    BadQ(String),
    #[error("q = {0} outside (0, 1)")]
    QOutOfRange(f64),
    #[error("q = {q} outside [{}, {}] for spectral commands", SPECTRAL_Q_RANGE.0, SPECTRAL_Q_RANGE.1)]
    SpectralQ { q: f64 },
    #[error("nmax = {0} exceeds the limit {NMAX_LIMIT}")]
    NmaxTooLarge(u32),
    #[error("{0} has no exact mode")]
    NoExactMode(&'static str),
    #[error("invalid option: {0}")]
    Invalid(String),
    #[error(transparent)]
    Parse(#[from] PolyParseError),
    #[error(transparent)]
    Element(#[from] ParseError),
    #[error(transparent)]
    Rewrite(#[from] RewriteError),
    #[error(transparent)]
    Dirac(#[from] DiracError),
    #[error("thread pool: {0}")]
    Threads(String),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
pub enum Mode {
    Exact,
    Float,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
    Table,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
pub enum RelationForm {
    Derived,
    AsPrinted,
}

#[derive(Parser, Debug)]
#[command(
    name = "cp2q",
    version,
    about = "Representations of U_q(su(3)), the Dolbeault complex of CP²_q and its Dirac operator"
)]
pub struct Cli {
    #[command(flatten)]
    pub global: GlobalArgs,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(clap::Args, Debug, Clone)]
pub struct GlobalArgs {
    /// Deformation parameter, decimal or `a/b`.
    #[arg(long, global = true)]
    pub q: Option<String>,
    #[arg(long, global = true, value_enum, default_value_t = Mode::Float)]
    pub mode: Mode,
    /// Truncation of the Peter–Weyl sums.
    #[arg(long, global = true)]
    pub nmax: Option<u32>,
    #[arg(long, global = true)]
    pub tol: Option<f64>,
    /// Worker threads (default: all cores).
    #[arg(long, global = true)]
    pub threads: Option<usize>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Table)]
    pub format: Format,
    /// Result cache directory; overrides CP2Q_CACHE_DIR.
    #[arg(long, global = true)]
    pub cache_dir: Option<PathBuf>,
    #[arg(long, global = true)]
    pub no_cache: bool,
}

#[derive(Subcommand, Debug, Clone, Serialize)]
#[serde(rename_all = "kebab-case", tag = "command")]
pub enum Command {
    /// Algebra relations on every irrep with n1 + n2 <= max-total.
    VerifyHopf {
        #[arg(long, default_value_t = 6)]
        max_total: u32,
    },
    /// C_q is the closed-form scalar and central; white and black actions agree.
    VerifyCasimir {
        #[arg(long, default_value_t = 6)]
        max_total: u32,
        /// Bound on n1 + n2 for the white/black comparison.
        #[arg(long, default_value_t = 3)]
        sides_total: u32,
        /// Check a different element for centrality instead, e.g. "K1 K1'".
        #[arg(long)]
        element: Option<String>,
    },
    /// Lowering words reproduce the GT basis; lemma commutators.
    VerifyGt {
        #[arg(long, default_value_t = 4)]
        max_total: u32,
        #[arg(long, default_value_t = 3)]
        power: u32,
    },
    /// ΔX and ΔY closed forms on V ⊗ W.
    VerifyCoproduct {
        #[arg(long, default_value_t = 2)]
        max_total: u32,
    },
    /// ∂̄² = 0, (∂̄†)² = 0, adjointness and equivariance.
    VerifyComplex {
        #[arg(long, default_value_t = 200)]
        pairs: usize,
        #[arg(long, default_value_t = 3)]
        samples: usize,
        #[arg(long, default_value_t = 7)]
        seed: u64,
    },
    /// Eigenvalues of D with multiplicities.
    Spectrum {
        /// Mixing weight; default √([2]/2).
        #[arg(long)]
        s: Option<f64>,
        /// Also diagonalize the assembled dense operator.
        #[arg(long)]
        dense: bool,
    },
    /// Harmonic forms and the Hodge decomposition per degree.
    Cohomology,
    /// Shell increments of Tr (1 + D²)^(-ε/2).
    Summability {
        #[arg(long, value_delimiter = ',', default_value = "0.1")]
        eps: Vec<f64>,
    },
    /// Normal form of a polynomial in z1..z3, z1*..z3*, p11..p33.
    Rewrite {
        expr: String,
        /// Check that both sides share a normal form.
        #[arg(long)]
        equals: Option<String>,
    },
    /// The CP²_q relation families, P² = P, Tr_q P = 1, confluence, q = 1 check.
    VerifyCp2Relations {
        #[arg(long, value_enum, default_value_t = RelationForm::Derived)]
        form: RelationForm,
        #[arg(long, default_value_t = 4)]
        confluence_degree: usize,
        #[arg(long, default_value_t = 100)]
        points: usize,
        #[arg(long, default_value_t = 11)]
        seed: u64,
    },
    /// Transition functions and the local ∂̄ at random SU(3) points.
    ClassicalCheck {
        #[arg(long, default_value_t = 100)]
        samples: usize,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        #[arg(long, default_value_t = 1e-6)]
        fd_tol: f64,
    },
    /// Subspace bases and dimensions.
    Decompose {
        /// sphere, cp2, line:N, form1 or forms.
        #[arg(long, default_value = "cp2")]
        kind: String,
        /// Emit the basis (or blocks) as JSON lines.
        #[arg(long)]
        dump: bool,
    },
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::VerifyHopf { .. } => "verify-hopf",
            Command::VerifyCasimir { .. } => "verify-casimir",
            Command::VerifyGt { .. } => "verify-gt",
            Command::VerifyCoproduct { .. } => "verify-coproduct",
            Command::VerifyComplex { .. } => "verify-complex",
            Command::Spectrum { .. } => "spectrum",
            Command::Cohomology => "cohomology",
            Command::Summability { .. } => "summability",
            Command::Rewrite { .. } => "rewrite",
            Command::VerifyCp2Relations { .. } => "verify-cp2-relations",
            Command::ClassicalCheck { .. } => "classical-check",
            Command::Decompose { .. } => "decompose",
        }
    }

    fn is_spectral(&self) -> bool {
        matches!(
            self,
            Command::Spectrum { .. } | Command::Cohomology | Command::Summability { .. }
        )
    }

    fn default_nmax(&self) -> u32 {
        match self {
            Command::VerifyComplex { .. } | Command::Spectrum { .. } | Command::Cohomology => 3,
            Command::Summability { .. } => 8,
            _ => 3,
        }
    }

    fn default_tol(&self) -> f64 {
        match self {
            Command::VerifyHopf { .. } => 1e-11,
            Command::VerifyGt { .. } | Command::Spectrum { .. } => 1e-9,
            _ => 1e-10,
        }
    }
}

/// Validated settings shared by the subcommands.
#[derive(Clone, Debug, Serialize)]
pub struct RunConfig {
    #[serde(serialize_with = "ser_q")]
    pub q: QValue,
    pub mode: Mode,
    pub nmax: u32,
    pub tol: f64,
}

fn ser_q<S: serde::Serializer>(q: &QValue, s: S) -> Result<S::Ok, S::Error> {
    s.serialize_f64(q.get())
}

/// Reads `0.5` or `1/2`.
pub fn parse_q(src: &str) -> Result<f64, CliError> {
    let bad = || CliError::BadQ(src.to_string());
    let t = src.trim();
    match t.split_once('/') {
        Some((a, b)) => {
            let a: f64 = a.trim().parse().map_err(|_| bad())?;
            let b: f64 = b.trim().parse().map_err(|_| bad())?;
            if b == 0.0 {
                return Err(bad());
            }
            Ok(a / b)
        }
        None => t.parse().map_err(|_| bad()),
    }
}

impl RunConfig {
    pub fn resolve(g: &GlobalArgs, cmd: &Command) -> Result<Self, CliError> {
        let q = match &g.q {
            Some(s) => parse_q(s)?,
            None => 0.5,
        };
        let qv = QValue::new(q).map_err(|_| CliError::QOutOfRange(q))?;
        if cmd.is_spectral() && !(SPECTRAL_Q_RANGE.0..=SPECTRAL_Q_RANGE.1).contains(&q) {
            return Err(CliError::SpectralQ { q });
        }
        let nmax = g.nmax.unwrap_or_else(|| cmd.default_nmax());
        if nmax > NMAX_LIMIT {
            return Err(CliError::NmaxTooLarge(nmax));
        }
        if g.mode == Mode::Exact
            && !matches!(cmd, Command::VerifyHopf { .. } | Command::Rewrite { .. })
        {
            return Err(CliError::NoExactMode(cmd.name()));
        }
        let tol = g.tol.unwrap_or_else(|| cmd.default_tol());
        if !(tol.is_finite() && tol > 0.0) {
            return Err(CliError::Invalid(format!("tol = {tol}")));
        }
        Ok(Self {
            q: qv,
            mode: g.mode,
            nmax,
            tol,
        })
    }
}

/// What a command produced, in every output format.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Outcome {
    pub command: String,
    pub passed: bool,
    pub failures: Vec<Check>,
    pub result: Value,
    pub table: String,
    pub csv: String,
}

impl Outcome {
    fn from_reports(command: &str, reports: &[Report], result: Value) -> Self {
        let failures: Vec<Check> = reports.iter().flat_map(|r| r.failures().cloned()).collect();
        let mut table = String::new();
        for r in reports {
            let _ = write!(table, "{r}");
        }
        Self {
            command: command.to_string(),
            passed: failures.is_empty(),
            failures,
            result,
            table,
            csv: reports_csv(reports),
        }
    }

    pub fn exit_code(&self) -> i32 {
        if self.passed {
            0
        } else {
            1
        }
    }

    /// Deterministic JSON: keys sorted, fixed float formatting.
    pub fn to_json(&self) -> String {
        let v = json!({
            "command": self.command,
            "passed": self.passed,
            "failures": self.failures,
            "result": self.result,
        });
        serde_json::to_string_pretty(&v).expect("json") + "\n"
    }

    pub fn render(&self, f: Format) -> String {
        match f {
            Format::Json => self.to_json(),
            Format::Csv => self.csv.clone(),
            Format::Table => {
                let mut s = self.table.clone();
                let _ = writeln!(
                    s,
                    "{}: {}",
                    self.command,
                    if self.passed { "PASS" } else { "FAIL" }
                );
                s
            }
        }
    }
}

fn reports_csv(reports: &[Report]) -> String {
    let mut s = String::from("report,check,residual,tol,passed\n");
    for r in reports {
        for c in &r.checks {
            let _ = writeln!(
                s,
                "\"{}\",\"{}\",{:e},{:e},{}",
                r.title, c.name, c.residual, c.tol, c.passed
            );
        }
    }
    s
}

fn merge(title: String, reports: impl IntoIterator<Item = Report>) -> Report {
    let mut out = Report::new(title);
    for r in reports {
        out.extend(r);
    }
    out
}

fn labels(max_total: u32) -> Vec<IrrepLabel> {
    IrrepLabel::up_to_total(max_total)
}

fn to_value<T: Serialize>(x: &T) -> Value {
    serde_json::to_value(x).expect("serializable")
}

fn exact_hopf(max_total: u32, q: QValue, tol: f64) -> Report {
    use GeneratorName::*;
    let mut r = Report::new(format!("exact diagonal generators, n1 + n2 <= {max_total}"));
    for l in labels(max_total) {
        for (g, gi) in [(K1, K1Inv), (K2, K2Inv), (H, HInv)] {
            let a = exact_diagonal(l, g).expect("diagonal");
            let b = exact_diagonal(l, gi).expect("diagonal");
            let ok = a.iter().zip(&b).all(|(x, y)| (x * y).is_one());
            r.push(Check::flag(
                format!("{} {} = 1 on V{l}", g.symbol(), gi.symbol()),
                ok,
            ));
            let m = float_matrix(l, g, q);
            let dev = a
                .iter()
                .enumerate()
                .map(|(i, x)| (x.eval(q.get()) - m.get(i, i)).abs() / x.eval(q.get()).abs())
                .fold(0.0, f64::max);
            r.record(
                &format!("exact {} agrees with float at q", g.symbol()),
                dev,
                tol,
            );
        }
    }
    r
}

fn decompose(
    kind: &str,
    nmax: u32,
    q: QValue,
    dump: bool,
) -> Result<(Value, String, String), CliError> {
    if kind == "forms" {
        let blocks = block_structure(nmax);
        let mut dims = [0usize; 3];
        let mut counts = std::collections::BTreeMap::<String, usize>::new();
        for b in &blocks {
            for s in &b.slots {
                dims[s.degree() as usize] += 1;
            }
            let key = match b.index.family {
                Family::Diag(n) => format!("diag({n})"),
                Family::OffDiag(m) => format!("offdiag({m})"),
            };
            *counts.entry(key).or_default() += 1;
        }
        let total: usize = dims.iter().sum();
        let mut table = format!(
            "Dolbeault blocks up to nmax = {nmax}: {} blocks, dim {total}\n",
            blocks.len()
        );
        let _ = writeln!(table, "degree dims {dims:?}");
        for (k, v) in &counts {
            let _ = writeln!(table, "  {k:<12} {v} blocks");
        }
        let mut csv = String::from("family,blocks\n");
        for (k, v) in &counts {
            let _ = writeln!(csv, "{k},{v}");
        }
        if dump {
            table.clear();
            for b in &blocks {
                table.push_str(&serde_json::to_string(&b.dump(q)).expect("json"));
                table.push('\n');
            }
        }
        let v = json!({"kind": "forms", "nmax": nmax, "blocks": blocks.len(), "degree_dims": dims, "total_dim": total, "family_blocks": counts});
        return Ok((v, table, csv));
    }
    let sk = match kind {
        "sphere" => SubspaceKind::Sphere,
        "cp2" => SubspaceKind::Cp2,
        "form1" => SubspaceKind::Form1Doublet,
        k => match k.strip_prefix("line:").and_then(|n| n.parse::<i32>().ok()) {
            Some(n) => SubspaceKind::LineBundle(n),
            None => return Err(CliError::Invalid(format!("kind {kind:?}"))),
        },
    };
    let basis = subspace_basis(SubspaceSpec { kind: sk, nmax });
    let mut per = std::collections::BTreeMap::<(u32, u32), usize>::new();
    for b in &basis {
        *per.entry((b.label.n1, b.label.n2)).or_default() += 1;
    }
    let irreps: Vec<Value> = per
        .iter()
        .map(|(&(n1, n2), &d)| json!({"n1": n1, "n2": n2, "dim": d}))
        .collect();
    let mut table = format!("{kind} up to nmax = {nmax}: dimension {}\n", basis.len());
    let mut csv = String::from("n1,n2,dim\n");
    for (&(n1, n2), d) in &per {
        let _ = writeln!(table, "  V({n1},{n2}) {d}");
        let _ = writeln!(csv, "{n1},{n2},{d}");
    }
    if dump {
        table.clear();
        for b in &basis {
            table.push_str(&serde_json::to_string(&b.dump()).expect("json"));
            table.push('\n');
        }
    }
    let v = json!({"kind": kind, "nmax": nmax, "dimension": basis.len(), "irreps": irreps});
    Ok((v, table, csv))
}

/// Runs one command without touching the cache.
pub fn execute(cmd: &Command, cfg: &RunConfig) -> Result<Outcome, CliError> {
    let (q, tol, nmax) = (cfg.q, cfg.tol, cfg.nmax);
    let name = cmd.name();
    let out = match cmd {
        Command::VerifyHopf { max_total } => {
            let r = if cfg.mode == Mode::Exact {
                exact_hopf(*max_total, q, tol)
            } else {
                merge(
                    format!("Hopf relations, n1 + n2 <= {max_total}, q = {q}"),
                    labels(*max_total)
                        .into_iter()
                        .map(|l| verify_hopf_relations(l, q, tol)),
                )
            };
            Outcome::from_reports(name, std::slice::from_ref(&r), to_value(&r))
        }
        Command::VerifyCasimir {
            element: Some(src),
            max_total,
            ..
        } => {
            let x = parse_element(src)?;
            let mut r = Report::new(format!("{x} central, n1 + n2 <= {max_total}, q = {q}"));
            let mut rows = Vec::new();
            for l in labels(*max_total) {
                let m = x.evaluate(l, q);
                let scale = m.amax().max(1.0);
                for g in GeneratorName::ALL {
                    let gm = float_matrix(l, g, q).to_dense();
                    r.record("[x, g] = 0", (&m * &gm - &gm * &m).amax() / scale, tol);
                }
                let mean = m.trace() / l.dim() as f64;
                let off = (&m - DMatrix::identity(l.dim(), l.dim()) * mean).amax() / scale;
                rows.push(json!({"n1": l.n1, "n2": l.n2, "mean": mean, "off_scalar": off}));
            }
            Outcome::from_reports(
                name,
                std::slice::from_ref(&r),
                json!({"element": x.to_string(), "values": rows, "report": r}),
            )
        }
        Command::VerifyCasimir {
            max_total,
            sides_total,
            ..
        } => {
            let checks: Vec<_> = labels(*max_total)
                .into_iter()
                .map(|l| verify_casimir_scalar(l, q, tol))
                .collect();
            let scalars = merge(
                format!("Casimir scalars, n1 + n2 <= {max_total}, q = {q}"),
                checks.iter().map(|c| c.report.clone()),
            );
            let sides = merge(
                format!("white and black Casimir, n1 + n2 <= {sides_total}"),
                labels(*sides_total)
                    .into_iter()
                    .map(|l| verify_casimir_sides(l, q, tol)),
            );
            let rows: Vec<Value> = checks
                .iter()
                .map(|c| json!({"n1": c.label.n1, "n2": c.label.n2, "expected": c.expected, "scalar": c.scalar}))
                .collect();
            Outcome::from_reports(
                name,
                &[scalars.clone(), sides.clone()],
                json!({"values": rows, "reports": [scalars, sides]}),
            )
        }
        Command::VerifyGt { max_total, power } => {
            let lemma = merge(
                format!("lowering words, n1 + n2 <= {max_total}, q = {q}"),
                labels(*max_total)
                    .into_iter()
                    .map(|l| verify_gt_lemma(l, q, tol)),
            );
            let comm = merge(
                format!("lemma commutators, powers <= {power}"),
                labels(*max_total)
                    .into_iter()
                    .map(|l| verify_lemma_commutators(l, *power, q, tol)),
            );
            Outcome::from_reports(name, &[lemma.clone(), comm.clone()], json!([lemma, comm]))
        }
        Command::VerifyCoproduct { max_total } => {
            let ls = labels(*max_total);
            let mut rs = Vec::new();
            for &v in &ls {
                for &w in &ls {
                    rs.push(verify_coproduct_identity(v, w, q, tol));
                }
            }
            let r = merge(
                format!("coproduct closed forms, n1 + n2 <= {max_total}, q = {q}"),
                rs,
            );
            Outcome::from_reports(name, std::slice::from_ref(&r), to_value(&r))
        }
        Command::VerifyComplex {
            pairs,
            samples,
            seed,
        } => {
            let c = ComplexCheckConfig {
                nmax,
                tol,
                pairs: *pairs,
                samples: *samples,
                seed: *seed,
            };
            let r = verify_complex(&c, q);
            Outcome::from_reports(name, std::slice::from_ref(&r), to_value(&r))
        }
        Command::Spectrum { s, dense } => {
            let mut dc = DiracConfig::new(q, nmax);
            if let Some(s) = s {
                dc = dc.with_s(*s)?;
            }
            let table = spectrum(&dc)?;
            let mut reports = vec![verify_laplacian_identity(&dc.with_tol(1e-10))];
            if s.is_none() {
                reports.push(compare_spectra(&table, &closed_form_spectrum(q, nmax), tol));
            }
            if *dense {
                reports.push(verify_dense_spectrum(&dc, &table, tol));
            }
            let mut o = Outcome::from_reports(
                name,
                &reports,
                json!({"spectrum": table, "reports": reports}),
            );
            o.table = format!("{table}{}", o.table);
            o.csv = table.to_csv();
            o
        }
        Command::Cohomology => {
            let h = cohomology(&DiracConfig::new(q, nmax));
            let r = h.report(tol);
            let mut o = Outcome::from_reports(
                name,
                std::slice::from_ref(&r),
                json!({"betti": h.betti, "cohomology": h, "report": r}),
            );
            o.csv = String::from("degree,dim,harmonic,exact_rank,coexact_rank\n");
            for d in &h.degrees {
                let _ = writeln!(
                    o.csv,
                    "{},{},{},{},{}",
                    d.degree, d.dim, d.harmonic, d.exact_rank, d.coexact_rank
                );
            }
            o
        }
        Command::Summability { eps } => {
            if eps.iter().any(|e| !(e.is_finite() && *e > 0.0)) {
                return Err(CliError::Invalid(format!("eps {eps:?}")));
            }
            let table = spectrum(&DiracConfig::new(q, nmax))?;
            let probes = summability_probe(&table, eps);
            let reports: Vec<Report> = probes.iter().map(|p| p.report()).collect();
            let mut o = Outcome::from_reports(
                name,
                &reports,
                json!({"tables": probes, "reports": reports}),
            );
            o.csv = String::from("epsilon,n,multiplicity,increment,partial_sum,ratio\n");
            for p in &probes {
                for s in &p.shells {
                    let ratio = s.ratio.map_or(String::new(), |r| format!("{r:e}"));
                    let _ = writeln!(
                        o.csv,
                        "{},{},{},{:e},{:e},{ratio}",
                        p.epsilon, s.n, s.multiplicity, s.increment, s.partial_sum
                    );
                }
            }
            o
        }
        Command::Rewrite { expr, equals } => {
            let rules = sphere_rules();
            let f = parse_poly(expr)?;
            let nf = rules.normal_form(&f)?;
            let mut value =
                json!({"input": expr, "normal_form": nf.to_string(), "terms": nf.num_terms()});
            let mut table = format!("{nf}\n");
            let mut r = Report::new("rewrite");
            if let Some(rhs) = equals {
                let g = parse_poly(rhs)?;
                let ok = rules.verify_identity(&f, &g)?;
                value["equals"] = json!({"rhs": rhs, "normal_form": rules.normal_form(&g)?.to_string(), "holds": ok});
                r.push(Check::flag(format!("{expr} = {rhs}"), ok));
                table.push_str(&format!("{r}"));
            }
            let mut o = Outcome::from_reports(name, &[r], value);
            o.table = table;
            o.csv = format!("input,normal_form\n\"{expr}\",\"{nf}\"\n");
            o
        }
        Command::VerifyCp2Relations {
            form,
            confluence_degree,
            points,
            seed,
        } => {
            let rules = sphere_rules();
            let ff = match form {
                RelationForm::Derived => FamiliesForm::Derived,
                RelationForm::AsPrinted => FamiliesForm::AsPrinted,
            };
            let rel = verify_cp2_relations(rules, ff)?;
            let conf = confluence_check(rules, *confluence_degree)?;
            let mut cr = Report::new(format!("local confluence up to degree {confluence_degree}"));
            cr.push(Check::flag(
                format!("{} reduct pairs joinable", conf.pairs),
                conf.is_confluent(),
            ));
            for p in &conf.failures {
                cr.push(Check::flag(format!("{p}"), false));
            }
            let mut ids = cp2_relations(ff);
            ids.extend(projector_identities());
            ids.push(q_trace_identity());
            let mut rng = ChaCha8Rng::seed_from_u64(*seed);
            let q1 = verify_q1_cross_check(&ids, *points, &mut rng, tol);
            let v = json!({
                "relations": rel,
                "confluence": {"max_deg": conf.max_deg, "overlaps": conf.overlaps, "pairs": conf.pairs, "failures": conf.failures.len()},
                "q1": q1,
            });
            Outcome::from_reports(name, &[rel, cr, q1], v)
        }
        Command::ClassicalCheck {
            samples,
            seed,
            fd_tol,
        } => {
            let s = run_classical_check(*samples, *seed, tol, *fd_tol);
            Outcome::from_reports(name, std::slice::from_ref(&s.report), to_value(&s))
        }
        Command::Decompose { kind, dump } => {
            let (v, table, csv) = decompose(kind, nmax, q, *dump)?;
            Outcome {
                command: name.to_string(),
                passed: true,
                failures: vec![],
                result: v,
                table,
                csv,
            }
        }
    };
    Ok(out)
}

#[derive(Serialize)]
struct CacheKeyView<'a> {
    command: &'a Command,
    config: &'a RunConfig,
}

/// Resolves the configuration, consults the cache and runs the command in a
/// pool of the requested size.
pub fn run(cli: &Cli) -> Result<Outcome, CliError> {
    let cfg = RunConfig::resolve(&cli.global, &cli.command)?;
    let cache = if cli.global.no_cache {
        None
    } else {
        ResultCache::resolve(cli.global.cache_dir.as_deref())
    };
    let key = ResultCache::key(&CacheKeyView {
        command: &cli.command,
        config: &cfg,
    });
    if let Some(hit) = cache.as_ref().and_then(|c| c.load(&key)) {
        return Ok(hit);
    }
    let mut pool = rayon::ThreadPoolBuilder::new();
    if let Some(n) = cli.global.threads {
        if n == 0 {
            return Err(CliError::Invalid("threads = 0".into()));
        }
        pool = pool.num_threads(n);
    }
    let pool = pool.build().map_err(|e| CliError::Threads(e.to_string()))?;
    let out = pool.install(|| execute(&cli.command, &cfg))?;
    if let Some(c) = &cache {
        // a failed write only costs a recomputation next time
        let _ = c.store(&key, &out);
    }
    Ok(out)
}

/// Entry point for the binary; returns the process exit code.
pub fn main_with<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { 2 } else { 0 };
        }
    };
    match run(&cli) {
        Ok(o) => {
            print!("{}", o.render(cli.global.format));
            o.exit_code()
        }
        Err(e) => {
            eprintln!("error: {e}");
            2
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cli(args: &[&str]) -> Cli {
        Cli::try_parse_from(std::iter::once("cp2q").chain(args.iter().copied())).unwrap()
    }

    fn outcome(args: &[&str]) -> Outcome {
        let mut c = cli(args);
        c.global.no_cache = true;
        run(&c).unwrap()
    }

    #[test]
    fn q_parsing() {
        assert_eq!(parse_q("1/2").unwrap(), 0.5);
        assert_eq!(parse_q(" 0.25 ").unwrap(), 0.25);
        assert!(parse_q("a").is_err());
        assert!(parse_q("1/0").is_err());
    }

    #[test]
    fn guards() {
        let c = cli(&["spectrum", "--q", "0.2"]);
        assert!(matches!(run(&c), Err(CliError::SpectralQ { .. })));
        let c = cli(&["decompose", "--nmax", "9"]);
        assert!(matches!(run(&c), Err(CliError::NmaxTooLarge(9))));
        let c = cli(&["spectrum", "--mode", "exact"]);
        assert!(matches!(run(&c), Err(CliError::NoExactMode("spectrum"))));
        let c = cli(&["verify-hopf", "--q", "1.5"]);
        assert!(matches!(run(&c), Err(CliError::QOutOfRange(_))));
        assert_eq!(main_with(["cp2q", "rewrite", "z4"]), 2);
        assert_eq!(main_with(["cp2q", "no-such-command"]), 2);
    }

    #[test]
    fn spectrum_rows() {
        let o = outcome(&["spectrum", "--q", "0.5", "--nmax", "3"]);
        assert!(o.passed, "{}", o.table);
        let rows = o.result["spectrum"]["rows"].as_array().unwrap();
        let has = |v: f64, m: u64| {
            rows.iter().any(|r| {
                (r["eigenvalue"].as_f64().unwrap() - v).abs() < 1e-6 && r["multiplicity"] == m
            })
        };
        assert!(has(2.049390, 8) && has(-2.049390, 8));
        assert!(has(3.622844, 10) && has(-3.622844, 10));
    }

    #[test]
    fn cohomology_and_relations() {
        let o = outcome(&["cohomology", "--q", "0.5", "--nmax", "2"]);
        assert_eq!(o.result["betti"], json!([1, 0, 0]));
        let o = outcome(&[
            "verify-cp2-relations",
            "--confluence-degree",
            "3",
            "--points",
            "10",
        ]);
        assert!(o.passed, "{}", o.table);
        let o = outcome(&[
            "verify-cp2-relations",
            "--form",
            "as-printed",
            "--confluence-degree",
            "2",
            "--points",
            "5",
        ]);
        assert_eq!(o.exit_code(), 1);
        assert!(!o.failures.is_empty());
    }

    #[test]
    fn rewrite_command() {
        let o = outcome(&["rewrite", "q^4 p11 + q^2 p22 + p33", "--equals", "1"]);
        assert!(o.passed);
        assert_eq!(o.result["equals"]["normal_form"], "1");
        let o = outcome(&["rewrite", "z1 z2", "--equals", "z2 z1"]);
        assert_eq!(o.exit_code(), 1);
    }

    #[test]
    fn element_centrality() {
        let o = outcome(&["verify-casimir", "--element", "K1 K1'", "--max-total", "2"]);
        assert!(o.passed, "{}", o.table);
        let o = outcome(&["verify-casimir", "--element", "E1 F1", "--max-total", "1"]);
        assert_eq!(o.exit_code(), 1);
        let c = cli(&["verify-casimir", "--element", "K7"]);
        assert!(matches!(run(&c), Err(CliError::Element(_))));
    }

    #[test]
    fn exact_hopf_mode() {
        let o = outcome(&["verify-hopf", "--mode", "exact", "--max-total", "2"]);
        assert!(o.passed, "{}", o.table);
    }

    #[test]
    fn decompose_dims() {
        let o = outcome(&["decompose", "--kind", "forms", "--nmax", "3"]);
        assert_eq!(o.result["total_dim"], 759);
        let o = outcome(&["decompose", "--kind", "cp2", "--nmax", "1"]);
        // V(0,0) + V(1,1)
        assert_eq!(o.result["dimension"], 9);
        let o = outcome(&["decompose", "--kind", "line:3", "--nmax", "0", "--dump"]);
        assert_eq!(o.table.lines().count(), 10);
    }

    #[test]
    fn deterministic_across_threads_and_cache() {
        let dir = tempfile::tempdir().unwrap();
        let args = ["cohomology", "--nmax", "2", "--format", "json"];
        let mut a = cli(&args);
        a.global.threads = Some(1);
        a.global.no_cache = true;
        let mut b = cli(&args);
        b.global.threads = Some(4);
        b.global.cache_dir = Some(dir.path().to_path_buf());
        let cold = run(&a).unwrap().to_json();
        let first = run(&b).unwrap().to_json();
        assert_eq!(std::fs::read_dir(dir.path()).unwrap().count(), 1);
        let warm = run(&b).unwrap().to_json();
        assert_eq!(cold, first);
        assert_eq!(first, warm);
    }
}
