//! Manifold spec files, pipeline orchestration, and report emission.
//!
//! The spec file is JSON: complex numbers are `[re, im]` pairs, indices are
//! 1-based, and `kind` labels the monomial type of each structure-constant
//! term (`"10-10"` for `phi_i ^ phi_j`, `"10-01"` for `phi_i ^ phibar_j`,
//! `"01-01"` for `phibar_i ^ phibar_j`, which never validates). Exports use
//! canonical key and term order so re-parsing an export is the identity at
//! the coefficient level.

use crate::analysis::Analysis;
use crate::catalog::{self, CatalogEntry};
use crate::classify::{theorem_suite, CheckStatus, Report};
use crate::exterior::{DphiTerm, Form, FrameAlgebra, Violation, C};
use crate::hermitian::HermitianMetric;
use crate::search::{
    minimize, MetricParameterization, SearchOptions, SearchStatus, SearchTrace,
};
use serde::{Deserialize, Serialize};
use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};
use thiserror::Error;

/// Exit codes of the command-line interface: 0 pass, 1 verification or
/// convergence failure, 2 invalid input.
pub const EXIT_OK: i32 = 0;
pub const EXIT_VERIFY_FAIL: i32 = 1;
pub const EXIT_INVALID: i32 = 2;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("{path}: invalid JSON: {message}")]
    Json { path: PathBuf, message: String },
    #[error("{0}")]
    Invalid(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        EXIT_INVALID
    }

    fn invalid(msg: impl Into<String>) -> CliError {
        CliError::Invalid(msg.into())
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
struct SpecTerm {
    k: usize,
    kind: String,
    i: usize,
    j: usize,
    coeff: [f64; 2],
}

/// On-disk manifold description. `metric` entries are `[re, im]` pairs;
/// omitting it means the identity metric.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ManifoldSpecFile {
    pub name: String,
    pub dim: usize,
    dphi: Vec<SpecTerm>,
    #[serde(skip_serializing_if = "Option::is_none")]
    metric: Option<Vec<Vec<[f64; 2]>>>,
}

/// A parsed and validated manifold spec.
#[derive(Debug, Clone)]
pub struct ManifoldInput {
    pub name: String,
    pub algebra: FrameAlgebra,
    pub metric: HermitianMetric,
}

/// Default tolerance: `HERMLAB_TOL` when set and parseable, else 1e-9.
pub fn default_tol() -> f64 {
    std::env::var("HERMLAB_TOL")
        .ok()
        .and_then(|s| s.parse::<f64>().ok())
        .filter(|t| *t > 0.0)
        .unwrap_or(crate::DEFAULT_TOL)
}

/// Parses and validates a spec from JSON text.
pub fn parse_spec_str(text: &str, origin: &Path, tol: f64) -> Result<ManifoldInput, CliError> {
    let file: ManifoldSpecFile = serde_json::from_str(text)
        .map_err(|e| CliError::Json { path: origin.to_path_buf(), message: e.to_string() })?;
    spec_to_input(&file, tol)
}

/// Validates an in-memory spec file. Structural validation (d^2 = 0,
/// metric positivity) floors the tolerance at rounding level so that
/// tightening the check tolerance below machine precision still parses
/// physically valid inputs.
pub fn spec_to_input(file: &ManifoldSpecFile, tol: f64) -> Result<ManifoldInput, CliError> {
    let vtol = tol.max(1e-12);
    let n = file.dim;
    if !(2..=crate::exterior::MAX_DIM).contains(&n) {
        return Err(CliError::invalid(format!(
            "dim = {} outside supported range 2..={}",
            n,
            crate::exterior::MAX_DIM
        )));
    }
    let mut terms = Vec::with_capacity(file.dphi.len());
    for (idx, t) in file.dphi.iter().enumerate() {
        let check = |v: usize, what: &str| -> Result<usize, CliError> {
            if v == 0 || v > n {
                Err(CliError::invalid(format!(
                    "dphi term {}: {} = {} out of range 1..={}",
                    idx, what, v, n
                )))
            } else {
                Ok(v - 1)
            }
        };
        let k = check(t.k, "k")?;
        let i = check(t.i, "i")?;
        let j = check(t.j, "j")?;
        let coeff = C::new(t.coeff[0], t.coeff[1]);
        let term = match t.kind.as_str() {
            "10-10" => DphiTerm::HolHol { k, i, j, coeff },
            "10-01" => DphiTerm::HolAnti { k, i, j, coeff },
            "01-01" => {
                if coeff.norm() > 0.0 {
                    return Err(CliError::invalid(format!(
                        "dphi term {}: non-integrable: (0,2) part in dphi_{}",
                        idx, t.k
                    )));
                }
                continue;
            }
            other => {
                return Err(CliError::invalid(format!(
                    "dphi term {}: unknown kind '{}' (expected 10-10, 10-01, or 01-01)",
                    idx, other
                )))
            }
        };
        terms.push(term);
    }
    let algebra = FrameAlgebra::from_terms(n, &terms, vtol).map_err(|e| {
        let crate::exterior::AlgebraError::Invalid(violations) = &e;
        let msgs: Vec<String> = violations.iter().map(Violation::to_string).collect();
        CliError::invalid(format!("invalid structure constants: {}", msgs.join("; ")))
    })?;
    let metric = match &file.metric {
        None => HermitianMetric::identity(n),
        Some(rows) => {
            if rows.len() != n || rows.iter().any(|r| r.len() != n) {
                return Err(CliError::invalid(format!("metric: expected {n}x{n} matrix")));
            }
            let g: Vec<Vec<C>> =
                rows.iter().map(|r| r.iter().map(|z| C::new(z[0], z[1])).collect()).collect();
            HermitianMetric::new(g, vtol)
                .map_err(|e| CliError::invalid(format!("metric: {e}")))?
        }
    };
    Ok(ManifoldInput { name: file.name.clone(), algebra, metric })
}

pub fn load_spec(path: &Path, tol: f64) -> Result<ManifoldInput, CliError> {
    let text = fs::read_to_string(path)
        .map_err(|e| CliError::Io { path: path.to_path_buf(), source: e })?;
    parse_spec_str(&text, path, tol)
}

/// Serializes `(name, algebra, metric)` as a spec file with canonical term
/// order (sorted by k, kind, i, j) and full coefficient precision.
pub fn export_spec(name: &str, algebra: &FrameAlgebra, metric: &HermitianMetric) -> String {
    let n = algebra.dim();
    let mut dphi: Vec<SpecTerm> = Vec::new();
    for k in 0..n {
        let f = algebra.dphi(k);
        for (mask, c) in f.terms() {
            let (p, _) = Form::mask_bidegree(n, mask);
            let low = mask & ((1u32 << n) - 1);
            let high = mask >> n;
            let (kind, i, j) = if p == 2 {
                let i = low.trailing_zeros() as usize;
                let j = (low & (low - 1)).trailing_zeros() as usize;
                ("10-10", i, j)
            } else {
                let i = low.trailing_zeros() as usize;
                let j = high.trailing_zeros() as usize;
                ("10-01", i, j)
            };
            dphi.push(SpecTerm {
                k: k + 1,
                kind: kind.to_string(),
                i: i + 1,
                j: j + 1,
                coeff: [c.re, c.im],
            });
        }
    }
    dphi.sort_by(|a, b| {
        (a.k, a.kind.clone(), a.i, a.j).cmp(&(b.k, b.kind.clone(), b.i, b.j))
    });
    let metric_rows: Vec<Vec<[f64; 2]>> = metric
        .matrix()
        .iter()
        .map(|row| row.iter().map(|z| [z.re, z.im]).collect())
        .collect();
    let file = ManifoldSpecFile {
        name: name.to_string(),
        dim: n,
        dphi,
        metric: Some(metric_rows),
    };
    serde_json::to_string_pretty(&file).expect("spec serialization cannot fail")
}

pub fn export_entry(entry: &CatalogEntry) -> String {
    export_spec(entry.name, &entry.algebra, &entry.metric)
}

/// Atomic file write: temp file in the same directory, then rename.
pub fn write_atomic(path: &Path, contents: &str) -> Result<(), CliError> {
    let dir = path.parent().filter(|p| !p.as_os_str().is_empty()).unwrap_or(Path::new("."));
    let tmp = dir.join(format!(
        ".{}.tmp{}",
        path.file_name().map(|s| s.to_string_lossy().to_string()).unwrap_or_default(),
        std::process::id()
    ));
    fs::write(&tmp, contents).map_err(|e| CliError::Io { path: tmp.clone(), source: e })?;
    fs::rename(&tmp, path).map_err(|e| CliError::Io { path: path.to_path_buf(), source: e })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ReportFormat {
    Text,
    Json,
}

/// Runs the full pipeline on a validated input and produces the report.
pub fn analyze(input: &ManifoldInput, tol: f64, seed: Option<u64>) -> Result<Report, CliError> {
    let an = Analysis::new(&input.algebra, &input.metric, tol)
        .map_err(|e| CliError::invalid(format!("reduction failed: {e}")))?;
    Ok(theorem_suite(&an, &input.name, tol, seed))
}

/// Renders a report as human-readable text (residuals to 3 significant
/// digits; JSON output carries full precision).
pub fn render_text(report: &Report) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "input: {}", report.input);
    let _ = writeln!(out, "tolerance: {:.2e}", report.tolerance);
    if let Some(seed) = report.seed {
        let _ = writeln!(out, "seed: {seed}");
    }
    let _ = writeln!(out, "predicates:");
    for (name, p) in &report.predicates {
        match (p.value, p.residual) {
            (Some(v), Some(r)) => {
                let _ = writeln!(out, "  {name:<18} {v:<5}  residual {r:.2e}");
            }
            (Some(v), None) => {
                let _ = writeln!(out, "  {name:<18} {v}");
            }
            (None, _) => {
                let note = p.note.as_deref().unwrap_or("undecided");
                let _ = writeln!(out, "  {name:<18} -      {note}");
            }
        }
    }
    let mut pass = 0;
    let mut fail = 0;
    let mut vacuous = 0;
    for r in report.identities.values() {
        match r.status {
            CheckStatus::Pass => pass += 1,
            CheckStatus::Fail => fail += 1,
            CheckStatus::Vacuous => vacuous += 1,
        }
    }
    let _ = writeln!(out, "identities: {pass} pass, {fail} fail, {vacuous} vacuous");
    for (name, r) in &report.identities {
        let tag = match r.status {
            CheckStatus::Pass => "pass",
            CheckStatus::Fail => "FAIL",
            CheckStatus::Vacuous => "vac ",
        };
        let _ = writeln!(out, "  [{tag}] {name:<42} residual {:.2e}", r.residual);
    }
    let _ = writeln!(out, "scalars:");
    for (name, v) in &report.scalars {
        let _ = writeln!(out, "  {name:<28} {v:.2e}");
    }
    out
}

pub fn render(report: &Report, format: ReportFormat) -> String {
    match format {
        ReportFormat::Text => render_text(report),
        ReportFormat::Json => {
            serde_json::to_string_pretty(report).expect("report serialization cannot fail")
        }
    }
}

/// Verification suites: named subsets of the identity map.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Suite {
    All,
    Structure,
    Lemma2,
    Skl,
    Surface,
}

impl Suite {
    pub fn parse(s: &str) -> Result<Suite, CliError> {
        match s {
            "all" => Ok(Suite::All),
            "structure" => Ok(Suite::Structure),
            "lemma2" => Ok(Suite::Lemma2),
            "skl" => Ok(Suite::Skl),
            "surface" => Ok(Suite::Surface),
            other => Err(CliError::invalid(format!(
                "unknown suite '{other}' (expected all, structure, lemma2, skl, or surface)"
            ))),
        }
    }

    /// Whether an identity belongs to the suite.
    pub fn selects(&self, name: &str) -> bool {
        match self {
            Suite::All => true,
            Suite::Structure => {
                matches!(
                    name,
                    "eq1_structure"
                        | "eq3_first_bianchi"
                        | "eq4_second_bianchi_chern"
                        | "eq4_second_bianchi_strominger"
                        | "riemannian_structure_eq"
                        | "eq12_balanced_identity"
                        | "lemma1_ddbar_omega"
                        | "chern_curvature_type_11"
                        | "gray_theta2_02"
                        | "eq19_unbarred_blocks"
                        | "strominger_torsion_totally_skew"
                        | "balanced_cross_check"
                        | "skl_route_agreement"
                )
            }
            Suite::Lemma2 => name.starts_with("lemma2_"),
            Suite::Skl => {
                name.starts_with("lemma5_")
                    || name.starts_with("lemma6_")
                    || name.starts_with("lemma10_")
                    || name.starts_with("lemma11_")
                    || name.starts_with("lemma14_")
                    || name.starts_with("lemma15_")
                    || name.starts_with("lemma9_")
                    || name.starts_with("chain_")
                    || name.starts_with("theorem")
                    || name.starts_with("corollary4_")
                    || name == "commutativity_eta"
                    || name == "eta_parallel_conclusion"
                    || name == "phi_parallel"
                    || name == "psi_skew_hermitian"
                    || name == "remark_del_omega_wedge"
            }
            Suite::Surface => name.starts_with("theorem5_") || name == "surface_t_norm_identity",
        }
    }
}

/// Verify one file: exit 0 iff every selected check passes (vacuous counts
/// as pass); failing checks are listed with residuals on standard output.
pub fn verify_report(report: &Report, suite: Suite) -> (i32, String) {
    let mut out = String::new();
    let mut failed = Vec::new();
    let mut applied = 0;
    for (name, rec) in &report.identities {
        if !suite.selects(name) {
            continue;
        }
        applied += 1;
        if rec.status == CheckStatus::Fail {
            failed.push((name.clone(), rec.residual));
        }
    }
    if failed.is_empty() {
        let _ = writeln!(out, "{}: ok ({} checks)", report.input, applied);
        (EXIT_OK, out)
    } else {
        let _ = writeln!(out, "{}: {} of {} checks failed", report.input, failed.len(), applied);
        for (name, r) in failed {
            let _ = writeln!(out, "  [FAIL] {name} residual {r:.2e}");
        }
        (EXIT_VERIFY_FAIL, out)
    }
}

/// Result of the search subcommand.
pub struct SearchOutcome {
    pub trace: SearchTrace,
    pub final_params: Vec<f64>,
    pub final_metric: HermitianMetric,
    pub report: Report,
}

pub fn run_search(
    input: &ManifoldInput,
    opts: &SearchOptions,
    tol: f64,
) -> Result<SearchOutcome, CliError> {
    let par = MetricParameterization::new(input.algebra.dim());
    let init = par
        .params_from_metric(&input.metric)
        .map_err(|e| CliError::invalid(format!("metric: {e}")))?;
    let (params, trace) = minimize(&input.algebra, &init, opts);
    let final_metric = par.metric(&params);
    let refined = ManifoldInput {
        name: format!("{}-searched", input.name),
        algebra: input.algebra.clone(),
        metric: final_metric.clone(),
    };
    let mut report = analyze(&refined, tol, Some(opts.seed))?;
    report.trace =
        Some(serde_json::to_value(&trace).expect("trace serialization cannot fail"));
    Ok(SearchOutcome { trace, final_params: params, final_metric, report })
}

pub fn search_exit_code(status: SearchStatus) -> i32 {
    if status == SearchStatus::Converged {
        EXIT_OK
    } else {
        EXIT_VERIFY_FAIL
    }
}

/// Builds a spec file for a generated random two-step algebra.
pub fn random_spec(n: usize, m: usize, seed: u64) -> Result<String, CliError> {
    if !(2..=crate::exterior::MAX_DIM).contains(&n) || m == 0 || m >= n {
        return Err(CliError::invalid(format!(
            "need 1 <= split < dim and 2 <= dim <= {}, got dim = {n}, split = {m}",
            crate::exterior::MAX_DIM
        )));
    }
    let a = catalog::random_two_step(n, m, seed);
    let name = format!("random-two-step-n{n}-m{m}-seed{seed}");
    Ok(export_spec(&name, &a, &HermitianMetric::identity(n)))
}
