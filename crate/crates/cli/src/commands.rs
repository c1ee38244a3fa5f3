use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use anyhow::anyhow;
use nlrpb::cryptoherm::{
    from_crypto, from_nlrpb, hermitize_with_tolerance, verify_chwrt_with_tolerance,
};
use nlrpb::linalg::{default_tolerance, jacobi_eigh, residual_norm};
use nlrpb::models::{chebyshev_paper_normalization, ModelSpec};
use nlrpb::pseudoboson::{
    build_ladders, build_metrics, commutator_defect, verify_axioms_with_tolerance, SystemData,
};
use nlrpb::{
    BiorthogonalSystem, Check, CryptoPair, LadderPair, Matrix, MetricPair, VerificationReport,
};
use serde::{Deserialize, Serialize};

use crate::document::{Content, ReportDocument, Section};
use crate::fsio::{decode, read_json, write_json_atomic};
use crate::CliError;

/// Line cosines and spectra must survive a roundtrip to this accuracy
/// unless `--tol` says otherwise.
const ROUNDTRIP_TOL: f64 = 1e-9;

#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum)]
pub enum Family {
    Chebyshev,
    TwoParam,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Normalization {
    /// Chebyshev vectors scaled so that every `⟨Φ_n, η_n⟩ = 1` with one common factor.
    Uniform,
    /// The closed-form vectors listed for N = 2 and N = 3.
    Paper,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum)]
pub enum Direction {
    Nlrpb2crypto,
    Crypto2nlrpb,
}

/// The on-disk form of a family with its operators.
#[derive(Debug, Serialize, Deserialize)]
pub struct ModelDocument {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub model: Option<ModelSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub normalization: Option<Normalization>,
    pub system: SystemData,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub ladders: Option<LadderPair>,
    /// Eigenvalues of `matrix` are `eps + shift`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub matrix: Option<Matrix>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub shift: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub metrics: Option<MetricPair>,
}

impl ModelDocument {
    fn from_system(
        model: Option<ModelSpec>,
        system: &BiorthogonalSystem,
        matrix: Matrix,
        shift: f64,
    ) -> Self {
        Self {
            model,
            normalization: None,
            system: system.clone().into(),
            ladders: Some(build_ladders(system)),
            matrix: Some(matrix),
            shift: (shift != 0.0).then_some(shift),
            metrics: Some(build_metrics(system)),
        }
    }
}

pub struct ModelArgs {
    pub family: Family,
    pub beta: Option<f64>,
    pub delta: Option<f64>,
    pub n: Option<usize>,
    pub normalization: Normalization,
    pub output: Option<PathBuf>,
}

fn tolerances(entries: &[(&str, f64)]) -> BTreeMap<String, f64> {
    entries.iter().map(|(k, v)| (k.to_string(), *v)).collect()
}

fn invalid(e: nlrpb::Error) -> CliError {
    CliError::Invalid(e.into())
}

fn math(e: nlrpb::Error) -> CliError {
    CliError::Math(e.into())
}

fn metric_scalars(system: &BiorthogonalSystem) -> Result<BTreeMap<String, f64>, CliError> {
    let metrics = build_metrics(system);
    let ev = jacobi_eigh(&metrics.s_eta).map_err(math)?.eigenvalues;
    let (lo, hi) = (ev[0], ev[ev.len() - 1]);
    Ok(BTreeMap::from([
        ("metric_condition_number".to_string(), hi / lo),
        ("metric_lambda_max".to_string(), hi),
        ("metric_lambda_min".to_string(), lo),
    ]))
}

fn emit_document(doc: &ModelDocument, output: Option<&Path>) -> Result<Section, CliError> {
    match output {
        Some(path) => {
            write_json_atomic(path, doc)?;
            Ok(Section::new(
                "output",
                Content::Text(format!("wrote {}", path.display())),
            ))
        }
        None => {
            let value = serde_json::to_value(doc).map_err(|e| CliError::Io(e.into()))?;
            Ok(Section::new("output", Content::Document(value)))
        }
    }
}

pub fn model(args: ModelArgs, tol: Option<f64>) -> Result<ReportDocument, CliError> {
    let spec = match args.family {
        Family::TwoParam => {
            let (Some(beta), Some(delta)) = (args.beta, args.delta) else {
                return Err(CliError::Invalid(anyhow!(
                    "two-param needs --beta and --delta"
                )));
            };
            ModelSpec::TwoParam { beta, delta }
        }
        Family::Chebyshev => {
            let Some(n) = args.n else {
                return Err(CliError::Invalid(anyhow!("chebyshev needs --n")));
            };
            ModelSpec::Chebyshev { n }
        }
    };
    let built = spec.build().map_err(invalid)?;
    let system = match (args.normalization, &spec) {
        (Normalization::Uniform, _) => built.system,
        (Normalization::Paper, ModelSpec::Chebyshev { n }) => {
            chebyshev_paper_normalization(*n).map_err(invalid)?
        }
        (Normalization::Paper, ModelSpec::TwoParam { .. }) => {
            return Err(CliError::Invalid(anyhow!(
                "paper normalization applies to the chebyshev family only"
            )));
        }
    };
    let tol = tol.unwrap_or_else(|| default_tolerance(system.dim(), 1.0));
    let mut doc = ModelDocument::from_system(Some(spec), &system, built.matrix, 0.0);
    doc.normalization = Some(args.normalization);
    let axioms = verify_axioms_with_tolerance(&system, doc.ladders.as_ref().unwrap(), tol);
    let sections = vec![
        Section::new("spectrum", Content::Spectrum(system.eps().to_vec())),
        Section::new("metric", Content::Scalars(metric_scalars(&system)?)),
        Section::new("axioms", Content::Report(axioms)),
        emit_document(&doc, args.output.as_deref())?,
    ];
    Ok(ReportDocument::new(
        "model",
        tolerances(&[("axioms", tol)]),
        sections,
    ))
}

fn failed_check(name: &str, tol: f64, e: &nlrpb::Error) -> VerificationReport {
    VerificationReport::new(vec![
        Check::with_verdict(name, f64::INFINITY, tol, false).detail(e.to_string())
    ])
}

/// `max_k ‖MΦ_k − λ_kΦ_k‖/‖Φ_k‖` and the same for `Mᵀ` on `{η_k}`.
fn matrix_checks(
    system: &BiorthogonalSystem,
    m: &Matrix,
    shift: f64,
    tol: f64,
) -> VerificationReport {
    let n = system.dim();
    if m.shape() != (n, n) {
        let e = nlrpb::Error::DimensionMismatch {
            op: "matrix",
            left: (n, n),
            right: m.shape(),
        };
        return failed_check("matrix.shape", tol, &e);
    }
    let mt = m.transpose();
    let mut phi_res: f64 = 0.0;
    let mut eta_res: f64 = 0.0;
    for k in 0..n {
        let lambda = system.eps()[k] + shift;
        let (p, e) = (&system.phi()[k], &system.eta()[k]);
        phi_res = phi_res.max((m * p).axpy(-lambda, p).norm() / p.norm());
        eta_res = eta_res.max((&mt * e).axpy(-lambda, e).norm() / e.norm());
    }
    let mut report = VerificationReport::new(vec![
        Check::new("matrix.eigen_phi", phi_res, tol),
        Check::new("matrix.eigen_eta", eta_res, tol),
    ]);
    let theta = build_metrics(system).s_eta;
    match verify_chwrt_with_tolerance(m, &theta, tol) {
        Ok(r) => report = report.merged("matrix.", r),
        Err(e) => report = report.merged("", failed_check("matrix.chwrt", tol, &e)),
    }
    report
}

fn verify_family(doc: ModelDocument, tol: Option<f64>) -> (f64, Vec<Section>) {
    let tol = tol.unwrap_or_else(|| default_tolerance(doc.system.n, 1.0));
    let system = match doc.system.validate_with_tolerance(tol) {
        Ok(s) => s,
        Err(e) => {
            return (
                tol,
                vec![Section::new(
                    "validation",
                    Content::Report(failed_check("system.valid", tol, &e)),
                )],
            );
        }
    };
    let ladders = doc.ladders.unwrap_or_else(|| build_ladders(&system));
    let axioms = verify_axioms_with_tolerance(&system, &ladders, tol);
    let mut sections = vec![Section::new("axioms", Content::Report(axioms))];
    if ladders.a.shape() == (system.dim(), system.dim()) && ladders.b.shape() == ladders.a.shape() {
        let checks = (0..system.dim() - 1)
            .map(|k| {
                let d = commutator_defect(&system, &ladders, k).expect("level below the top");
                Check::new(format!("commutator.n{k:02}"), d, tol)
            })
            .collect();
        sections.push(Section::new(
            "commutator",
            Content::Report(VerificationReport::new(checks)),
        ));
    }
    if let Some(m) = &doc.matrix {
        let report = matrix_checks(&system, m, doc.shift.unwrap_or(0.0), tol);
        sections.push(Section::new("matrix", Content::Report(report)));
    }
    (tol, sections)
}

fn verify_pair(pair: CryptoPair, tol: Option<f64>) -> (f64, Vec<Section>) {
    let tol = tol.unwrap_or_else(|| default_tolerance(pair.h.rows(), 1.0));
    let chwrt = match verify_chwrt_with_tolerance(&pair.h, &pair.theta, tol) {
        Ok(r) => r,
        Err(e) => failed_check("chwrt", tol, &e),
    };
    let mut sections = vec![Section::new("cryptohermiticity", Content::Report(chwrt))];
    match hermitize_with_tolerance(&pair.h, &pair.theta, tol) {
        Ok(herm) => {
            let gap = herm
                .spectrum
                .windows(2)
                .map(|w| w[1] - w[0])
                .fold(f64::INFINITY, f64::min);
            let check = Check::new("hermitize", 0.0, tol)
                .detail(format!("shift {:e}, smallest gap {gap:e}", herm.shift));
            sections.push(Section::new(
                "hermitization",
                Content::Report(VerificationReport::new(vec![check])),
            ));
            sections.push(Section::new("spectrum", Content::Spectrum(herm.spectrum)));
        }
        Err(e) => sections.push(Section::new(
            "hermitization",
            Content::Report(failed_check("hermitize", tol, &e)),
        )),
    }
    (tol, sections)
}

pub fn verify(path: &Path, tol: Option<f64>) -> Result<ReportDocument, CliError> {
    let value = read_json(path)?;
    let (tol, sections) = if value.get("system").is_some() {
        verify_family(decode(value, "model document")?, tol)
    } else if value.get("phi").is_some() {
        let system: SystemData = decode(value, "system")?;
        let doc = ModelDocument {
            model: None,
            normalization: None,
            system,
            ladders: None,
            matrix: None,
            shift: None,
            metrics: None,
        };
        verify_family(doc, tol)
    } else if value.get("h_matrix").is_some() {
        verify_pair(decode(value, "crypto pair")?, tol)
    } else {
        return Err(CliError::Io(anyhow!(
            "{}: expected a model document, a system or a crypto pair",
            path.display()
        )));
    };
    Ok(ReportDocument::new(
        "verify",
        tolerances(&[("checks", tol)]),
        sections,
    ))
}

/// Spectra, then the largest `1 − |cos|` between corresponding lines.
fn compare_systems(a: &BiorthogonalSystem, b: &BiorthogonalSystem, tol: f64) -> VerificationReport {
    let eps = a
        .eps()
        .iter()
        .zip(b.eps())
        .fold(0.0, |m: f64, (x, y)| m.max((x - y).abs()));
    let lines = |u: &[nlrpb::Vector], v: &[nlrpb::Vector]| {
        u.iter()
            .zip(v)
            .fold(0.0, |m: f64, (x, y)| m.max(1.0 - x.line_cosine(y)))
    };
    VerificationReport::new(vec![
        Check::new("roundtrip.eps", eps, tol),
        Check::new("roundtrip.phi_lines", lines(a.phi(), b.phi()), tol),
        Check::new("roundtrip.eta_lines", lines(a.eta(), b.eta()), tol),
    ])
}

fn relative(a: &Matrix, b: &Matrix) -> f64 {
    residual_norm(a, b).unwrap_or(f64::INFINITY) / b.frobenius_norm().max(1.0)
}

pub fn convert(
    direction: Direction,
    path: &Path,
    output: Option<&Path>,
    tol: Option<f64>,
) -> Result<ReportDocument, CliError> {
    let value = read_json(path)?;
    let tol = tol.unwrap_or(ROUNDTRIP_TOL);
    let sections = match direction {
        Direction::Nlrpb2crypto => {
            let data: SystemData = match value.get("system") {
                Some(s) => decode(s.clone(), "system")?,
                None => decode(value, "system")?,
            };
            let system = data.validate().map_err(math)?;
            let pair = from_nlrpb(&system).map_err(math)?;
            let (back, _) = from_crypto(&pair.h, &pair.theta).map_err(math)?;
            let out = match output {
                Some(p) => {
                    write_json_atomic(p, &pair)?;
                    Section::new("output", Content::Text(format!("wrote {}", p.display())))
                }
                None => Section::new(
                    "output",
                    Content::Document(
                        serde_json::to_value(&pair).map_err(|e| CliError::Io(e.into()))?,
                    ),
                ),
            };
            vec![
                Section::new("theta", Content::Matrix(pair.theta.clone())),
                Section::new("h_matrix", Content::Matrix(pair.h.clone())),
                Section::new(
                    "roundtrip",
                    Content::Report(compare_systems(&back, &system, tol)),
                ),
                out,
            ]
        }
        Direction::Crypto2nlrpb => {
            let pair: CryptoPair = decode(value, "crypto pair")?;
            let herm = hermitize_with_tolerance(
                &pair.h,
                &pair.theta,
                default_tolerance(pair.h.rows(), 1.0),
            )
            .map_err(math)?;
            let (system, _) = from_crypto(&pair.h, &pair.theta).map_err(math)?;
            let again = from_nlrpb(&system).map_err(math)?;
            let n = system.dim();
            let shifted = pair
                .h
                .checked_sub(&Matrix::identity(n).scale(herm.shift))
                .map_err(math)?;
            let report = VerificationReport::new(vec![
                Check::new("roundtrip.h_matrix", relative(&again.h, &shifted), tol),
                Check::new("roundtrip.theta", relative(&again.theta, &pair.theta), tol),
            ]);
            let doc = ModelDocument::from_system(None, &system, pair.h.clone(), herm.shift);
            vec![
                Section::new("spectrum", Content::Spectrum(system.eps().to_vec())),
                Section::new(
                    "shift",
                    Content::Scalars(BTreeMap::from([("shift".to_string(), herm.shift)])),
                ),
                Section::new("roundtrip", Content::Report(report)),
                emit_document(&doc, output)?,
            ]
        }
    };
    Ok(ReportDocument::new(
        "convert",
        tolerances(&[("roundtrip", tol)]),
        sections,
    ))
}
