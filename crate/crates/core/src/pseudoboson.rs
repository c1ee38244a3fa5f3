//! Biorthogonal systems, ladder operators and frame operators of a
//! finite-dimensional non-linear regular pseudo-boson family.
//!
//! A family is a pair of bases `{Φ_n}`, `{η_n}` of `ℝ^N` with
//! `⟨Φ_n, η_m⟩ = δ_nm`, and a strictly increasing spectrum with `ε_0 = 0`.
//! The lowering operator `a` and the raising operator `b` act on `{Φ_n}` as
//!
//! ```text
//! a Φ_n = √ε_n Φ_{n-1},      b Φ_n = √ε_{n+1} Φ_{n+1}
//! ```
//!
//! with the truncation `a Φ_0 = 0` and `b Φ_{N-1} = 0`. The ladder relations
//! and the commutator identity `[a, b] Φ_n = (ε_{n+1} − ε_n) Φ_n` are only
//! required below the top level `N − 1`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{default_tolerance, inverse, jacobi_eigh, Matrix, Vector, MAX_CONDITION};
use crate::report::{Check, VerificationReport};

/// Minimum separation between consecutive levels.
pub const MIN_LEVEL_GAP: f64 = 1e-10;

/// `|ε_0|` below this value is treated as exactly zero.
pub const ZERO_LEVEL_TOL: f64 = 1e-12;

/// Unvalidated system as it appears on disk:
/// `{"n": N, "eps": [...], "phi": [[...], ...], "eta": [[...], ...]}`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SystemData {
    pub n: usize,
    pub eps: Vec<f64>,
    pub phi: Vec<Vector>,
    pub eta: Vec<Vector>,
}

impl SystemData {
    pub fn validate(self) -> Result<BiorthogonalSystem> {
        let tol = default_tolerance(self.n, 1.0);
        self.validate_with_tolerance(tol)
    }

    pub fn validate_with_tolerance(self, tol: f64) -> Result<BiorthogonalSystem> {
        if self.n != self.phi.len() {
            return Err(Error::InvalidShape(format!(
                "declared n = {} but {} phi vectors",
                self.n,
                self.phi.len()
            )));
        }
        build_system_with_tolerance(self.phi, self.eta, self.eps, tol)
    }
}

/// A validated biorthonormal pair of bases with its spectrum.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "SystemData", into = "SystemData")]
pub struct BiorthogonalSystem {
    phi: Vec<Vector>,
    eta: Vec<Vector>,
    eps: Vec<f64>,
    biorthonormality_residual: f64,
}

impl TryFrom<SystemData> for BiorthogonalSystem {
    type Error = Error;
    fn try_from(d: SystemData) -> Result<Self> {
        d.validate()
    }
}

impl From<BiorthogonalSystem> for SystemData {
    fn from(s: BiorthogonalSystem) -> Self {
        SystemData {
            n: s.dim(),
            eps: s.eps,
            phi: s.phi,
            eta: s.eta,
        }
    }
}

impl BiorthogonalSystem {
    pub fn dim(&self) -> usize {
        self.eps.len()
    }

    pub fn phi(&self) -> &[Vector] {
        &self.phi
    }

    pub fn eta(&self) -> &[Vector] {
        &self.eta
    }

    pub fn eps(&self) -> &[f64] {
        &self.eps
    }

    /// `max_{n,m} |⟨Φ_n, η_m⟩ − δ_nm|` measured at construction.
    pub fn biorthonormality_residual(&self) -> f64 {
        self.biorthonormality_residual
    }

    /// Matrix with columns `Φ_n`.
    pub fn phi_matrix(&self) -> Matrix {
        Matrix::from_columns(&self.phi).expect("validated basis")
    }

    /// Matrix with columns `η_n`.
    pub fn eta_matrix(&self) -> Matrix {
        Matrix::from_columns(&self.eta).expect("validated basis")
    }

    /// `Σ_n c_n |Φ_n⟩⟨η_n|`
    pub fn expand(&self, coeffs: impl Fn(usize) -> f64) -> Matrix {
        let n = self.dim();
        let mut out = Matrix::zeros(n, n);
        for k in 0..n {
            let c = coeffs(k);
            if c == 0.0 {
                continue;
            }
            out = &out + &Matrix::outer(&self.phi[k], &self.eta[k]).scale(c);
        }
        out
    }

    /// `Σ_n ε_n |Φ_n⟩⟨η_n|`
    pub fn spectral_operator(&self) -> Matrix {
        self.expand(|k| self.eps[k])
    }

    /// `Σ_n |Φ_n⟩⟨η_n|`, the identity for a complete biorthonormal pair.
    pub fn identity_resolution(&self) -> Matrix {
        self.expand(|_| 1.0)
    }

    /// `√ε_n`, with the zero level pinned to exactly zero.
    fn sqrt_eps(&self, n: usize) -> f64 {
        self.eps[n].max(0.0).sqrt()
    }
}

/// Builds and validates a system with the default tolerance.
pub fn build_system(
    phi: Vec<Vector>,
    eta: Vec<Vector>,
    eps: Vec<f64>,
) -> Result<BiorthogonalSystem> {
    let tol = default_tolerance(eps.len(), 1.0);
    build_system_with_tolerance(phi, eta, eps, tol)
}

pub fn build_system_with_tolerance(
    phi: Vec<Vector>,
    eta: Vec<Vector>,
    mut eps: Vec<f64>,
    tol: f64,
) -> Result<BiorthogonalSystem> {
    let n = eps.len();
    if n == 0 {
        return Err(Error::InvalidShape("empty system".into()));
    }
    if phi.len() != n || eta.len() != n {
        return Err(Error::InvalidShape(format!(
            "{} levels but {} phi and {} eta vectors",
            n,
            phi.len(),
            eta.len()
        )));
    }
    if let Some(v) = phi.iter().chain(&eta).find(|v| v.dim() != n) {
        return Err(Error::InvalidShape(format!(
            "vector of dimension {} in a system of {n} levels",
            v.dim()
        )));
    }
    validate_spectrum(&mut eps)?;

    let mut residual: f64 = 0.0;
    for (i, p) in phi.iter().enumerate() {
        for (j, e) in eta.iter().enumerate() {
            let target = if i == j { 1.0 } else { 0.0 };
            residual = residual.max((p.dot(e) - target).abs());
        }
    }
    if residual.is_nan() || residual > tol {
        return Err(Error::NotBiorthonormal {
            residual,
            tolerance: tol,
        });
    }

    for (label, basis) in [("phi", &phi), ("eta", &eta)] {
        let m = Matrix::from_columns(basis)?;
        match inverse(&m) {
            Ok(_) => {}
            Err(Error::IllConditioned { condition }) => {
                return Err(Error::DegenerateBasis(format!(
                    "{label} basis condition estimate {condition:e} exceeds {MAX_CONDITION:e}"
                )))
            }
            Err(e) => return Err(e),
        }
    }

    Ok(BiorthogonalSystem {
        phi,
        eta,
        eps,
        biorthonormality_residual: residual,
    })
}

/// Checks `ε_0 = 0` and strict increase with gaps above [`MIN_LEVEL_GAP`].
pub(crate) fn validate_spectrum(eps: &mut [f64]) -> Result<()> {
    if let Some(bad) = eps.iter().position(|e| !e.is_finite()) {
        return Err(Error::NonFinite { index: bad });
    }
    if eps[0].abs() > ZERO_LEVEL_TOL {
        return Err(Error::InvalidSpectrum(format!(
            "lowest level must be 0, got {:e}",
            eps[0]
        )));
    }
    eps[0] = 0.0;
    for level in 0..eps.len().saturating_sub(1) {
        let gap = eps[level + 1] - eps[level];
        if gap < -MIN_LEVEL_GAP {
            return Err(Error::InvalidSpectrum(format!(
                "levels {level} and {} are not increasing ({} > {})",
                level + 1,
                eps[level],
                eps[level + 1]
            )));
        }
        if gap <= MIN_LEVEL_GAP {
            return Err(Error::DegenerateSpectrum { level, gap });
        }
    }
    Ok(())
}

/// Lowering and raising operators on `{Φ_n}`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LadderPair {
    pub a: Matrix,
    pub b: Matrix,
}

impl LadderPair {
    /// `[a, b] = ab − ba`
    pub fn commutator(&self) -> Matrix {
        &(&self.a * &self.b) - &(&self.b * &self.a)
    }

    /// `b a`, which is diagonal on `{Φ_n}` with eigenvalues `ε_n`.
    pub fn number_like(&self) -> Matrix {
        &self.b * &self.a
    }
}

/// `a = Σ_{n=1}^{N−1} √ε_n |Φ_{n−1}⟩⟨η_n|`, `b = Σ_{n=0}^{N−2} √ε_{n+1} |Φ_{n+1}⟩⟨η_n|`.
pub fn build_ladders(sys: &BiorthogonalSystem) -> LadderPair {
    let n = sys.dim();
    let mut a = Matrix::zeros(n, n);
    let mut b = Matrix::zeros(n, n);
    for k in 1..n {
        let s = sys.sqrt_eps(k);
        a = &a + &Matrix::outer(&sys.phi[k - 1], &sys.eta[k]).scale(s);
        b = &b + &Matrix::outer(&sys.phi[k], &sys.eta[k - 1]).scale(s);
    }
    LadderPair { a, b }
}

/// Frame operators `S_Φ = Σ|Φ_n⟩⟨Φ_n|` and `S_η = Σ|η_n⟩⟨η_n|`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MetricPair {
    pub s_phi: Matrix,
    pub s_eta: Matrix,
}

impl MetricPair {
    /// Smallest and largest eigenvalue of `S_Φ` (the frame bounds of `{Φ_n}`).
    pub fn frame_bounds(&self) -> Result<(f64, f64)> {
        let eig = jacobi_eigh(&self.s_phi)?;
        Ok((eig.eigenvalues[0], *eig.eigenvalues.last().unwrap()))
    }

    /// `‖S_Φ S_η − I‖_F`
    pub fn duality_residual(&self) -> f64 {
        let n = self.s_phi.rows();
        (&(&self.s_phi * &self.s_eta) - &Matrix::identity(n)).frobenius_norm()
    }
}

pub fn build_metrics(sys: &BiorthogonalSystem) -> MetricPair {
    let gram = |vs: &[Vector]| {
        let c = Matrix::from_columns(vs).expect("validated basis");
        (&c * &c.transpose()).symmetrized()
    };
    MetricPair {
        s_phi: gram(&sys.phi),
        s_eta: gram(&sys.eta),
    }
}

/// Axiom checks with the default tolerance.
pub fn verify_axioms(sys: &BiorthogonalSystem, ladders: &LadderPair) -> VerificationReport {
    verify_axioms_with_tolerance(sys, ladders, default_tolerance(sys.dim(), 1.0))
}

/// One entry per axiom:
///
/// * `p1.vacuum_phi`: `‖aΦ_0‖ / ‖Φ_0‖`
/// * `p2.vacuum_eta`: `‖bᵀη_0‖ / ‖η_0‖`
/// * `p3.ladder_phi`: lowering and raising relations on `{Φ_n}`
/// * `p3.ladder_eta`: the dual relations of `aᵀ`, `bᵀ` on `{η_n}`
/// * `p3.truncation`: `bΦ_{N−1} = 0` and `aᵀη_{N−1} = 0`
/// * `p3'.biorthonormality`: `max |⟨Φ_n, η_m⟩ − δ_nm|`
/// * `p4.resolution_of_identity`: `‖Σ|Φ_n⟩⟨η_n| − I‖_F`
/// * `p5.frame_bounds`: `‖S_Φ S_η − I‖_F`, failing also when `S_Φ` is not
///   positive or its condition number reaches `1e12`
/// * `eigen.ba`: `(ba)Φ_n = ε_nΦ_n` and `(ba)ᵀη_n = ε_nη_n`
///
/// Vector residuals are relative to the norm of the vector acted upon and
/// maximized over levels.
pub fn verify_axioms_with_tolerance(
    sys: &BiorthogonalSystem,
    ladders: &LadderPair,
    tol: f64,
) -> VerificationReport {
    let n = sys.dim();
    if ladders.a.shape() != (n, n) || ladders.b.shape() != (n, n) {
        return VerificationReport::new(vec![Check::with_verdict(
            "shape",
            f64::INFINITY,
            tol,
            false,
        )
        .detail(format!(
            "ladders {:?}/{:?} do not match a {n}-level system",
            ladders.a.shape(),
            ladders.b.shape()
        ))]);
    }
    let (a, b) = (&ladders.a, &ladders.b);
    let (at, bt) = (a.transpose(), b.transpose());
    let phi = sys.phi();
    let eta = sys.eta();
    let rel = |lhs: Vector, rhs: Vector, base: &Vector| lhs.axpy(-1.0, &rhs).norm() / base.norm();

    let p1 = (a * &phi[0]).norm() / phi[0].norm();
    let p2 = (&bt * &eta[0]).norm() / eta[0].norm();

    let mut ladder_phi: f64 = 0.0;
    let mut ladder_eta: f64 = 0.0;
    for k in 1..n {
        ladder_phi = ladder_phi.max(rel(a * &phi[k], phi[k - 1].scale(sys.sqrt_eps(k)), &phi[k]));
        ladder_eta = ladder_eta.max(rel(
            &bt * &eta[k],
            eta[k - 1].scale(sys.sqrt_eps(k)),
            &eta[k],
        ));
    }
    for k in 0..n.saturating_sub(1) {
        ladder_phi = ladder_phi.max(rel(
            b * &phi[k],
            phi[k + 1].scale(sys.sqrt_eps(k + 1)),
            &phi[k],
        ));
        ladder_eta = ladder_eta.max(rel(
            &at * &eta[k],
            eta[k + 1].scale(sys.sqrt_eps(k + 1)),
            &eta[k],
        ));
    }
    let top = n - 1;
    let truncation =
        ((b * &phi[top]).norm() / phi[top].norm()).max((&at * &eta[top]).norm() / eta[top].norm());

    let mut bio: f64 = 0.0;
    for (i, p) in phi.iter().enumerate() {
        for (j, e) in eta.iter().enumerate() {
            let target = if i == j { 1.0 } else { 0.0 };
            bio = bio.max((p.dot(e) - target).abs());
        }
    }

    let p4 = (&sys.identity_resolution() - &Matrix::identity(n)).frobenius_norm();

    let metrics = build_metrics(sys);
    let p5 = match metrics.frame_bounds() {
        Ok((lo, hi)) => {
            let cond = hi / lo;
            let ok = lo > 0.0 && cond.is_finite() && cond < MAX_CONDITION;
            Check::with_verdict("p5.frame_bounds", metrics.duality_residual(), tol, ok).detail(
                format!("lambda_min = {lo:e}, lambda_max = {hi:e}, condition = {cond:e}"),
            )
        }
        Err(e) => {
            Check::with_verdict("p5.frame_bounds", f64::INFINITY, tol, false).detail(e.to_string())
        }
    };

    let m = ladders.number_like();
    let mt = m.transpose();
    let mut eigen: f64 = 0.0;
    for k in 0..n {
        eigen = eigen.max(rel(&m * &phi[k], phi[k].scale(sys.eps[k]), &phi[k]));
        eigen = eigen.max(rel(&mt * &eta[k], eta[k].scale(sys.eps[k]), &eta[k]));
    }

    VerificationReport::new(vec![
        Check::new("p1.vacuum_phi", p1, tol),
        Check::new("p2.vacuum_eta", p2, tol),
        Check::new("p3.ladder_phi", ladder_phi, tol),
        Check::new("p3.ladder_eta", ladder_eta, tol),
        Check::new("p3.truncation", truncation, tol),
        Check::new("p3'.biorthonormality", bio, tol),
        Check::new("p4.resolution_of_identity", p4, tol),
        p5,
        Check::new("eigen.ba", eigen, tol),
    ])
}

/// `‖[a,b]Φ_n − (ε_{n+1} − ε_n)Φ_n‖ / ‖Φ_n‖` for `n ≤ N − 2`.
///
/// The top level is rejected: there `bΦ_{N−1} = 0` and the identity
/// cannot hold.
pub fn commutator_defect(sys: &BiorthogonalSystem, ladders: &LadderPair, n: usize) -> Result<f64> {
    let dim = sys.dim();
    if n + 1 >= dim {
        return Err(Error::LevelOutOfRange {
            level: n,
            dim,
            reason: "commutator identity only holds below the top level",
        });
    }
    let gap = sys.eps[n + 1] - sys.eps[n];
    let phi = &sys.phi[n];
    let lhs = &ladders.commutator() * phi;
    Ok(lhs.axpy(-gap, phi).norm() / phi.norm())
}

/// `Φ_n → Φ_n / ν_n`, `η_n → ν_n η_n`.
///
/// Biorthonormality and `Σ ε_n|Φ_n⟩⟨η_n|` are unchanged; the metrics are not.
pub fn rescale(sys: &BiorthogonalSystem, nu: &[f64]) -> Result<BiorthogonalSystem> {
    if nu.len() != sys.dim() {
        return Err(Error::InvalidParameter(format!(
            "expected {} scale factors, got {}",
            sys.dim(),
            nu.len()
        )));
    }
    if let Some(bad) = nu.iter().find(|v| !(v.is_finite() && **v > 0.0)) {
        return Err(Error::InvalidParameter(format!(
            "scale factors must be positive, got {bad}"
        )));
    }
    let phi = sys
        .phi
        .iter()
        .zip(nu)
        .map(|(p, v)| p.scale(1.0 / v))
        .collect();
    let eta = sys.eta.iter().zip(nu).map(|(e, v)| e.scale(*v)).collect();
    let tol = default_tolerance(sys.dim(), 1.0);
    build_system_with_tolerance(phi, eta, sys.eps.clone(), tol)
}
