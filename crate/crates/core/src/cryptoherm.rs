//! Cryptohermitian operators and their conversion to and from pseudo-boson
//! families.
//!
//! `H` is cryptohermitian with respect to an SPD metric `Θ` when
//! `H = Θ⁻¹HᵀΘ`, tested here in the inversion-free form `ΘH = HᵀΘ`. Then
//! `h = Θ^{1/2} H Θ^{-1/2}` is symmetric and isospectral with `H`.
//!
//! [`from_crypto`] maps a well-behaved pair `(H, Θ)` to the biorthonormal
//! family `Φ_n = Θ^{-1/2}e_n`, `η_n = Θ^{1/2}e_n`; [`from_nlrpb`] goes back
//! with `H = ba` and `Θ = S_η`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{
    default_tolerance, jacobi_eigh, spd_eig, spd_sqrt_pair, Matrix, Vector, SPD_RATIO, SYMMETRY_TOL,
};
use crate::pseudoboson::{
    build_ladders, build_metrics, build_system_with_tolerance, BiorthogonalSystem, LadderPair,
    MIN_LEVEL_GAP,
};
use crate::report::{Check, VerificationReport};

/// An operator together with a metric it is cryptohermitian for.
///
/// Serialized as `{"h_matrix": Matrix, "theta": Matrix}`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CryptoPair {
    #[serde(rename = "h_matrix")]
    pub h: Matrix,
    pub theta: Matrix,
}

impl CryptoPair {
    /// Accepts the pair only if [`verify_chwrt`] passes.
    pub fn new(h: Matrix, theta: Matrix) -> Result<Self> {
        let tol = default_tolerance(h.rows(), 1.0);
        let report = verify_chwrt_with_tolerance(&h, &theta, tol)?;
        if !report.pass {
            return Err(chwrt_error(&report, &theta, tol));
        }
        Ok(Self { h, theta })
    }

    pub fn verify(&self) -> Result<VerificationReport> {
        verify_chwrt(&self.h, &self.theta)
    }
}

/// The Hermitized operator with its shifted spectrum.
///
/// `spectrum[n] = λ_n − shift` where `λ_n` are the ascending eigenvalues of
/// `h`, so `spectrum[0] = 0` and `shift = λ_0`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct HermitizedSystem {
    pub h: Matrix,
    pub shift: f64,
    pub spectrum: Vec<f64>,
    /// Orthonormal eigenvectors of `h`.
    pub e: Vec<Vector>,
}

pub fn verify_chwrt(h: &Matrix, theta: &Matrix) -> Result<VerificationReport> {
    verify_chwrt_with_tolerance(h, theta, default_tolerance(h.rows(), 1.0))
}

/// Checks follow:
///
/// * `theta.spd`: relative asymmetry of `Θ`, and all eigenvalues positive
/// * `chwrt`: `‖ΘH − HᵀΘ‖_F / ‖ΘH‖_F`
pub fn verify_chwrt_with_tolerance(
    h: &Matrix,
    theta: &Matrix,
    tol: f64,
) -> Result<VerificationReport> {
    let n = h.require_square()?;
    if theta.shape() != (n, n) {
        return Err(Error::DimensionMismatch {
            op: "verify_chwrt",
            left: h.shape(),
            right: theta.shape(),
        });
    }

    let asym = theta.relative_asymmetry();
    let spd = if asym > SYMMETRY_TOL {
        Check::with_verdict("theta.spd", asym, SYMMETRY_TOL, false)
            .detail("metric is not symmetric")
    } else {
        match jacobi_eigh(theta) {
            Ok(eig) => {
                let lo = eig.eigenvalues[0];
                let hi = *eig.eigenvalues.last().unwrap();
                let ok = hi > 0.0 && lo > SPD_RATIO * hi;
                Check::with_verdict("theta.spd", asym, SYMMETRY_TOL, ok)
                    .detail(format!("lambda_min = {lo:e}, lambda_max = {hi:e}"))
            }
            Err(e) => {
                Check::with_verdict("theta.spd", asym, SYMMETRY_TOL, false).detail(e.to_string())
            }
        }
    };

    let th = theta * h;
    let scale = th.frobenius_norm();
    let diff = (&th - &(&h.transpose() * theta)).frobenius_norm();
    let residual = if scale == 0.0 { diff } else { diff / scale };

    Ok(VerificationReport::new(vec![
        spd,
        Check::new("chwrt", residual, tol),
    ]))
}

fn chwrt_error(report: &VerificationReport, theta: &Matrix, tol: f64) -> Error {
    match report.get("theta.spd") {
        Some(c) if !c.pass => match spd_eig(theta) {
            Err(e) => e,
            Ok(_) => Error::Asymmetric {
                asymmetry: c.residual,
            },
        },
        _ => Error::NotCryptohermitian {
            residual: report.get("chwrt").map_or(f64::NAN, |c| c.residual),
            tolerance: tol,
        },
    }
}

pub fn hermitize(h: &Matrix, theta: &Matrix) -> Result<HermitizedSystem> {
    hermitize_with_tolerance(h, theta, default_tolerance(h.rows(), 1.0))
}

/// `h = Θ^{1/2} H Θ^{-1/2}`, symmetrized, diagonalized and shifted so the
/// lowest level is exactly zero.
///
/// Fails when `(H, Θ)` is not cryptohermitian, when the similarity
/// transform leaves an asymmetry above `tol`, or when two levels are closer
/// than [`MIN_LEVEL_GAP`].
pub fn hermitize_with_tolerance(h: &Matrix, theta: &Matrix, tol: f64) -> Result<HermitizedSystem> {
    let report = verify_chwrt_with_tolerance(h, theta, tol)?;
    if !report.pass {
        return Err(chwrt_error(&report, theta, tol));
    }
    let (root, inv_root) = spd_sqrt_pair(theta)?;
    let raw = &(&root * h) * &inv_root;
    let asym = raw.relative_asymmetry();
    if asym > tol {
        return Err(Error::NotCryptohermitian {
            residual: asym,
            tolerance: tol,
        });
    }
    let sym = raw.symmetrized();
    let eig = jacobi_eigh(&sym)?;
    for level in 0..eig.dim().saturating_sub(1) {
        let gap = eig.eigenvalues[level + 1] - eig.eigenvalues[level];
        if gap <= MIN_LEVEL_GAP {
            return Err(Error::DegenerateSpectrum { level, gap });
        }
    }
    let shift = eig.eigenvalues[0];
    let mut spectrum: Vec<f64> = eig.eigenvalues.iter().map(|l| l - shift).collect();
    spectrum[0] = 0.0;
    let e = (0..eig.dim()).map(|k| eig.eigenvector(k)).collect();
    Ok(HermitizedSystem {
        h: sym,
        shift,
        spectrum,
        e,
    })
}

/// Pseudo-boson family of a well-behaved pair: `Φ_n = Θ^{-1/2}e_n`,
/// `η_n = Θ^{1/2}e_n`, `ε_n` the shifted spectrum of `h`.
pub fn from_crypto(h: &Matrix, theta: &Matrix) -> Result<(BiorthogonalSystem, LadderPair)> {
    let herm = hermitize(h, theta)?;
    let (root, inv_root) = spd_sqrt_pair(theta)?;
    let phi = herm.e.iter().map(|e| &inv_root * e).collect();
    let eta = herm.e.iter().map(|e| &root * e).collect();
    let tol = default_tolerance(h.rows(), 1.0);
    let sys = build_system_with_tolerance(phi, eta, herm.spectrum, tol)?;
    let ladders = build_ladders(&sys);
    Ok((sys, ladders))
}

/// `H = ba` and `Θ = S_η`.
///
/// The pair is checked to be cryptohermitian, and the Hermitized spectrum to
/// reproduce `sys.eps()`.
pub fn from_nlrpb(sys: &BiorthogonalSystem) -> Result<CryptoPair> {
    let ladders = build_ladders(sys);
    let h = ladders.number_like();
    let theta = build_metrics(sys).s_eta;
    let tol = default_tolerance(sys.dim(), 1.0);
    let herm = hermitize_with_tolerance(&h, &theta, tol)?;
    let scale = sys.eps().last().copied().unwrap_or(0.0).max(1.0);
    let deviation = herm
        .spectrum
        .iter()
        .zip(sys.eps())
        .map(|(a, b)| (a + herm.shift - b).abs())
        .fold(0.0, f64::max);
    if deviation > tol * scale * 10.0 {
        return Err(Error::InvalidSpectrum(format!(
            "Hermitized spectrum deviates from the family spectrum by {deviation:e}"
        )));
    }
    Ok(CryptoPair { h, theta })
}

/// Similarity-transformed ladders `a_Θ = Θ^{1/2}aΘ^{-1/2}`, `b_Θ = Θ^{1/2}bΘ^{-1/2}`.
///
/// `b_Θ a_Θ = Θ^{1/2}(ba)Θ^{-1/2}`, which is the Hermitized operator when
/// `Θ = S_η`.
pub fn factorize_h(
    sys: &BiorthogonalSystem,
    ladders: &LadderPair,
    theta: &Matrix,
) -> Result<(Matrix, Matrix)> {
    let n = sys.dim();
    for m in [&ladders.a, &ladders.b, theta] {
        if m.shape() != (n, n) {
            return Err(Error::DimensionMismatch {
                op: "factorize_h",
                left: (n, n),
                right: m.shape(),
            });
        }
    }
    let (root, inv_root) = spd_sqrt_pair(theta)?;
    let a_theta = &(&root * &ladders.a) * &inv_root;
    let b_theta = &(&root * &ladders.b) * &inv_root;
    Ok((a_theta, b_theta))
}

/// The three spectral sums built directly from a family.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SpectralExpansions {
    /// `Σ ε_n |Φ_n⟩⟨η_n|`
    pub h_op: Matrix,
    /// `Σ ε_n |η_n⟩⟨Φ_n|`
    pub h_dag: Matrix,
    /// `Σ ε_n |e_n⟩⟨e_n|` with `e_n = S_η^{1/2} Φ_n`
    pub h: Matrix,
}

/// The orthonormal vectors are taken as `e_n = S_η^{1/2}Φ_n`, which are
/// orthonormal because `⟨S_η^{1/2}Φ_n, S_η^{1/2}Φ_m⟩ = ⟨Φ_n, η_m⟩`.
pub fn spectral_expansions(sys: &BiorthogonalSystem) -> Result<SpectralExpansions> {
    let n = sys.dim();
    let metrics = build_metrics(sys);
    let (root, _) = spd_sqrt_pair(&metrics.s_eta)?;
    let mut h_op = Matrix::zeros(n, n);
    let mut h_dag = Matrix::zeros(n, n);
    let mut h = Matrix::zeros(n, n);
    for k in 0..n {
        let eps = sys.eps()[k];
        let (phi, eta) = (&sys.phi()[k], &sys.eta()[k]);
        let e = &root * phi;
        h_op = &h_op + &Matrix::outer(phi, eta).scale(eps);
        h_dag = &h_dag + &Matrix::outer(eta, phi).scale(eps);
        h = &h + &Matrix::outer(&e, &e).scale(eps);
    }
    Ok(SpectralExpansions { h_op, h_dag, h })
}
