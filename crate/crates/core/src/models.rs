//! Exactly solvable model families.
//!
//! * The two-parameter `2×2` model built from the nilpotent pair
//!   `A = [[-1, β], [-1/β, 1]]`, `B = [[-1, δ], [-1/δ, 1]]`.
//! * The Chebyshev family: the `N×N` matrix with constant diagonal `Z`,
//!   superdiagonal `(2, 1, …, 1)` and unit subdiagonal, whose right and
//!   left eigenvectors are first-kind Chebyshev polynomials evaluated at the
//!   roots of `T(N, x)`.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{default_tolerance, Matrix, Vector};
use crate::pseudoboson::{build_system, BiorthogonalSystem};

/// Model selector, serialized as `{"family": "two-param"|"chebyshev", "params": {...}}`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "family", content = "params", rename_all = "kebab-case")]
pub enum ModelSpec {
    TwoParam { beta: f64, delta: f64 },
    Chebyshev { n: usize },
}

/// A model instance: its Hamiltonian-like matrix and the biorthonormal family.
#[derive(Clone, Debug, PartialEq)]
pub struct Model {
    pub spec: ModelSpec,
    pub matrix: Matrix,
    pub system: BiorthogonalSystem,
}

impl ModelSpec {
    pub fn build(&self) -> Result<Model> {
        match *self {
            ModelSpec::TwoParam { beta, delta } => {
                let m = two_param_model(beta, delta)?;
                Ok(Model {
                    spec: self.clone(),
                    matrix: m.m,
                    system: m.system,
                })
            }
            ModelSpec::Chebyshev { n } => {
                let m = chebyshev_model(n)?;
                Ok(Model {
                    spec: self.clone(),
                    matrix: m.m,
                    system: m.system,
                })
            }
        }
    }
}

/// `T(k, x)` by the three-term recurrence `T(k+1) = 2x T(k) − T(k−1)`.
pub fn chebyshev_t(k: usize, x: f64) -> f64 {
    let (mut prev, mut cur) = (1.0, x);
    match k {
        0 => prev,
        _ => {
            for _ in 1..k {
                let next = 2.0 * x * cur - prev;
                prev = cur;
                cur = next;
            }
            cur
        }
    }
}

/// `T(0, x), …, T(len − 1, x)`.
fn chebyshev_column(len: usize, x: f64) -> Vec<f64> {
    let mut out = Vec::with_capacity(len);
    for k in 0..len {
        out.push(match k {
            0 => 1.0,
            1 => x,
            _ => 2.0 * x * out[k - 1] - out[k - 2],
        });
    }
    out
}

// ---------------------------------------------------------------------------
// Two-parameter model

/// Parameters of the `2×2` model with the normalization constraint
/// `y·w·(β − δ) = 1`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct TwoParamSpec {
    pub beta: f64,
    pub delta: f64,
    pub y: f64,
    pub w: f64,
}

impl TwoParamSpec {
    /// Default gauge: `y = w = 1/√(β−δ)` for `β > δ`, else `y = −w = 1/√(δ−β)`.
    pub fn new(beta: f64, delta: f64) -> Result<Self> {
        Self::check(beta, delta)?;
        let (y, w) = if beta > delta {
            let c = 1.0 / (beta - delta).sqrt();
            (c, c)
        } else {
            let c = 1.0 / (delta - beta).sqrt();
            (c, -c)
        };
        Ok(Self { beta, delta, y, w })
    }

    pub fn with_gauge(beta: f64, delta: f64, y: f64, w: f64) -> Result<Self> {
        Self::check(beta, delta)?;
        let constraint = y * w * (beta - delta);
        if (constraint - 1.0).abs().is_nan() || (constraint - 1.0).abs() > 1e-12 {
            return Err(Error::InvalidParameter(format!(
                "normalization requires y*w*(beta - delta) = 1, got {constraint}"
            )));
        }
        Ok(Self { beta, delta, y, w })
    }

    fn check(beta: f64, delta: f64) -> Result<()> {
        if !(beta.is_finite() && delta.is_finite()) {
            return Err(Error::InvalidParameter(
                "beta and delta must be finite".into(),
            ));
        }
        if beta == delta {
            return Err(Error::InvalidParameter("beta equals delta".into()));
        }
        if beta == 0.0 || delta == 0.0 {
            return Err(Error::InvalidParameter(
                "beta and delta must be nonzero".into(),
            ));
        }
        if beta * delta > 0.0 {
            return Err(Error::InvalidParameter(format!(
                "beta*delta must be negative for a positive first level (beta = {beta}, delta = {delta})"
            )));
        }
        Ok(())
    }

    /// `ε_1 = −(β − δ)² / (βδ)`
    pub fn first_level(&self) -> f64 {
        let d = self.beta - self.delta;
        -d * d / (self.beta * self.delta)
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct TwoParamModel {
    pub spec: TwoParamSpec,
    /// Lowering operator `A`.
    pub a: Matrix,
    /// Raising operator `B`.
    pub b: Matrix,
    /// `M = BA`
    pub m: Matrix,
    pub system: BiorthogonalSystem,
}

/// Two-parameter model in the default gauge.
pub fn two_param_model(beta: f64, delta: f64) -> Result<TwoParamModel> {
    two_param_model_with(TwoParamSpec::new(beta, delta)?)
}

/// `Φ_0 = y(β, 1)`, `η_0 = w(1, −δ)`, `Φ_1 = BΦ_0/√ε_1`, `η_1 = Aᵀη_0/√ε_1`.
pub fn two_param_model_with(spec: TwoParamSpec) -> Result<TwoParamModel> {
    let TwoParamSpec { beta, delta, y, w } = spec;
    let a = Matrix::from_rows(&[[-1.0, beta], [-1.0 / beta, 1.0]])?;
    let b = Matrix::from_rows(&[[-1.0, delta], [-1.0 / delta, 1.0]])?;
    let eps1 = spec.first_level();
    let root = eps1.sqrt();
    let phi0 = Vector::new(vec![y * beta, y])?;
    let eta0 = Vector::new(vec![w, -w * delta])?;
    let phi1 = (&b * &phi0).scale(1.0 / root);
    let eta1 = (&a.transpose() * &eta0).scale(1.0 / root);
    let system = build_system(vec![phi0, phi1], vec![eta0, eta1], vec![0.0, eps1])?;
    let m = &b * &a;
    Ok(TwoParamModel {
        spec,
        a,
        b,
        m,
        system,
    })
}

// ---------------------------------------------------------------------------
// Chebyshev family

/// Dimension and diagonal shift `Z = E_{N−1}` of the Chebyshev family.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ChebyshevSpec {
    pub n: usize,
    pub z: f64,
}

impl ChebyshevSpec {
    pub fn new(n: usize) -> Result<Self> {
        if n < 2 {
            return Err(Error::InvalidParameter(format!(
                "Chebyshev model needs N >= 2, got {n}"
            )));
        }
        let z = chebyshev_energies(n)[n - 1];
        Ok(Self { n, z })
    }
}

/// Roots `x_k = −cos((k + 1/2)π/N)` of `T(N, x)`, ascending.
pub fn chebyshev_roots(n: usize) -> Vec<f64> {
    (0..n)
        .map(|k| -((k as f64 + 0.5) * PI / n as f64).cos())
        .collect()
}

/// Unshifted energies `E_k = 2x_k`.
pub fn chebyshev_energies(n: usize) -> Vec<f64> {
    chebyshev_roots(n).into_iter().map(|x| 2.0 * x).collect()
}

/// Shifted spectrum `ε_k = E_k + Z` with `ε_0 = 0` exactly.
pub fn chebyshev_levels(n: usize) -> Vec<f64> {
    let e = chebyshev_energies(n);
    let z = e[n - 1];
    let mut eps: Vec<f64> = e.iter().map(|v| v + z).collect();
    eps[0] = 0.0;
    eps
}

/// The shifted `N×N` Chebyshev matrix.
pub fn chebyshev_matrix(spec: ChebyshevSpec) -> Matrix {
    let n = spec.n;
    let mut m = Matrix::from_diag(&vec![spec.z; n]);
    for i in 0..n - 1 {
        m[(i, i + 1)] = if i == 0 { 2.0 } else { 1.0 };
        m[(i + 1, i)] = 1.0;
    }
    m
}

/// Raw right eigenvectors `Φ_k = (T(0,x_k), …, T(N−1,x_k))`.
pub fn chebyshev_raw_phi(n: usize) -> Vec<Vector> {
    chebyshev_roots(n)
        .into_iter()
        .map(|x| Vector::new(chebyshev_column(n, x)).expect("finite"))
        .collect()
}

/// Raw left eigenvectors: as [`chebyshev_raw_phi`] but with first component `1/2`.
pub fn chebyshev_raw_eta(n: usize) -> Vec<Vector> {
    chebyshev_roots(n)
        .into_iter()
        .map(|x| {
            let mut c = chebyshev_column(n, x);
            c[0] = 0.5;
            Vector::new(c).expect("finite")
        })
        .collect()
}

#[derive(Clone, Debug, PartialEq)]
pub struct ChebyshevModel {
    pub spec: ChebyshevSpec,
    pub m: Matrix,
    pub system: BiorthogonalSystem,
}

/// Chebyshev model with raw left eigenvectors and right eigenvectors
/// rescaled by [`biorthonormalize`].
pub fn chebyshev_model(n: usize) -> Result<ChebyshevModel> {
    let spec = ChebyshevSpec::new(n)?;
    let (phi, eta) = biorthonormalize(&chebyshev_raw_phi(n), &chebyshev_raw_eta(n))?;
    let system = build_system(phi, eta, chebyshev_levels(n))?;
    Ok(ChebyshevModel {
        spec,
        m: chebyshev_matrix(spec),
        system,
    })
}

/// The explicitly normalized listings for `N = 2` (all constants 1) and
/// `N = 3` (`c_R = (1/3, −1/3, 1/6)`, `c_L = (1, 1, 1)`, which makes `S_η`
/// diagonal).
pub fn chebyshev_paper_normalization(n: usize) -> Result<BiorthogonalSystem> {
    let r2 = 2f64.sqrt();
    let r3 = 3f64.sqrt();
    match n {
        2 => build_system(
            vec![
                Vector::from([1.0 / r2, -0.5]),
                Vector::from([1.0, 1.0 / r2]),
            ],
            vec![
                Vector::from([1.0 / r2, -1.0]),
                Vector::from([0.5, 1.0 / r2]),
            ],
            vec![0.0, 2.0 * r2],
        ),
        3 => {
            let listed_phi = [[1.0, -r3 / 2.0, 0.5], [-1.0, 0.0, 1.0], [2.0, r3, 1.0]];
            let listed_eta = [[1.0, -r3, 1.0], [1.0, 0.0, -2.0], [1.0, r3, 1.0]];
            let c_r = [1.0 / 3.0, -1.0 / 3.0, 1.0 / 6.0];
            let c_l = [1.0, 1.0, 1.0];
            let phi = listed_phi
                .iter()
                .zip(c_r)
                .map(|(v, c)| Vector::from(*v).scale(c))
                .collect();
            let eta = listed_eta
                .iter()
                .zip(c_l)
                .map(|(v, c)| Vector::from(*v).scale(c))
                .collect();
            build_system(phi, eta, vec![0.0, r3, 2.0 * r3])
        }
        _ => Err(Error::InvalidParameter(format!(
            "explicit normalization constants exist only for N = 2 and N = 3, got {n}"
        ))),
    }
}

/// Keeps `η_n` and scales `Φ_n` by `1/⟨η_n, Φ_n⟩`.
///
/// The raw cross pairings must already vanish; a vanishing diagonal pairing
/// means the input was not a pair of dual eigenvector sets.
pub fn biorthonormalize(
    phi_raw: &[Vector],
    eta_raw: &[Vector],
) -> Result<(Vec<Vector>, Vec<Vector>)> {
    let n = phi_raw.len();
    if eta_raw.len() != n || n == 0 {
        return Err(Error::InvalidShape(format!(
            "{} phi and {} eta vectors",
            n,
            eta_raw.len()
        )));
    }
    let tol = default_tolerance(n, 1.0);
    let mut phi = Vec::with_capacity(n);
    for (i, p) in phi_raw.iter().enumerate() {
        let pairing = p.dot(&eta_raw[i]);
        let scale = p.norm() * eta_raw[i].norm();
        if pairing.is_nan() || pairing.abs() <= 1e-12 * scale {
            return Err(Error::DegenerateBasis(format!(
                "level {i} has vanishing pairing {pairing:e}"
            )));
        }
        for (j, e) in eta_raw.iter().enumerate() {
            if i == j {
                continue;
            }
            let cross = p.dot(e) / (p.norm() * e.norm());
            if cross.is_nan() || cross.abs() > tol {
                return Err(Error::NotBiorthonormal {
                    residual: cross.abs(),
                    tolerance: tol,
                });
            }
        }
        phi.push(p.scale(1.0 / pairing));
    }
    Ok((phi, eta_raw.to_vec()))
}
