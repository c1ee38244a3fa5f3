//! Cyclic Jacobi eigensolver for dense real symmetric matrices.
//!
//! Each sweep visits every above-diagonal pair `(p, q)` in row order and
//! applies the plane rotation that annihilates `a[p][q]`. The accumulated
//! rotations form the eigenvector matrix.

use serde::{Deserialize, Serialize};

use super::matrix::{Matrix, Vector};
use crate::error::{Error, Result};

pub const MAX_SWEEPS: usize = 100;

/// Relative asymmetry accepted on input: `‖A − Aᵀ‖_F ≤ SYMMETRY_TOL · ‖A‖_F`.
pub const SYMMETRY_TOL: f64 = 1e-12;

/// Eigendecomposition `A = V diag(λ) Vᵀ` with ascending eigenvalues.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SymEig {
    pub eigenvalues: Vec<f64>,
    /// Orthonormal eigenvectors stored as columns.
    pub eigenvectors: Matrix,
}

impl SymEig {
    pub fn dim(&self) -> usize {
        self.eigenvalues.len()
    }

    pub fn eigenvector(&self, k: usize) -> Vector {
        self.eigenvectors.column(k)
    }

    /// `V diag(f(λ)) Vᵀ`
    pub fn map_eigenvalues(&self, f: impl Fn(f64) -> f64) -> Matrix {
        let n = self.dim();
        let v = &self.eigenvectors;
        let fl: Vec<f64> = self.eigenvalues.iter().map(|&l| f(l)).collect();
        let mut out = Matrix::zeros(n, n);
        for i in 0..n {
            for j in i..n {
                let s: f64 = (0..n).map(|k| v[(i, k)] * fl[k] * v[(j, k)]).sum();
                out[(i, j)] = s;
                out[(j, i)] = s;
            }
        }
        out
    }
}

/// Full symmetric eigendecomposition by cyclic Jacobi rotations.
///
/// Eigenvalues come back ascending. Each eigenvector is signed so that its
/// first component with magnitude above `1e-12` is positive.
pub fn jacobi_eigh(a: &Matrix) -> Result<SymEig> {
    let n = a.require_square()?;
    let asym = a.relative_asymmetry();
    if asym > SYMMETRY_TOL {
        return Err(Error::Asymmetric { asymmetry: asym });
    }
    let mut w = a.symmetrized();
    let mut v = Matrix::identity(n);
    let norm = w.frobenius_norm();

    let mut converged = false;
    for _ in 0..=MAX_SWEEPS {
        let off = off_diagonal_norm(&w);
        if off == 0.0 || off <= f64::EPSILON * norm {
            converged = true;
            break;
        }
        for p in 0..n - 1 {
            for q in p + 1..n {
                rotate(&mut w, &mut v, p, q);
            }
        }
    }
    if !converged {
        return Err(Error::NoConvergence { sweeps: MAX_SWEEPS });
    }

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| w[(i, i)].total_cmp(&w[(j, j)]));
    let eigenvalues: Vec<f64> = order.iter().map(|&k| w[(k, k)]).collect();
    let mut vectors = Matrix::zeros(n, n);
    for (col, &k) in order.iter().enumerate() {
        let sign = v
            .column(k)
            .iter()
            .find(|x| x.abs() > 1e-12)
            .map_or(1.0, |x| x.signum());
        for i in 0..n {
            vectors[(i, col)] = sign * v[(i, k)];
        }
    }
    Ok(SymEig {
        eigenvalues,
        eigenvectors: vectors,
    })
}

fn off_diagonal_norm(w: &Matrix) -> f64 {
    let n = w.rows();
    let mut acc = 0.0;
    for p in 0..n {
        for q in p + 1..n {
            acc += w[(p, q)] * w[(p, q)];
        }
    }
    (2.0 * acc).sqrt()
}

fn rotate(w: &mut Matrix, v: &mut Matrix, p: usize, q: usize) {
    let apq = w[(p, q)];
    if apq == 0.0 {
        return;
    }
    let n = w.rows();
    let theta = (w[(q, q)] - w[(p, p)]) / (2.0 * apq);
    let t = if theta.abs() > 1e150 {
        0.5 / theta
    } else {
        theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt())
    };
    let c = 1.0 / (t * t + 1.0).sqrt();
    let s = t * c;

    for k in 0..n {
        let akp = w[(k, p)];
        let akq = w[(k, q)];
        w[(k, p)] = c * akp - s * akq;
        w[(k, q)] = s * akp + c * akq;
    }
    for k in 0..n {
        let apk = w[(p, k)];
        let aqk = w[(q, k)];
        w[(p, k)] = c * apk - s * aqk;
        w[(q, k)] = s * apk + c * aqk;
    }
    w[(p, q)] = 0.0;
    w[(q, p)] = 0.0;

    for k in 0..n {
        let vkp = v[(k, p)];
        let vkq = v[(k, q)];
        v[(k, p)] = c * vkp - s * vkq;
        v[(k, q)] = s * vkp + c * vkq;
    }
}
