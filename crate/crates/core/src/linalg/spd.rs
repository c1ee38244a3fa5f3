//! Matrix functions of symmetric positive definite matrices, and inversion.

use super::jacobi::{jacobi_eigh, SymEig};
use super::matrix::Matrix;
use crate::error::{Error, Result};

/// Largest accepted 1-norm condition estimate.
pub const MAX_CONDITION: f64 = 1e12;

/// Eigenvalues must exceed this fraction of the largest one.
pub const SPD_RATIO: f64 = 1e-12;

/// Jacobi decomposition of `a`, rejected unless every eigenvalue is
/// larger than `SPD_RATIO · λ_max`.
pub fn spd_eig(a: &Matrix) -> Result<SymEig> {
    let eig = jacobi_eigh(a)?;
    let min = eig.eigenvalues[0];
    let max = *eig.eigenvalues.last().expect("non-empty spectrum");
    if !(max > 0.0 && min > SPD_RATIO * max) {
        return Err(Error::NotPositiveDefinite {
            min_eigenvalue: min,
        });
    }
    Ok(eig)
}

pub fn spd_sqrt(a: &Matrix) -> Result<Matrix> {
    Ok(spd_eig(a)?.map_eigenvalues(f64::sqrt))
}

pub fn spd_inv_sqrt(a: &Matrix) -> Result<Matrix> {
    Ok(spd_eig(a)?.map_eigenvalues(|l| 1.0 / l.sqrt()))
}

/// `(A^{1/2}, A^{-1/2})` from a single decomposition.
pub fn spd_sqrt_pair(a: &Matrix) -> Result<(Matrix, Matrix)> {
    let eig = spd_eig(a)?;
    Ok((
        eig.map_eigenvalues(f64::sqrt),
        eig.map_eigenvalues(|l| 1.0 / l.sqrt()),
    ))
}

/// Inverse by Gauss-Jordan elimination with partial pivoting.
///
/// Fails if a pivot vanishes or the estimate `‖A‖₁‖A⁻¹‖₁` reaches
/// [`MAX_CONDITION`].
pub fn inverse(a: &Matrix) -> Result<Matrix> {
    let n = a.require_square()?;
    let mut w = a.clone();
    let mut inv = Matrix::identity(n);
    let scale = a.max_abs();
    if scale == 0.0 {
        return Err(Error::IllConditioned {
            condition: f64::INFINITY,
        });
    }

    for col in 0..n {
        let pivot_row = (col..n)
            .max_by(|&i, &j| w[(i, col)].abs().total_cmp(&w[(j, col)].abs()))
            .expect("non-empty range");
        let pivot = w[(pivot_row, col)];
        if pivot.abs() <= f64::EPSILON * scale {
            return Err(Error::IllConditioned {
                condition: f64::INFINITY,
            });
        }
        if pivot_row != col {
            for k in 0..n {
                let t = w[(col, k)];
                w[(col, k)] = w[(pivot_row, k)];
                w[(pivot_row, k)] = t;
                let t = inv[(col, k)];
                inv[(col, k)] = inv[(pivot_row, k)];
                inv[(pivot_row, k)] = t;
            }
        }
        let r = 1.0 / pivot;
        for k in 0..n {
            w[(col, k)] *= r;
            inv[(col, k)] *= r;
        }
        for i in 0..n {
            if i == col {
                continue;
            }
            let f = w[(i, col)];
            if f == 0.0 {
                continue;
            }
            for k in 0..n {
                w[(i, k)] -= f * w[(col, k)];
                inv[(i, k)] -= f * inv[(col, k)];
            }
        }
    }

    let condition = a.norm_one() * inv.norm_one();
    if condition.is_nan() || condition >= MAX_CONDITION {
        return Err(Error::IllConditioned { condition });
    }
    Ok(inv)
}
