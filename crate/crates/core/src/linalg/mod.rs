//! Dense real linear algebra: matrices, vectors, the symmetric Jacobi
//! eigensolver and SPD matrix functions.
//!
//! Adjoints are transposes throughout; there is no complex arithmetic.

mod jacobi;
mod matrix;
mod spd;

pub use jacobi::{jacobi_eigh, SymEig, MAX_SWEEPS, SYMMETRY_TOL};
pub use matrix::{matmul, residual_norm, Matrix, Vector};
pub use spd::{inverse, spd_eig, spd_inv_sqrt, spd_sqrt, spd_sqrt_pair, MAX_CONDITION, SPD_RATIO};

/// Default absolute check tolerance for an `n`-dimensional problem whose
/// operators have Frobenius norm around `norm`.
///
/// `1e-10` up to `n = 16`, then `n · 1e-12 · norm` (never below `1e-10`).
pub fn default_tolerance(n: usize, norm: f64) -> f64 {
    if n <= 16 {
        1e-10
    } else {
        (n as f64 * 1e-12 * norm).max(1e-10)
    }
}
