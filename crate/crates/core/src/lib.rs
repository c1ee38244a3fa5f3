//! Finite-dimensional non-linear regular pseudo-bosons and cryptohermitian
//! operators.
//!
//! The crate builds biorthonormal families `({Φ_n}, {η_n}, {ε_n})` with their
//! ladder operators `a`, `b`, checks the defining axioms numerically, and
//! converts between such families and pairs `(H, Θ)` where `H` is
//! cryptohermitian with respect to the metric `Θ`.
//!
//! ```
//! use nlrpb::{cryptoherm, models, pseudoboson};
//!
//! let model = models::chebyshev_model(4)?;
//! let ladders = pseudoboson::build_ladders(&model.system);
//! assert!(pseudoboson::verify_axioms(&model.system, &ladders).pass);
//!
//! let pair = cryptoherm::from_nlrpb(&model.system)?;
//! let herm = cryptoherm::hermitize(&pair.h, &pair.theta)?;
//! assert!((herm.spectrum[3] - model.system.eps()[3]).abs() < 1e-10);
//! # Ok::<(), nlrpb::Error>(())
//! ```

pub mod cryptoherm;
mod error;
pub mod linalg;
pub mod models;
pub mod pseudoboson;
pub mod report;

pub use cryptoherm::{CryptoPair, HermitizedSystem};
pub use error::{Error, Result};
pub use linalg::{Matrix, SymEig, Vector};
pub use pseudoboson::{BiorthogonalSystem, LadderPair, MetricPair};
pub use report::{Check, VerificationReport};

// Book chapters are compiled as doctests so the snippets stay in sync.
#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../README.md")]
    mod readme {}
    #[doc = include_str!("../../../book/src/introduction.md")]
    mod introduction {}
    #[doc = include_str!("../../../book/src/linear-algebra.md")]
    mod linear_algebra {}
    #[doc = include_str!("../../../book/src/pseudo-bosons.md")]
    mod pseudo_bosons {}
    #[doc = include_str!("../../../book/src/cryptohermiticity.md")]
    mod cryptohermiticity {}
    #[doc = include_str!("../../../book/src/models.md")]
    mod models {}
    #[doc = include_str!("../../../book/src/cli.md")]
    mod cli {}
}
