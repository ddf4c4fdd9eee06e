//! Exact rational scalars, vectors and matrices.
//!
//! Everything a certificate check touches goes through this module. No
//! operation here ever rounds: values are arbitrary-precision rationals kept
//! in canonical reduced form, so equality is structural and serialization is
//! reproducible.

mod linalg;
mod rational;

pub mod fromfloat;

pub use linalg::{mat_inf_norm, right_inverse, solve, RMatrix, RVector};
pub use rational::Rational;

use thiserror::Error;

/// Conversion mode for float-to-rational conversion (see `fromfloat`).
/// The enum lives here so configuration code stays clear of float code.
#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum RationalizeMode {
    /// Best continued-fraction convergent with denominator capped.
    Cfrac,
    /// Exact dyadic value of the binary64 input.
    Dyadic,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ExactError {
    /// No pivot could be assigned to some row: the matrix has no right inverse.
    #[error("matrix is rank deficient: no right inverse exists")]
    RankDeficient,
    /// The linear system has no solution.
    #[error("linear system is inconsistent")]
    Inconsistent,
    /// Float input was NaN or infinite.
    #[error("value is not finite")]
    NotFinite,
}
