//! Numerics for the symmetrized tridisc.
//!
//! The symmetrized tridisc is the image of the unit tridisc 𝔻³ under
//! π(z₁,z₂,z₃) = (z₁+z₂+z₃, z₁z₂+z₂z₃+z₃z₁, z₁z₂z₃).  This crate provides
//! membership oracles for the open domain G₃ and its closure Γ₃, the rational
//! kernel maps Φ and Υ attached to a point, the Schwarz-type feasibility test
//! for two-point interpolation from the disc, and an explicit construction of
//! interpolating analytic maps 𝔻 → Γ₃ through 2×2 matricial lifts.

#![forbid(unsafe_code)]
// Range gates are written with negated comparisons so that NaN falls through
// to the error branch.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

use num_complex::Complex64;
use thiserror::Error;

pub mod geometry;
pub mod interp;
pub mod linalg2;
pub mod schwarz;
pub mod verify;

/// Complex scalar used throughout.
pub type CScalar = Complex64;

/// Crate-wide error type.
#[derive(Debug, Error)]
pub enum Error {
    /// The supplied point lies outside the open symmetrized tridisc.
    #[error("point lies outside the admissible domain: {0}")]
    OutsideDomain(String),
    /// The requested target modulus cannot be achieved by any analytic map.
    #[error("interpolation target is infeasible: {0}")]
    Infeasible(String),
    /// A matrix that must be positive semidefinite failed the check.
    #[error("matrix is not positive semidefinite: {0}")]
    NotPsd(String),
    /// A matrix that must be Hermitian failed the symmetry check.
    #[error("matrix is not Hermitian: {0}")]
    NotHermitian(String),
    /// Evaluation was requested at a pole of a rational map.
    #[error("evaluation at a pole: {0}")]
    Pole(String),
    /// A quantity left its admissible range during construction.
    #[error("quantity out of admissible range: {0}")]
    OutOfRange(String),
    /// Serialized parameters could not be parsed.
    #[error("malformed parameter payload: {0}")]
    Parse(String),
}

/// Crate-wide result alias.
pub type Result<T> = std::result::Result<T, Error>;
