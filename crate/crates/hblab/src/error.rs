//! Error type shared by all modules.

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, Error)]
pub enum Error {
    #[error("division by the zero polynomial")]
    ZeroDivisor,

    #[error("polynomial degree {degree} exceeds reflection order {order}")]
    DegreeExceedsOrder { degree: usize, order: usize },

    #[error("denominator vanishes at the origin; no Taylor expansion at 0")]
    DenominatorVanishesAtOrigin,

    #[error("root finding needs a nonconstant polynomial")]
    ConstantPolynomial,

    #[error("trigonometric polynomial is not strictly positive (value {value:.3e} at angle {angle:.6})")]
    NotPositive { angle: f64, value: f64 },

    #[error("symbol vanishes on the unit circle (root of modulus {modulus})")]
    BoundaryZero { modulus: f64 },

    #[error("could not pair roots into reciprocal-conjugate pairs (worst mismatch {mismatch:.3e})")]
    RootPairing { mismatch: f64 },

    #[error("no Koebe preimage in the disk for e = -1")]
    KoebeSlit,

    #[error("point has modulus {modulus} but must lie on the unit circle")]
    NotUnimodular { modulus: f64 },

    #[error("polynomial vanishes at boundary zero lambda_{index}")]
    VanishesAtLambda { index: usize },

    #[error("rational function has a pole on or inside the closed unit disk")]
    PoleNotOutside,

    #[error("numerator and denominator share a root near {root}")]
    CommonRoot { root: num_complex::Complex64 },

    #[error("series did not converge within {terms} terms")]
    Convergence { terms: usize },

    #[error("Taylor coefficients grow faster than the permitted pole order allows")]
    PoleOrderViolation,

    #[error("argument of modulus {modulus} lies outside the open unit disk")]
    OutsideDomain { modulus: f64 },

    #[error("Blaschke zero of modulus {modulus} is not strictly inside the disk")]
    ZeroNotInDisk { modulus: f64 },

    #[error("internal consistency check failed: {0}")]
    Inconsistent(String),

    #[error("invalid input: {0}")]
    InvalidInput(String),
}
