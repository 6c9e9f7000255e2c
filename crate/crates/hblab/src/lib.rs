//! Numerical laboratory for de Branges-Rovnyak spaces `H(b)` generated by
//! rational, nonextreme `b`.
//!
//! The crate turns a family of operator-theoretic identities into
//! floating-point (and, where needed, exact-rational) computations:
//!
//! - canonical pairs `(b, a)` for rational Smirnov functions, built either
//!   from the defining quotient `phi = p / prod(1 - conj(lambda_j) z)` or
//!   from closed-form Koebe-preimage data ([`pairs`]);
//! - Fejer-Riesz spectral factorization of positive trigonometric
//!   polynomials and finite Blaschke products ([`factor`]);
//! - the `H(b)` inner product `<f,g>_b = <f,g>_2 + <T_phibar f, T_phibar g>_2`
//!   with the conjugate-analytic Toeplitz operator realized three independent
//!   ways ([`hardy`]);
//! - local Dirichlet integrals of order `m` through the exact Douglas-type
//!   quotient, and weighted-Bergman area norms as a cross-check ([`dirichlet`]);
//! - `2m`-isometry defect matrices for the restricted shift on `H(b)` and
//!   wandering-vector certification ([`isowander`]);
//! - an exact bivariate-series checker for the `2m`-th order derivative
//!   identity behind the Bergman-kernel argument ([`identities`]);
//! - seeded, machine-readable verification suites ([`verify`]).
//!
//! All values are immutable after construction and every operation is a pure
//! function; everything here is safe to call concurrently.

pub mod dirichlet;
pub mod error;
pub mod factor;
pub mod hardy;
pub mod identities;
pub mod isowander;
mod linalg;
pub mod pairs;
pub mod polyalg;
pub mod verify;

pub use error::{Error, Result};
pub use factor::{find_roots, koebe_preimage, BlaschkeProduct, RootSet};
pub use pairs::{pair_from_phi, prop3_pair, sarason_pair, CanonicalPair};
pub use polyalg::{Polynomial, RationalFunction, TrigPolynomial, UnimodularPoint};

/// Scalar type used throughout: double-precision complex numbers.
pub type Complex = num_complex::Complex64;

/// Environment variable capping series truncation lengths (default `1_000_000`).
pub const MAX_SERIES_TERMS_ENV: &str = "HBLAB_MAX_SERIES_TERMS";

pub(crate) fn max_series_terms() -> usize {
    std::env::var(MAX_SERIES_TERMS_ENV)
        .ok()
        .and_then(|s| s.parse().ok())
        .unwrap_or(1_000_000)
}
