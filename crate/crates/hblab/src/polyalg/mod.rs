//! Complex polynomial, Laurent/trigonometric polynomial, and rational
//! function arithmetic, including Taylor machinery at interior and boundary
//! points.

mod point;
mod poly;
mod rational;
mod trig;

pub use point::UnimodularPoint;
pub use poly::Polynomial;
pub(crate) use rational::taylor_quotient;
pub use rational::{PoleClass, RationalFunction};
pub use trig::TrigPolynomial;

use crate::Complex;

/// Relative threshold below which trailing coefficients are trimmed.
pub(crate) const TRIM_REL: f64 = 1e-13;

pub(crate) fn approx_zero(c: Complex, scale: f64) -> bool {
    c.norm() <= TRIM_REL * scale
}

/// Binomial coefficient as f64; exact for the small orders used here.
pub(crate) fn binomial(n: usize, k: usize) -> f64 {
    if k > n {
        return 0.0;
    }
    let k = k.min(n - k);
    let mut acc = 1.0f64;
    for i in 0..k {
        acc = acc * (n - i) as f64 / (i + 1) as f64;
    }
    acc.round()
}
