//! Exact-arithmetic verification of the `2m`-th order mixed-derivative
//! identity
//!
//! `d^{2m}/du^m dz^m [ (u-1)^m (z-1)^m / (1-uz) ]
//!    = (2m)! (u-1)^m (z-1)^m / (1-uz)^{2m+1}`
//!
//! where `u` stands for the conjugated kernel variable, treated as an
//! independent formal variable. Both sides are built as truncated bivariate
//! power series with arbitrary-precision rational coefficients, so the check
//! is exact with no tolerance anywhere.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::Serialize;

use crate::error::{Error, Result};

/// Truncated bivariate power series in `(z, u)` with exact rational
/// coefficients; indices run over the square `0..=order` in each variable.
#[derive(Debug, Clone, PartialEq)]
pub struct ExactSeries2 {
    order: usize,
    coeffs: Vec<BigRational>,
}

impl ExactSeries2 {
    pub fn zero(order: usize) -> Self {
        let n = order + 1;
        ExactSeries2 {
            order,
            coeffs: vec![BigRational::zero(); n * n],
        }
    }

    pub fn one(order: usize) -> Self {
        ExactSeries2::monomial(order, 0, 0, BigRational::one())
    }

    /// `value * z^j u^k`.
    pub fn monomial(order: usize, j: usize, k: usize, value: BigRational) -> Self {
        let mut s = ExactSeries2::zero(order);
        s.set(j, k, value);
        s
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn coeff(&self, j: usize, k: usize) -> &BigRational {
        &self.coeffs[j * (self.order + 1) + k]
    }

    fn set(&mut self, j: usize, k: usize, value: BigRational) {
        let n = self.order + 1;
        self.coeffs[j * n + k] = value;
    }

    pub fn add(&self, other: &ExactSeries2) -> ExactSeries2 {
        assert_eq!(self.order, other.order, "incompatible truncation orders");
        let coeffs = self
            .coeffs
            .iter()
            .zip(&other.coeffs)
            .map(|(a, b)| a + b)
            .collect();
        ExactSeries2 {
            order: self.order,
            coeffs,
        }
    }

    pub fn mul(&self, other: &ExactSeries2) -> ExactSeries2 {
        assert_eq!(self.order, other.order, "incompatible truncation orders");
        let n = self.order + 1;
        let mut out = ExactSeries2::zero(self.order);
        for j1 in 0..n {
            for k1 in 0..n {
                let a = &self.coeffs[j1 * n + k1];
                if a.is_zero() {
                    continue;
                }
                for j2 in 0..(n - j1) {
                    for k2 in 0..(n - k1) {
                        let b = &other.coeffs[j2 * n + k2];
                        if b.is_zero() {
                            continue;
                        }
                        let idx = (j1 + j2) * n + (k1 + k2);
                        out.coeffs[idx] += a * b;
                    }
                }
            }
        }
        out
    }

    pub fn pow(&self, e: usize) -> ExactSeries2 {
        let mut acc = ExactSeries2::one(self.order);
        for _ in 0..e {
            acc = acc.mul(self);
        }
        acc
    }

    pub fn scale(&self, c: &BigRational) -> ExactSeries2 {
        ExactSeries2 {
            order: self.order,
            coeffs: self.coeffs.iter().map(|a| a * c).collect(),
        }
    }

    /// Partial derivative in `z`; the top `z`-order of the truncation is
    /// forfeited.
    pub fn dz(&self) -> ExactSeries2 {
        let n = self.order + 1;
        let mut out = ExactSeries2::zero(self.order);
        for j in 0..self.order {
            for k in 0..n {
                let c = &self.coeffs[(j + 1) * n + k];
                if !c.is_zero() {
                    out.coeffs[j * n + k] = c * BigRational::from_integer(BigInt::from(j + 1));
                }
            }
        }
        out
    }

    /// Partial derivative in `u`.
    pub fn du(&self) -> ExactSeries2 {
        let n = self.order + 1;
        let mut out = ExactSeries2::zero(self.order);
        for j in 0..n {
            for k in 0..self.order {
                let c = &self.coeffs[j * n + k + 1];
                if !c.is_zero() {
                    out.coeffs[j * n + k] = c * BigRational::from_integer(BigInt::from(k + 1));
                }
            }
        }
        out
    }

    /// `(z - 1)` as a series.
    pub fn z_minus_one(order: usize) -> Self {
        let mut s = ExactSeries2::monomial(order, 0, 0, -BigRational::one());
        s.set(1, 0, BigRational::one());
        s
    }

    /// `(u - 1)` as a series.
    pub fn u_minus_one(order: usize) -> Self {
        let mut s = ExactSeries2::monomial(order, 0, 0, -BigRational::one());
        s.set(0, 1, BigRational::one());
        s
    }

    /// First `(j, k)` (lexicographic) where the two series differ, scanning
    /// the square `0..=bound`.
    pub fn first_mismatch(&self, other: &ExactSeries2, bound: usize) -> Option<(usize, usize)> {
        for j in 0..=bound {
            for k in 0..=bound {
                if self.coeff(j, k) != other.coeff(j, k) {
                    return Some((j, k));
                }
            }
        }
        None
    }
}

/// Expansion of `1/(1 - uz)`: `sum_{k <= order} z^k u^k`.
pub fn geometric_series2(order: usize) -> ExactSeries2 {
    let mut s = ExactSeries2::zero(order);
    for k in 0..=order {
        s.set(k, k, BigRational::one());
    }
    s
}

/// Binomial expansion of `(1 - uz)^{-power}`: coefficient
/// `C(k + power - 1, power - 1)` at `(k, k)`.
pub fn inverse_power_series2(order: usize, power: usize) -> ExactSeries2 {
    let mut s = ExactSeries2::zero(order);
    let mut c = BigInt::one();
    for k in 0..=order {
        if k > 0 {
            // C(k+p-1, p-1) = C(k-1+p-1, p-1) * (k+p-1)/k
            c = c * BigInt::from(k + power - 1) / BigInt::from(k);
        }
        s.set(k, k, BigRational::from_integer(c.clone()));
    }
    s
}

fn factorial(n: usize) -> BigInt {
    (1..=n).fold(BigInt::one(), |acc, j| acc * BigInt::from(j))
}

/// Both sides of the derivative identity as truncated series; coefficients
/// with indices at most `order - m` in each variable are exact.
pub fn lemma1_sides(m: usize, order: usize) -> Result<(ExactSeries2, ExactSeries2)> {
    if m == 0 {
        return Err(Error::InvalidInput("order m must be positive".into()));
    }
    if order < 2 * m {
        return Err(Error::InvalidInput(format!(
            "truncation order {order} is below 2m = {}",
            2 * m
        )));
    }
    let front = ExactSeries2::z_minus_one(order)
        .pow(m)
        .mul(&ExactSeries2::u_minus_one(order).pow(m));

    let mut lhs = front.mul(&geometric_series2(order));
    for _ in 0..m {
        lhs = lhs.dz();
    }
    for _ in 0..m {
        lhs = lhs.du();
    }

    let rhs = front
        .mul(&inverse_power_series2(order, 2 * m + 1))
        .scale(&BigRational::from_integer(factorial(2 * m)));
    Ok((lhs, rhs))
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Lemma1Outcome {
    pub pass: bool,
    pub first_mismatch: Option<(usize, usize)>,
}

/// Exact comparison of the two sides on the reliable index square
/// `0..=order-m`; passes only on identical coefficients.
pub fn lemma1_check(m: usize, order: usize) -> Result<Lemma1Outcome> {
    let (lhs, rhs) = lemma1_sides(m, order)?;
    let mismatch = lhs.first_mismatch(&rhs, order - m);
    Ok(Lemma1Outcome {
        pass: mismatch.is_none(),
        first_mismatch: mismatch,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64) -> BigRational {
        BigRational::from_integer(BigInt::from(n))
    }

    #[test]
    fn series_ring_basics() {
        let n = 4;
        // d/dz (z u) = u
        let zu = ExactSeries2::monomial(n, 1, 1, BigRational::one());
        assert_eq!(zu.dz(), ExactSeries2::monomial(n, 0, 1, BigRational::one()));
        // (1 + zu)(1 - zu) = 1 - z^2 u^2
        let mut a = ExactSeries2::one(n);
        a.set(1, 1, BigRational::one());
        let mut b = ExactSeries2::one(n);
        b.set(1, 1, -BigRational::one());
        let prod = a.mul(&b);
        let mut want = ExactSeries2::one(n);
        want.set(2, 2, -BigRational::one());
        assert_eq!(prod, want);
    }

    #[test]
    fn mixed_partials_commute() {
        let n = 5;
        let mut s = ExactSeries2::zero(n);
        let mut v = 1i64;
        for j in 0..=n {
            for k in 0..=n {
                s.set(j, k, q((v * 7919) % 23 - 11));
                v += 1;
            }
        }
        assert_eq!(s.du().dz(), s.dz().du());
    }

    #[test]
    fn geometric_inverse() {
        let n = 6;
        let geo = geometric_series2(n);
        for j in 0..=n {
            for k in 0..=n {
                let want = if j == k { q(1) } else { q(0) };
                assert_eq!(*geo.coeff(j, k), want);
            }
        }
        // (1 - zu) * geometric = 1 up to the truncation order
        let mut one_minus = ExactSeries2::one(n);
        one_minus.set(1, 1, -BigRational::one());
        let prod = one_minus.mul(&geo);
        for j in 0..n {
            for k in 0..n {
                let want = if j == 0 && k == 0 { q(1) } else { q(0) };
                assert_eq!(*prod.coeff(j, k), want, "({j},{k})");
            }
        }
    }

    #[test]
    fn inverse_power_matches_repeated_product() {
        // independent route: multiply the geometric series with itself
        for m in 1..=3usize {
            let n = 8;
            let direct = inverse_power_series2(n, 2 * m + 1);
            let repeated = geometric_series2(n).pow(2 * m + 1);
            assert_eq!(direct.first_mismatch(&repeated, n), None);
        }
    }

    #[test]
    fn lemma1_small_orders() {
        let out = lemma1_check(1, 8).unwrap();
        assert!(out.pass, "mismatch at {:?}", out.first_mismatch);
        // spot value: the constant coefficient of both sides is 2
        let (lhs, rhs) = lemma1_sides(1, 8).unwrap();
        assert_eq!(*lhs.coeff(0, 0), q(2));
        assert_eq!(*rhs.coeff(0, 0), q(2));

        assert!(lemma1_check(2, 10).unwrap().pass);
    }

    #[test]
    fn lemma1_corrupted_constant_fails_at_origin() {
        let (lhs, rhs) = lemma1_sides(1, 8).unwrap();
        // replace (2m)! by (2m)! + 1
        let corrupted = rhs.scale(&(q(3) / q(2)));
        let mismatch = lhs.first_mismatch(&corrupted, 7);
        assert_eq!(mismatch, Some((0, 0)));
    }

    #[test]
    fn rejects_bad_parameters() {
        assert!(lemma1_check(0, 8).is_err());
        assert!(lemma1_check(3, 4).is_err());
    }
}
