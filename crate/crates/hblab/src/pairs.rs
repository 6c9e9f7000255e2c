//! Canonical pairs `(b, a)`: construction from a rational Smirnov quotient,
//! from closed-form Koebe-preimage data, and from the classical one-point
//! formula.

use std::f64::consts::TAU;

use serde::{Deserialize, Deserializer, Serialize};

use crate::error::{Error, Result};
use crate::factor::{fejer_riesz, find_roots, koebe_preimage};
use crate::polyalg::{Polynomial, RationalFunction, TrigPolynomial, UnimodularPoint};
use crate::Complex;

/// A canonical pair `(b, a)` for a rational Smirnov function, together with
/// its generators: the boundary zeros `lambda_1..lambda_m` of `a` (with
/// multiplicity), the numerator `p` of the quotient `phi = b/a`, and the
/// spectral factor `r`.
///
/// Invariants maintained by every constructor:
/// - `b = p/r` and `a = prod(1 - conj(lambda_j) z)/r` with the same `r`;
/// - `r` has no zeros in the closed unit disk and `r(0) > 0`, so `a(0) > 0`;
/// - `|a|^2 + |b|^2 = 1` on the unit circle and `sup |b| <= 1`.
#[derive(Debug, Clone, Serialize)]
pub struct CanonicalPair {
    b: RationalFunction,
    a: RationalFunction,
    lambdas: Vec<UnimodularPoint>,
    p: Polynomial,
    r: Polynomial,
}

/// Circle samples used to validate pair invariants.
const PAIR_SAMPLES: usize = 1024;

impl CanonicalPair {
    fn assemble(lambdas: Vec<UnimodularPoint>, p: Polynomial, r: Polynomial) -> Result<Self> {
        let b = RationalFunction::new(p.clone(), r.clone())?;
        let a = RationalFunction::new(boundary_factor(&lambdas), r.clone())?;
        let pair = CanonicalPair {
            b,
            a,
            lambdas,
            p,
            r,
        };
        pair.validate()?;
        Ok(pair)
    }

    fn validate(&self) -> Result<()> {
        if self.r.coeff(0).re <= 0.0 || self.r.coeff(0).im.abs() > 1e-12 * self.r.max_coeff() {
            return Err(Error::Inconsistent("r(0) is not positive real".into()));
        }
        for root in find_roots(&self.r)?.roots {
            if root.norm() <= 1.0 + 1e-10 {
                return Err(Error::Inconsistent(
                    "spectral factor has a zero in the closed disk".into(),
                ));
            }
        }
        // |a|^2 + |b|^2 = 1 and |b| <= 1 on an offset circle grid.
        for k in 0..PAIR_SAMPLES {
            let z = Complex::from_polar(1.0, TAU * (k as f64 + 0.5) / PAIR_SAMPLES as f64);
            let bb = self.b.eval(z).norm_sqr();
            let aa = self.a.eval(z).norm_sqr();
            if (aa + bb - 1.0).abs() > 1e-10 {
                return Err(Error::Inconsistent(format!(
                    "|a|^2 + |b|^2 deviates from 1 by {:.3e}",
                    (aa + bb - 1.0).abs()
                )));
            }
            if bb > 1.0 + 1e-10 {
                return Err(Error::Inconsistent("|b| exceeds 1 on the circle".into()));
            }
        }
        Ok(())
    }

    pub fn b(&self) -> &RationalFunction {
        &self.b
    }

    pub fn a(&self) -> &RationalFunction {
        &self.a
    }

    /// Boundary zeros of `a`, with multiplicity.
    pub fn lambdas(&self) -> &[UnimodularPoint] {
        &self.lambdas
    }

    pub fn p(&self) -> &Polynomial {
        &self.p
    }

    pub fn r(&self) -> &Polynomial {
        &self.r
    }

    /// Order `m` = number of boundary zeros of `a`.
    pub fn m(&self) -> usize {
        self.lambdas.len()
    }

    /// `prod(1 - conj(lambda_j) z)`, the denominator of the quotient.
    pub fn boundary_factor(&self) -> Polynomial {
        boundary_factor(&self.lambdas)
    }

    /// The quotient `phi = b/a` kept in un-reduced form
    /// `p / prod(1 - conj(lambda_j) z)`, whose denominator is 1 at the
    /// origin.
    pub fn phi(&self) -> Result<RationalFunction> {
        RationalFunction::new(self.p.clone(), self.boundary_factor())
    }

    /// Product of the boundary zeros.
    pub fn lambda_product(&self) -> Complex {
        self.lambdas
            .iter()
            .fold(Complex::new(1.0, 0.0), |acc, l| acc * l.value())
    }

    /// `b(0)`, zero precisely when `p(0) = 0`.
    pub fn b_at_origin(&self) -> Complex {
        self.b.eval(Complex::new(0.0, 0.0))
    }

    /// Reproducing kernel `k_w^b(z) = (1 - conj(b(w)) b(z)) / (1 - conj(w) z)`
    /// for `w, z` in the open disk.
    pub fn kernel_eval(&self, w: Complex, z: Complex) -> Result<Complex> {
        for point in [w, z] {
            if point.norm() >= 1.0 {
                return Err(Error::OutsideDomain {
                    modulus: point.norm(),
                });
            }
        }
        let one = Complex::new(1.0, 0.0);
        Ok((one - self.b.eval(w).conj() * self.b.eval(z)) / (one - w.conj() * z))
    }

    /// Degree-`n` Taylor truncation of `k_w^b` as a polynomial in `z`.
    pub fn kernel_truncated(&self, w: Complex, n: usize) -> Result<Polynomial> {
        if w.norm() >= 1.0 {
            return Err(Error::OutsideDomain { modulus: w.norm() });
        }
        let bw = self.b.eval(w).conj();
        // (r - conj(b(w)) p) / ((1 - conj(w) z) r), expanded directly (the
        // quotient degenerates to r/r at w = 0 when b(0) = 0).
        let num = &self.r - &self.p.scale(bw);
        let mobius = Polynomial::new(vec![Complex::new(1.0, 0.0), -w.conj()]);
        let den = &mobius * &self.r;
        Ok(Polynomial::new(crate::polyalg::taylor_quotient(
            &num, &den, n,
        )?))
    }
}

pub(crate) fn boundary_factor(lambdas: &[UnimodularPoint]) -> Polynomial {
    let mut acc = Polynomial::one();
    for l in lambdas {
        acc = &acc * &Polynomial::new(vec![Complex::new(1.0, 0.0), -l.conj()]);
    }
    acc
}

/// Builds the canonical pair of `phi = p / prod(1 - conj(lambda_j) z)`.
///
/// The trigonometric polynomial `v = |prod(1 - conj(lambda_j) z)|^2 + |p|^2`
/// is assembled exactly from coefficient autocorrelations and handed to the
/// Fejer-Riesz factorization; then `b = p/r`, `a = prod(...)/r`.
pub fn pair_from_phi(p: &Polynomial, lambdas: &[UnimodularPoint]) -> Result<CanonicalPair> {
    if p.is_zero() {
        return Err(Error::InvalidInput("numerator p must be nonzero".into()));
    }
    let scale = p.max_coeff();
    for (j, l) in lambdas.iter().enumerate() {
        if p.eval(l.value()).norm() <= 1e-10 * scale {
            return Err(Error::VanishesAtLambda { index: j });
        }
    }
    let d = boundary_factor(lambdas);
    let v = TrigPolynomial::from_abs_squared(&d).add(&TrigPolynomial::from_abs_squared(p));
    let r = fejer_riesz(&v)?;
    CanonicalPair::assemble(lambdas.to_vec(), p.clone(), r)
}

/// Closed-form canonical pair for `phi(z) = (conj(lambda) z)^m /
/// (1 - conj(lambda) z)^m`: the boundary zero is `lambda` with multiplicity
/// `m`, and the spectral factor comes from the Koebe preimages `z_k` of the
/// `m`-th roots of 1 (odd `m`) or of -1 (even `m`), ordered by ascending
/// angle:
///
/// `r(z) = prod(1 - conj(lambda) z_k z) / prod(1 - z_k)`.
///
/// `r(lambda) = 1` is the minimum modulus of `r` on the circle.
pub fn prop3_pair(lambda: &UnimodularPoint, m: usize) -> Result<CanonicalPair> {
    if m == 0 {
        return Err(Error::InvalidInput("order m must be positive".into()));
    }
    let preimages = koebe_preimages(m)?;
    let c_m = preimages
        .iter()
        .fold(Complex::new(1.0, 0.0), |acc, &z| acc * (Complex::new(1.0, 0.0) - z));

    let mut r = Polynomial::constant(Complex::new(1.0, 0.0) / c_m);
    for &zk in &preimages {
        r = &r * &Polynomial::new(vec![Complex::new(1.0, 0.0), -(lambda.conj() * zk)]);
    }
    let p = Polynomial::monomial(m, lambda.conj().powu(m as u32));
    let pair = CanonicalPair::assemble(vec![*lambda; m], p, r)?;

    let r_at_lambda = pair.r.eval(lambda.value());
    if (r_at_lambda - Complex::new(1.0, 0.0)).norm() > 1e-9 {
        return Err(Error::Inconsistent(format!(
            "r(lambda) = {r_at_lambda} deviates from 1"
        )));
    }
    #[cfg(debug_assertions)]
    {
        // Redundant route: the same r must come out of the spectral
        // factorization of 1 + |1 - conj(lambda) z|^{2m}.
        let fr = fejer_riesz(&rz_weight(lambda, m))?;
        let gap = (&fr - &pair.r).max_coeff();
        debug_assert!(gap <= 1e-9 * pair.r.max_coeff(), "route mismatch {gap:.3e}");
    }
    Ok(pair)
}

/// The weight `1 + |1 - conj(lambda) z|^{2m}` as an exact trigonometric
/// polynomial.
pub fn rz_weight(lambda: &UnimodularPoint, m: usize) -> TrigPolynomial {
    let mut d = Polynomial::one();
    for _ in 0..m {
        d = &d * &Polynomial::new(vec![Complex::new(1.0, 0.0), -lambda.conj()]);
    }
    TrigPolynomial::from_abs_squared(&d).add_constant(1.0)
}

/// Koebe preimages `z_k` used by [`prop3_pair`], ascending in the angle of
/// the root they come from.
pub fn koebe_preimages(m: usize) -> Result<Vec<Complex>> {
    (0..m)
        .map(|k| {
            let turns = if m % 2 == 1 {
                k as f64 / m as f64
            } else {
                (2 * k + 1) as f64 / (2 * m) as f64
            };
            koebe_preimage(&UnimodularPoint::from_turns(turns))
        })
        .collect()
}

/// The classical one-point pair: [`prop3_pair`] with `m = 1`, i.e.
/// `b(z) = (1 - alpha) conj(lambda) z / (1 - alpha conj(lambda) z)` with
/// `alpha = (3 - sqrt 5)/2`.
pub fn sarason_pair(lambda: &UnimodularPoint) -> Result<CanonicalPair> {
    prop3_pair(lambda, 1)
}

/// Maximum coefficient distance between the closed-form pair and the pair
/// reconstructed through the spectral factorization route.
pub fn prop3_crosscheck(lambda: &UnimodularPoint, m: usize) -> Result<f64> {
    let direct = prop3_pair(lambda, m)?;
    let p = Polynomial::monomial(m, lambda.conj().powu(m as u32));
    let via_phi = pair_from_phi(&p, &vec![*lambda; m])?;
    let dr = (&direct.r - &via_phi.r).max_coeff();
    let dp = (&direct.p - &via_phi.p).max_coeff();
    Ok(dr.max(dp))
}

// JSON form: {"b": rational, "a": rational, "lambdas": [...], "p": poly, "r": poly}.
#[derive(Deserialize)]
struct PairRepr {
    b: RationalFunction,
    a: RationalFunction,
    lambdas: Vec<UnimodularPoint>,
    p: Polynomial,
    r: Polynomial,
}

impl<'de> Deserialize<'de> for CanonicalPair {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let repr = PairRepr::deserialize(deserializer)?;
        let pair = CanonicalPair {
            b: repr.b,
            a: repr.a,
            lambdas: repr.lambdas,
            p: repr.p,
            r: repr.r,
        };
        pair.validate()
            .map_err(|e| serde::de::Error::custom(e.to_string()))?;
        Ok(pair)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    pub const ALPHA: f64 = 0.381_966_011_250_105_2;

    #[test]
    fn sarason_constants() {
        let pair = prop3_pair(&UnimodularPoint::one(), 1).unwrap();
        // b = (1-alpha) z / (1 - alpha z) after normalizing r(0) -> 1/(1-alpha)
        let b = pair.b();
        let s = b.den().coeff(0);
        let num: Vec<Complex> = (0..=1).map(|k| b.num().coeff(k) / s).collect();
        let den: Vec<Complex> = (0..=1).map(|k| b.den().coeff(k) / s).collect();
        assert!((num[0]).norm() < 1e-14);
        assert!((num[1] - Complex::new(1.0 - ALPHA, 0.0)).norm() < 1e-12);
        assert!((den[0] - Complex::new(1.0, 0.0)).norm() < 1e-14);
        assert!((den[1] - Complex::new(-ALPHA, 0.0)).norm() < 1e-12);

        // a(0) > 0 and b(0) = 0
        assert!(pair.a().eval(Complex::new(0.0, 0.0)).re > 0.0);
        assert!(pair.b_at_origin().norm() < 1e-14);
    }

    #[test]
    fn phi_route_matches_rotation() {
        // p = conj(lambda) z with lambda = i: the pole of b sits at i/alpha.
        let lam = UnimodularPoint::from_turns(0.25);
        let p = Polynomial::monomial(1, lam.conj());
        let pair = pair_from_phi(&p, &[lam]).unwrap();
        let poles = find_roots(pair.b().den()).unwrap().roots;
        assert_eq!(poles.len(), 1);
        let want = Complex::new(0.0, 1.0) / ALPHA;
        assert!((poles[0] - want).norm() < 1e-9);
    }

    #[test]
    fn prop3_crosscheck_small() {
        assert!(prop3_crosscheck(&UnimodularPoint::one(), 1).unwrap() <= 1e-10);
        assert!(prop3_crosscheck(&UnimodularPoint::one(), 3).unwrap() <= 1e-9);
        assert!(prop3_crosscheck(&UnimodularPoint::from_turns(0.3), 2).unwrap() <= 1e-9);
    }

    #[test]
    fn rotation_covariance() {
        let m = 2;
        let base = prop3_pair(&UnimodularPoint::one(), m).unwrap();
        let lam = UnimodularPoint::from_turns(0.37);
        let rotated = prop3_pair(&lam, m).unwrap();
        // b_lambda(z) = b_1(conj(lambda) z): compare coefficientwise after
        // scaling each coefficient of the base by conj(lambda)^k.
        for k in 0..=m {
            let want_num = base.b().num().coeff(k) * lam.conj().powu(k as u32);
            let want_den = base.b().den().coeff(k) * lam.conj().powu(k as u32);
            assert!((rotated.b().num().coeff(k) - want_num).norm() < 1e-10);
            assert!((rotated.b().den().coeff(k) - want_den).norm() < 1e-10);
        }
    }

    #[test]
    fn rz_residual_on_circle() {
        for m in 1..=3 {
            let lam = UnimodularPoint::from_turns(0.13);
            let pair = prop3_pair(&lam, m).unwrap();
            let weight = rz_weight(&lam, m);
            for k in 0..512 {
                let z = Complex::from_polar(1.0, TAU * (k as f64 + 0.5) / 512.0);
                let lhs = pair.r().eval(z).norm_sqr();
                let rhs = weight.eval_circle(z);
                assert!((lhs - rhs).abs() <= 1e-10 * rhs.max(1.0));
            }
        }
    }

    #[test]
    fn min_modulus_at_lambda() {
        for m in 1..=3 {
            let lam = UnimodularPoint::from_turns(0.61);
            let pair = prop3_pair(&lam, m).unwrap();
            assert!((pair.r().eval(lam.value()).norm() - 1.0).abs() < 1e-9);
            // grid anchored at lambda so the minimizer is a sample point
            let mut min_mod = f64::INFINITY;
            for k in 0..CIRCLE_GRID {
                let z = lam.value() * Complex::from_polar(1.0, TAU * k as f64 / CIRCLE_GRID as f64);
                min_mod = min_mod.min(pair.r().eval(z).norm());
            }
            assert!((min_mod - 1.0).abs() <= 1e-9);
        }
    }
    const CIRCLE_GRID: usize = 2048;

    #[test]
    fn kernel_basics() {
        let pair = prop3_pair(&UnimodularPoint::one(), 1).unwrap();
        // b(0) = 0 makes k_0 identically 1
        let k0 = pair.kernel_eval(Complex::new(0.0, 0.0), Complex::new(0.3, -0.4)).unwrap();
        assert!((k0 - Complex::new(1.0, 0.0)).norm() < 1e-14);
        // diagonal positivity
        for w in [Complex::new(0.5, 0.1), Complex::new(-0.7, 0.2)] {
            let kw = pair.kernel_eval(w, w).unwrap();
            assert!(kw.im.abs() < 1e-13 && kw.re >= 0.0);
        }
        // scalar oracle at w = 1/2, z = 1/3 with b = (1-alpha) z/(1 - alpha z)
        let w = Complex::new(0.5, 0.0);
        let z = Complex::new(1.0 / 3.0, 0.0);
        let bw = (1.0 - ALPHA) * 0.5 / (1.0 - ALPHA * 0.5);
        let bz = (1.0 - ALPHA) / 3.0 / (1.0 - ALPHA / 3.0);
        let want = (1.0 - bw * bz) / (1.0 - 0.5 / 3.0);
        let got = pair.kernel_eval(w, z).unwrap();
        assert!((got - Complex::new(want, 0.0)).norm() < 1e-13);
        // boundary arguments rejected
        assert!(pair.kernel_eval(Complex::new(1.0, 0.0), z).is_err());
    }

    #[test]
    fn vanishing_p_rejected() {
        let lam = UnimodularPoint::one();
        // p = 1 - z vanishes at lambda = 1
        let p = Polynomial::from_real(&[1.0, -1.0]);
        assert!(matches!(
            pair_from_phi(&p, &[lam]),
            Err(Error::VanishesAtLambda { index: 0 })
        ));
    }

    #[test]
    fn pair_json_roundtrip() {
        let pair = prop3_pair(&UnimodularPoint::from_turns(0.25), 2).unwrap();
        let text = serde_json::to_string(&pair).unwrap();
        let back: CanonicalPair = serde_json::from_str(&text).unwrap();
        assert!((&back.p - pair.p()).max_coeff() < 1e-15);
        assert!((&back.r - pair.r()).max_coeff() < 1e-15);
        assert_eq!(back.m(), 2);
    }
}
