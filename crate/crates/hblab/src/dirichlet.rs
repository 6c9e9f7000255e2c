//! Local Dirichlet integrals of order `m` via the exact Douglas-type
//! quotient, weighted-Bergman area norms via moment series, and the
//! derivative-criterion cross-check tying the two together.

use std::f64::consts::{PI, TAU};

use serde::Serialize;

use num_traits::Zero;

use crate::error::{Error, Result};
use crate::polyalg::{Polynomial, RationalFunction, UnimodularPoint};
use crate::{max_series_terms, Complex};

/// The representation `f = section + (z - lambda)^m g` with
/// `deg section < m` and `g` a polynomial; `D_lambda^m(f) = ||g||_2^2`.
#[derive(Debug, Clone, Serialize)]
pub struct DirichletDecomposition {
    pub section: Polynomial,
    pub g: Polynomial,
    pub lambda: UnimodularPoint,
    pub m: usize,
}

/// Splits a polynomial against the boundary point: `section` is the
/// order-`(m-1)` Taylor section at `lambda` and `g` the exact quotient
/// `(f - section)/(z - lambda)^m`.
pub fn decompose(f: &Polynomial, lambda: &UnimodularPoint, m: usize) -> DirichletDecomposition {
    assert!(m >= 1, "order m must be positive");
    // Repeated synthetic division at lambda yields the Taylor coefficients
    // r_0..r_{m-1} (the section in the shifted basis) and the quotient g.
    let center = lambda.value();
    let mut p = f.clone();
    let mut section = Polynomial::zero();
    let mut basis = Polynomial::one();
    let shift = Polynomial::new(vec![-center, Complex::new(1.0, 0.0)]);
    for j in 0..m {
        if p.is_zero() {
            break;
        }
        let (q, rem) = p.synth_div(center);
        section = &section + &basis.scale(rem);
        if j + 1 < m {
            basis = &basis * &shift;
        }
        p = q;
    }
    DirichletDecomposition {
        section,
        g: p,
        lambda: *lambda,
        m,
    }
}

impl DirichletDecomposition {
    /// `section + (z - lambda)^m g`, for reconstruction checks.
    pub fn reconstruct(&self) -> Polynomial {
        let pow = Polynomial::from_roots(&vec![self.lambda.value(); self.m]);
        &self.section + &(&pow * &self.g)
    }
}

/// The order-`m` local Dirichlet integral
/// `D_lambda^m(f) = (1/2pi) int |(f - T_{m-1}(f,lambda))/(z-lambda)^m|^2 |dz|`,
/// which for polynomials equals `||g||_2^2` of the exact quotient.
pub fn dirichlet_m(f: &Polynomial, lambda: &UnimodularPoint, m: usize) -> f64 {
    let dec = decompose(f, lambda, m);
    dec.g.l2_norm().powi(2)
}

/// Squared norm in the order-`m` local Dirichlet space:
/// `||f||^2 = ||f||_2^2 + D_lambda^m(f)`.
pub fn dm_norm(f: &Polynomial, lambda: &UnimodularPoint, m: usize) -> f64 {
    f.l2_norm().powi(2) + dirichlet_m(f, lambda, m)
}

/// Monomial norm `||z^k||^2` in the weighted Bergman space with weight
/// `(1 - |z|^2)^{2m-1}` and normalized area measure:
/// `value = B(k+1, 2m) = k! (2m-1)! / (k+2m)!`.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct BergmanMoment {
    pub k: usize,
    pub m: usize,
    pub value: f64,
}

pub fn bergman_moment(k: usize, m: usize) -> BergmanMoment {
    assert!(m >= 1, "order m must be positive");
    let mut value = 1.0;
    for j in 1..2 * m {
        value *= j as f64 / (k + j) as f64;
    }
    value /= (k + 2 * m) as f64;
    BergmanMoment { k, m, value }
}

/// What the structure gate of [`a2_norm_series`] extracts: the denominator
/// must be exactly `lead * (z - lambda)^order` with a boundary `lambda` and
/// `order <= m`.
#[derive(Debug, Clone, Copy)]
struct PoleData {
    lambda: Complex,
    order: usize,
    lead: Complex,
}

/// Validates the pole structure without root finding: the pole location
/// comes exactly from the coefficient ratio (Vieta), and the denominator is
/// compared against the reconstructed single-point power.
fn pole_structure(h: &RationalFunction, m: usize) -> Result<Option<PoleData>> {
    let den = h.den();
    let dd = den.degree().unwrap_or(0);
    if dd == 0 {
        return Ok(None);
    }
    if dd > m {
        return Err(Error::PoleOrderViolation);
    }
    let lead = den.coeff(dd);
    let lambda = -den.coeff(dd - 1) / (lead * dd as f64);
    if (lambda.norm() - 1.0).abs() > 1e-6 {
        return Err(Error::PoleOrderViolation);
    }
    let model = Polynomial::from_roots(&vec![lambda; dd]).scale(lead);
    if (&model - den).max_coeff() > 1e-9 * den.max_coeff() {
        return Err(Error::PoleOrderViolation);
    }
    Ok(Some(PoleData {
        lambda,
        order: dd,
        lead,
    }))
}

/// Area norm `int |h|^2 (1 - |z|^2)^{2m-1} dA` of a rational function whose
/// sole pole (if any) sits at a boundary point with order at most `m`,
/// computed as `sum |hhat_k|^2 B(k+1, 2m)`.
///
/// The partial sum is closed with an exact telescoped tail: beyond the
/// polynomial part the coefficients are `conj(lambda)^k Q(k)` with `Q` the
/// polynomial read off the partial fractions at the pole, so the tail terms
/// are `(real polynomial in k) / prod_{j=1}^{2m}(k+j)` and telescope into
/// shifted harmonic sums. The polynomial envelope `|hhat_k| <= C k^{m-1}`
/// fitted from the computed coefficients guards the growth assumption, and
/// two checkpoints must agree within `tol` before the value is accepted.
pub fn a2_norm_series(h: &RationalFunction, m: usize, tol: f64) -> Result<f64> {
    if m == 0 {
        return Err(Error::InvalidInput("order m must be positive".into()));
    }
    if h.is_zero() {
        return Ok(0.0);
    }
    let pole = pole_structure(h, m)?;

    let num_deg = h.num().degree().unwrap_or(0);
    let pole = match pole {
        None => {
            let coeffs = h.taylor_coeffs(num_deg)?;
            let mut acc = 0.0;
            for (k, c) in coeffs.iter().enumerate() {
                acc += c.norm_sqr() * bergman_moment(k, m).value;
            }
            return Ok(acc);
        }
        Some(p) => p,
    };

    let tail_poly = tail_numerator(h.num(), &pole, m);
    let start = num_deg + pole.order + 2 * m + 8;
    let cap = max_series_terms();
    let mut k_hi = start + 80;
    loop {
        let coeffs = h.taylor_coeffs(k_hi)?;

        // Envelope guard: the fitted constant of |hhat_k| <= C k^{m-1} must
        // not keep growing from one half-window to the next (a true pole of
        // higher order doubles it with every doubling of the window).
        let half = start + (k_hi - start) / 2;
        let fit = |lo: usize, hi: usize| -> f64 {
            coeffs[lo..=hi]
                .iter()
                .zip(lo..)
                .map(|(c, k)| c.norm() / (k.max(1) as f64).powi(m as i32 - 1))
                .fold(0.0, f64::max)
        };
        if fit(half + 1, k_hi) > 8.0 * fit(start, half) + 1e-12 {
            return Err(Error::PoleOrderViolation);
        }

        let value_at = |cut: usize| -> f64 {
            let mut acc = 0.0;
            let mut moment = bergman_moment(0, m).value;
            for (k, c) in coeffs.iter().enumerate().take(cut + 1) {
                acc += c.norm_sqr() * moment;
                moment *= (k + 1) as f64 / (k + 1 + 2 * m) as f64;
            }
            acc + telescoped_tail(&tail_poly, m, cut)
        };
        // Agreement of two checkpoints ties the recurrence coefficients to
        // the analytic tail on the window between them.
        let v_a = value_at(k_hi - 32);
        let v_b = value_at(k_hi);
        if (v_a - v_b).abs() <= 0.5 * tol * v_b.abs().max(1.0) {
            return Ok(v_b);
        }
        k_hi *= 2;
        if k_hi > cap {
            return Err(Error::Convergence { terms: cap });
        }
    }
}

/// Real-coefficient polynomial `R(k) = (2m-1)! |Q(k)|^2` where, beyond the
/// polynomial part, `hhat_k = conj(lambda)^k Q(k)`:
///
/// `Q(k) = sum_s A_s (-lambda)^{-s} C(k+s-1, s-1)`,
///
/// with `A_s` the partial-fraction coefficients of the pole, read off
/// exactly by re-expanding the numerator at `lambda`.
fn tail_numerator(num: &Polynomial, pole: &PoleData, m: usize) -> Vec<f64> {
    let q = pole.order;
    let n = num.taylor_at(pole.lambda);
    let mut q_poly = vec![Complex::zero(); q];
    for s in 1..=q {
        let a_s = n.get(q - s).copied().unwrap_or_else(Complex::zero) / pole.lead;
        let factor = a_s * (-pole.lambda).powi(-(s as i32));
        // C(k+s-1, s-1) = prod_{i=1}^{s-1} (k+i) / (s-1)! as a polynomial in k
        let mut binom = vec![Complex::new(1.0, 0.0)];
        for i in 1..s {
            let mut next = vec![Complex::zero(); binom.len() + 1];
            for (d, &c) in binom.iter().enumerate() {
                next[d + 1] += c;
                next[d] += c * i as f64;
            }
            binom = next;
        }
        let fact: f64 = (1..s).map(|i| i as f64).product();
        for (d, &c) in binom.iter().enumerate() {
            q_poly[d] += factor * c / fact;
        }
    }
    // |Q(k)|^2 has real coefficients w_d = sum_{a+b=d} q_a conj(q_b).
    let mut w = vec![0.0; 2 * q - 1];
    for (a, &qa) in q_poly.iter().enumerate() {
        for (b, &qb) in q_poly.iter().enumerate() {
            w[a + b] += (qa * qb.conj()).re;
        }
    }
    let factorial: f64 = (1..2 * m).map(|j| j as f64).product();
    w.iter_mut().for_each(|x| *x *= factorial);
    w
}

/// Exact tail `sum_{k > cut} R(k) / prod_{j=1}^{2m}(k+j)` for a polynomial
/// `R` of degree at most `2m - 2`: the partial fractions in `k` telescope
/// into finitely many shifted harmonic sums,
/// `tail = -sum_j beta_j sum_{i=1}^{j} 1/(cut+i)` with
/// `beta_j = R(-j) / prod_{i != j} (i - j)`.
fn telescoped_tail(r_coeffs: &[f64], m: usize, cut: usize) -> f64 {
    let two_m = 2 * m;
    let r_at = |x: f64| {
        let mut acc = 0.0;
        for &c in r_coeffs.iter().rev() {
            acc = acc * x + c;
        }
        acc
    };
    let mut tail = 0.0;
    let mut s_j = 0.0;
    for j in 1..=two_m {
        s_j += 1.0 / (cut + j) as f64;
        let mut denom = 1.0;
        for i in 1..=two_m {
            if i != j {
                denom *= (i as f64) - (j as f64);
            }
        }
        tail -= r_at(-(j as f64)) / denom * s_j;
    }
    tail
}

/// Gauss-Legendre nodes and weights on `[0, 1]`.
fn gauss_legendre_01(n: usize) -> Vec<(f64, f64)> {
    let mut out = Vec::with_capacity(n);
    for i in 1..=n {
        let mut x = (PI * (i as f64 - 0.25) / (n as f64 + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            // Legendre recurrence for P_n(x) and P_n'(x).
            let mut p0 = 1.0;
            let mut p1 = x;
            for k in 2..=n {
                let p2 = ((2 * k - 1) as f64 * x * p1 - (k - 1) as f64 * p0) / k as f64;
                p0 = p1;
                p1 = p2;
            }
            dp = n as f64 * (x * p1 - p0) / (x * x - 1.0);
            let step = p1 / dp;
            x -= step;
            if step.abs() < 1e-15 {
                break;
            }
        }
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        out.push(((x + 1.0) * 0.5, w * 0.5));
    }
    out
}

/// Polar-grid approximation of `int |h|^2 (1 - |z|^2)^{2m-1} dA` with
/// Gauss-Legendre radial nodes and a uniform trapezoid in the angle, offset
/// by half a step from the pole direction so no node hits it exactly.
pub fn a2_norm_quadrature(
    h: &RationalFunction,
    m: usize,
    radial_nodes: usize,
    angular_nodes: usize,
) -> Result<f64> {
    if m == 0 || radial_nodes == 0 || angular_nodes == 0 {
        return Err(Error::InvalidInput("nodes and order must be positive".into()));
    }
    let anchor = match pole_structure(h, m)? {
        Some(pole) => pole.lambda.arg(),
        None => 0.0,
    };
    let rule = gauss_legendre_01(radial_nodes);
    let mut total = 0.0;
    for &(r, w) in &rule {
        let mut angular = 0.0;
        for k in 0..angular_nodes {
            let theta = anchor + TAU * (k as f64 + 0.5) / angular_nodes as f64;
            let z = Complex::from_polar(r, theta);
            angular += h.eval(z).norm_sqr();
        }
        angular /= angular_nodes as f64;
        total += w * 2.0 * r * (1.0 - r * r).powi(2 * m as i32 - 1) * angular;
    }
    Ok(total)
}

/// Factorial `(2m-1)!`, the constant relating the area norm of
/// `f^(m)/(z-lambda)^m` to `D_lambda^m(f)`.
pub fn dirichlet_area_constant(m: usize) -> f64 {
    (1..2 * m).map(|j| j as f64).product()
}

/// Relative residual between the two routes of the derivative criterion:
/// `| ||f^(m)/(z-lambda)^m||_{A^2}^2 - (2m-1)! D_lambda^m(f) | / max(1, .)`.
pub fn theorem1_check(
    f: &Polynomial,
    lambda: &UnimodularPoint,
    m: usize,
    tol: f64,
) -> Result<f64> {
    if m == 0 {
        return Err(Error::InvalidInput("order m must be positive".into()));
    }
    let deriv = f.derivative_n(m);
    if deriv.is_zero() {
        return Ok(0.0);
    }
    let want = dirichlet_area_constant(m) * dirichlet_m(f, lambda, m);

    // h = f^(m)/(z - lambda)^m in lowest form: cancel any common factors of
    // (z - lambda) exactly by synthetic division.
    let mut num = deriv;
    let mut order = m;
    while order > 0 {
        let (q, rem) = num.synth_div(lambda.value());
        if rem.norm() <= 1e-9 * num.l2_norm() {
            num = q;
            order -= 1;
        } else {
            break;
        }
    }
    let h = if order == 0 {
        RationalFunction::from_polynomial(num)
    } else {
        RationalFunction::new(num, Polynomial::from_roots(&vec![lambda.value(); order]))?
    };
    let area = a2_norm_series(&h, m, tol)?;
    Ok((area - want).abs() / want.max(1.0))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn one() -> UnimodularPoint {
        UnimodularPoint::one()
    }

    #[test]
    fn decompose_cases() {
        let f = Polynomial::from_real(&[0.0, 0.0, 1.0]);
        let d = decompose(&f, &one(), 1);
        assert_eq!(d.section, Polynomial::one());
        assert_eq!(d.g, Polynomial::from_real(&[1.0, 1.0]));
        assert!((&d.reconstruct() - &f).max_coeff() < 1e-14);

        // degree < m: section is f, g = 0
        let lin = Polynomial::from_real(&[3.0, -2.0]);
        let d = decompose(&lin, &one(), 4);
        assert_eq!(d.section, lin);
        assert!(d.g.is_zero());

        // f = (z - lambda)^m: section 0, g = 1
        let lam = UnimodularPoint::from_turns(0.3);
        let f = Polynomial::from_roots(&vec![lam.value(); 3]);
        let d = decompose(&f, &lam, 3);
        assert!(d.section.max_coeff() < 1e-12);
        assert!((&d.g - &Polynomial::one()).max_coeff() < 1e-12);
    }

    #[test]
    fn dirichlet_values() {
        let sq = Polynomial::from_real(&[0.0, 0.0, 1.0]);
        assert!((dirichlet_m(&sq, &one(), 1) - 2.0).abs() < 1e-14);
        assert!((dm_norm(&sq, &one(), 1) - 3.0).abs() < 1e-14);
        assert_eq!(dirichlet_m(&Polynomial::from_real(&[7.0]), &one(), 1), 0.0);
        assert!((dm_norm(&Polynomial::one(), &one(), 2) - 1.0).abs() < 1e-15);
        // (z^3 - 3z + 2)/(z-1)^2 = z + 2
        let cube = Polynomial::from_real(&[0.0, 0.0, 0.0, 1.0]);
        assert!((dirichlet_m(&cube, &one(), 2) - 5.0).abs() < 1e-13);
    }

    #[test]
    fn bergman_moments() {
        assert!((bergman_moment(0, 1).value - 0.5).abs() < 1e-15);
        assert!((bergman_moment(0, 2).value - 0.25).abs() < 1e-15);
        for m in 1..=3usize {
            let mut prev = bergman_moment(0, m).value;
            for k in 1..40 {
                let cur = bergman_moment(k, m).value;
                assert!(cur < prev);
                let ratio = cur / prev;
                let want = k as f64 / (k + 2 * m) as f64;
                assert!((ratio - want).abs() < 1e-12);
                prev = cur;
            }
        }
    }

    #[test]
    fn series_telescoping_anchors() {
        // h = 1/(z-1), m = 1: sum 1/((k+1)(k+2)) = 1
        let h = RationalFunction::new(Polynomial::one(), Polynomial::from_real(&[-1.0, 1.0]))
            .unwrap();

        let v = a2_norm_series(&h, 1, 1e-10).unwrap();
        assert!((v - 1.0).abs() < 1e-10, "got {v}");

        // h = 2/(z-1)^2, m = 2: value 6
        let h2 = RationalFunction::new(
            Polynomial::from_real(&[2.0]),
            &Polynomial::from_real(&[-1.0, 1.0]) * &Polynomial::from_real(&[-1.0, 1.0]),
        )
        .unwrap();
        let v = a2_norm_series(&h2, 2, 1e-10).unwrap();
        assert!((v - 6.0).abs() < 1e-9, "got {v}");

        // zero function
        let zero = RationalFunction::from_polynomial(Polynomial::zero());
        assert_eq!(a2_norm_series(&zero, 1, 1e-10).unwrap(), 0.0);

        // polynomial case: constant c at m = 1 gives |c|^2/2
        let c = RationalFunction::from_polynomial(Polynomial::from_real(&[3.0]));
        assert!((a2_norm_series(&c, 1, 1e-12).unwrap() - 4.5).abs() < 1e-14);
    }

    #[test]
    fn series_rejects_higher_pole_order() {
        let h = RationalFunction::new(
            Polynomial::one(),
            &Polynomial::from_real(&[-1.0, 1.0]) * &Polynomial::from_real(&[-1.0, 1.0]),
        )
        .unwrap();
        assert!(matches!(
            a2_norm_series(&h, 1, 1e-8),
            Err(Error::PoleOrderViolation)
        ));
    }

    #[test]
    fn quadrature_moments() {
        let c = RationalFunction::from_polynomial(Polynomial::from_real(&[2.0]));
        let v = a2_norm_quadrature(&c, 1, 64, 64).unwrap();
        assert!((v - 2.0).abs() < 1e-10);

        let z = RationalFunction::from_polynomial(Polynomial::from_real(&[0.0, 1.0]));
        let v = a2_norm_quadrature(&z, 1, 64, 64).unwrap();
        assert!((v - 1.0 / 6.0).abs() < 1e-10);
    }

    #[test]
    fn quadrature_meets_series() {
        let h = RationalFunction::new(Polynomial::one(), Polynomial::from_real(&[-1.0, 1.0]))
            .unwrap();
        let series = a2_norm_series(&h, 1, 1e-10).unwrap();
        let quad = a2_norm_quadrature(&h, 1, 128, 16384).unwrap();
        assert!(
            (quad - series).abs() / series <= 1e-3,
            "series {series}, quadrature {quad}"
        );
    }

    #[test]
    fn theorem1_anchors() {
        // f = z - 1 at m = 1: area norm of 1/(z-1) equals 1! * ||1||^2 = 1
        let f = Polynomial::from_real(&[-1.0, 1.0]);
        let res = theorem1_check(&f, &one(), 1, 1e-8).unwrap();
        assert!(res < 1e-9);

        // f = (z-1)^2 at m = 2: area norm of 2/(z-1)^2 equals 3! = 6
        let f2 = &f * &f;
        let res = theorem1_check(&f2, &one(), 2, 1e-8).unwrap();
        assert!(res < 1e-9);

        // degree below m: both sides vanish
        let res = theorem1_check(&Polynomial::from_real(&[4.0, 1.0]), &one(), 3, 1e-8).unwrap();
        assert_eq!(res, 0.0);
    }

    #[test]
    fn theorem1_generic_polynomial() {
        let lam = UnimodularPoint::from_turns(0.37);
        let f = Polynomial::new(vec![
            Complex::new(0.5, -0.3),
            Complex::new(1.0, 0.2),
            Complex::new(-0.7, 0.0),
            Complex::new(0.1, 0.9),
            Complex::new(0.0, -0.4),
        ]);
        for m in 1..=3 {
            let res = theorem1_check(&f, &lam, m, 1e-8).unwrap();
            assert!(res <= 1e-6, "m = {m}: residual {res}");
        }
    }
}
