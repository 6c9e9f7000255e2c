//! Polynomial root finding, Fejer-Riesz spectral factorization of positive
//! trigonometric polynomials, Koebe-function preimages, and finite Blaschke
//! products.

use std::f64::consts::TAU;

use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::polyalg::{Polynomial, RationalFunction, TrigPolynomial, UnimodularPoint};
use crate::Complex;

/// All complex roots of a polynomial, listed with multiplicity, plus the
/// worst evaluation residual after Newton polishing.
#[derive(Debug, Clone, Serialize)]
pub struct RootSet {
    pub roots: Vec<Complex>,
    pub residual: f64,
}

/// Finds all roots of `p` by Aberth-Ehrlich simultaneous iteration followed
/// by Newton polishing. Multiple roots come out as clusters of nearby
/// entries; only the set with multiplicity is meaningful for them.
pub fn find_roots(p: &Polynomial) -> Result<RootSet> {
    let deg = match p.degree() {
        Some(d) if d >= 1 => d,
        _ => return Err(Error::ConstantPolynomial),
    };
    let scale = p.max_coeff();

    // Exact zero roots at the origin are peeled off first.
    let mut at_origin = 0;
    while at_origin < deg && p.coeff(at_origin).norm() <= 1e-300 {
        at_origin += 1;
    }
    let mut roots = vec![Complex::zero(); at_origin];
    let n = deg - at_origin;
    if n > 0 {
        let lead = p.coeff(deg);
        let monic: Vec<Complex> = (at_origin..=deg).map(|k| p.coeff(k) / lead).collect();
        roots.extend(aberth(&monic));
    }

    // Accept on backward error: |p(z)| measured against sum |c_j| |z|^j,
    // which stays meaningful for roots of large modulus.
    let mut residual: f64 = 0.0;
    for &root in &roots {
        let value = p.eval(root).norm();
        residual = residual.max(value);
        let mut err_scale = 0.0;
        let mut zp = 1.0;
        for c in p.coeffs() {
            err_scale += c.norm() * zp;
            zp *= root.norm();
        }
        if value > 1e-10 * err_scale.max(scale) {
            return Err(Error::Inconsistent(format!(
                "root refinement stalled at residual {value:.3e}"
            )));
        }
    }
    Ok(RootSet { roots, residual })
}

/// Aberth-Ehrlich on a monic polynomial with nonzero constant term,
/// given by its full ascending coefficient list.
fn aberth(coeffs: &[Complex]) -> Vec<Complex> {
    let n = coeffs.len() - 1;
    let deriv: Vec<Complex> = (1..=n).map(|k| coeffs[k] * k as f64).collect();
    let eval = |cs: &[Complex], z: Complex| {
        let mut acc = Complex::zero();
        for &c in cs.iter().rev() {
            acc = acc * z + c;
        }
        acc
    };
    // Backward-error scale sum |c_k| |z|^k; a point with |p(z)| below a few
    // ulps of this is a root of a nearby polynomial.
    let err_scale = |z: Complex| {
        let mut acc = 0.0;
        let mut zp = 1.0;
        let zn = z.norm();
        for c in coeffs {
            acc += c.norm() * zp;
            zp *= zn;
        }
        acc
    };

    // Initial guesses on a circle sized by the constant term, with an angular
    // offset and mild radius spread to break symmetric configurations.
    let radius = coeffs[0].norm().powf(1.0 / n as f64).clamp(1e-3, 1e3);
    let mut z: Vec<Complex> = (0..n)
        .map(|k| {
            let theta = TAU * k as f64 / n as f64 + 0.7;
            let r = radius * (1.0 + 0.08 * ((k as f64 * 0.618_033_988_75).fract() - 0.5));
            Complex::from_polar(r, theta)
        })
        .collect();

    for _ in 0..500 {
        let mut done = true;
        for i in 0..n {
            let pv = eval(coeffs, z[i]);
            if pv.norm() <= 4.0 * f64::EPSILON * err_scale(z[i]) {
                continue;
            }
            let dv = eval(&deriv, z[i]);
            let w = if dv.norm() > 0.0 {
                pv / dv
            } else {
                Complex::new(1e-8, 1e-8)
            };
            let mut s = Complex::zero();
            for j in 0..n {
                if j != i {
                    let d = z[i] - z[j];
                    if d.norm() > 1e-300 {
                        s += Complex::new(1.0, 0.0) / d;
                    }
                }
            }
            let denom = Complex::new(1.0, 0.0) - w * s;
            let step = if denom.norm() > 1e-300 { w / denom } else { w };
            z[i] -= step;
            if step.norm() > 1e-14 * (1.0 + z[i].norm()) {
                done = false;
            }
        }
        if done {
            break;
        }
    }

    // Newton polishing, kept only while it improves the residual.
    for zi in z.iter_mut() {
        for _ in 0..4 {
            let pv = eval(coeffs, *zi);
            let dv = eval(&deriv, *zi);
            if dv.norm() <= 1e-300 {
                break;
            }
            let cand = *zi - pv / dv;
            if eval(coeffs, cand).norm() < pv.norm() {
                *zi = cand;
            } else {
                break;
            }
        }
    }
    z
}

/// Number of circle samples used for positivity and residual checks.
pub const CIRCLE_SAMPLES: usize = 4096;

/// Computed roots of a multiplicity-`k` cluster scatter like `eps^(1/k)`
/// around the true root; location tests must widen accordingly.
pub(crate) fn cluster_slack(multiplicity: usize) -> f64 {
    10.0 * 1e-15f64.powf(1.0 / multiplicity.max(1) as f64)
}

/// Size of the cluster each root belongs to (roots within 1e-3 of it).
pub(crate) fn local_cluster_sizes(roots: &[Complex]) -> Vec<usize> {
    roots
        .iter()
        .map(|&r| roots.iter().filter(|&&s| (s - r).norm() <= 1e-3).count())
        .collect()
}

/// Fejer-Riesz spectral factorization: the unique polynomial `r` of degree
/// `m0` with `|r(e^{it})|^2 = v(e^{it})`, no zeros in the closed unit disk
/// and `r(0) > 0`.
///
/// Positivity of `v` is checked on a half-offset uniform grid of
/// [`CIRCLE_SAMPLES`] angles; the factor is recovered from the roots of the
/// analytic lift `w(z) = z^{m0} v(z)`, paired as `{w_k, 1/conj(w_k)}`.
pub fn fejer_riesz(v: &TrigPolynomial) -> Result<Polynomial> {
    let mut max_v: f64 = 0.0;
    for k in 0..CIRCLE_SAMPLES {
        let t = TAU * (k as f64 + 0.5) / CIRCLE_SAMPLES as f64;
        let val = v.eval_angle(t);
        if val <= 0.0 {
            return Err(Error::NotPositive {
                angle: t,
                value: val,
            });
        }
        max_v = max_v.max(val);
    }

    let (w, m0) = v.analytic_lift();
    if m0 == 0 {
        return Ok(Polynomial::constant(Complex::new(v.coeff(0).re.sqrt(), 0.0)));
    }
    let roots = find_roots(&w)?.roots;
    let clusters = local_cluster_sizes(&roots);
    for (&root, &k) in roots.iter().zip(&clusters) {
        if (root.norm() - 1.0).abs() <= 1e-10f64.max(cluster_slack(k)) {
            return Err(Error::BoundaryZero {
                modulus: root.norm(),
            });
        }
    }
    let outside = pair_reciprocal_roots(&roots)?;

    // w = c prod (z - w_k)(1 - conj(w_k) z) with c > 0 recovered from the
    // leading coefficient.
    let mut lead_prod = Complex::new(1.0, 0.0);
    for &wk in &outside {
        lead_prod *= -wk.conj();
    }
    let c = w.coeff(2 * m0) / lead_prod;
    if c.re <= 0.0 || c.im.abs() > 1e-8 * c.norm() {
        return Err(Error::Inconsistent(format!(
            "spectral factor constant is not positive real: {c}"
        )));
    }

    let mut r = Polynomial::constant(Complex::new(c.re.sqrt(), 0.0));
    for &wk in &outside {
        // |w_k| (1 - z/w_k): zero at w_k outside the disk, positive at 0.
        let modulus = wk.norm();
        let factor = Polynomial::new(vec![
            Complex::new(modulus, 0.0),
            -Complex::new(modulus, 0.0) / wk,
        ]);
        r = &r * &factor;
    }

    // |r|^2 must reproduce v on the sample grid.
    let mut worst: f64 = 0.0;
    for k in 0..CIRCLE_SAMPLES {
        let t = TAU * (k as f64 + 0.5) / CIRCLE_SAMPLES as f64;
        let z = Complex::from_polar(1.0, t);
        worst = worst.max((r.eval(z).norm_sqr() - v.eval_angle(t)).abs());
    }
    if worst > 1e-10 * max_v {
        return Err(Error::Inconsistent(format!(
            "factorization residual {worst:.3e} exceeds 1e-10 * max v"
        )));
    }
    Ok(r)
}

/// Splits the roots of an analytic lift into outside representatives,
/// checking that the inside roots are their reciprocal conjugates.
pub(crate) fn pair_reciprocal_roots(roots: &[Complex]) -> Result<Vec<Complex>> {
    let mut outside: Vec<Complex> = roots.iter().copied().filter(|r| r.norm() > 1.0).collect();
    let mut inside: Vec<Complex> = roots.iter().copied().filter(|r| r.norm() < 1.0).collect();
    if outside.len() != inside.len() {
        return Err(Error::RootPairing { mismatch: f64::NAN });
    }
    outside.sort_by(|a, b| a.arg().partial_cmp(&b.arg()).unwrap());
    let mut worst: f64 = 0.0;
    for &wk in &outside {
        let target = wk.conj().inv();
        let (best, dist) = inside
            .iter()
            .enumerate()
            .map(|(i, &z)| (i, (z - target).norm()))
            .min_by(|a, b| a.1.partial_cmp(&b.1).unwrap())
            .ok_or(Error::RootPairing { mismatch: f64::NAN })?;
        worst = worst.max(dist / target.norm().max(1.0));
        inside.swap_remove(best);
    }
    if worst > 1e-7 {
        return Err(Error::RootPairing { mismatch: worst });
    }
    Ok(outside)
}

/// The unique `z` with `|z| < 1` and `z/(1-z)^2 = e`, i.e. the in-disk root
/// of `e z^2 - (2e+1) z + e`. The two roots multiply to 1, so exactly one
/// lies inside; `e = -1` is the slit direction with both roots unimodular.
pub fn koebe_preimage(e: &UnimodularPoint) -> Result<Complex> {
    let ev = e.value();
    if (ev + Complex::new(1.0, 0.0)).norm() <= 1e-12 {
        return Err(Error::KoebeSlit);
    }
    let b = -(ev * 2.0 + Complex::new(1.0, 0.0));
    let disc = b * b - ev * ev * 4.0;
    let mut s = disc.sqrt();
    // Stable quadratic: pick the sign that avoids cancellation.
    if (b + s).norm() < (b - s).norm() {
        s = -s;
    }
    let q = -(b + s) * 0.5;
    let r1 = q / ev;
    let r2 = ev / q;
    let z = if r1.norm() < 1.0 { r1 } else { r2 };
    if z.norm() >= 1.0 {
        return Err(Error::KoebeSlit);
    }
    Ok(z)
}

/// Finite Blaschke product
/// `B(z) = c z^k prod (z - z_j)/(1 - conj(z_j) z)`
/// with all zeros strictly inside the disk and `|c| = 1`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BlaschkeProduct {
    zeros: Vec<Complex>,
    z_power: usize,
    unimodular_const: Complex,
}

impl BlaschkeProduct {
    pub fn new(zeros: Vec<Complex>, z_power: usize, unimodular_const: Complex) -> Result<Self> {
        for &z in &zeros {
            if z.norm() >= 1.0 - 1e-12 {
                return Err(Error::ZeroNotInDisk { modulus: z.norm() });
            }
        }
        let modulus = unimodular_const.norm();
        if (modulus - 1.0).abs() > 1e-9 {
            return Err(Error::NotUnimodular { modulus });
        }
        Ok(BlaschkeProduct {
            zeros,
            z_power,
            unimodular_const: unimodular_const / modulus,
        })
    }

    /// The constant function 1 (empty product).
    pub fn one() -> Self {
        BlaschkeProduct {
            zeros: Vec::new(),
            z_power: 0,
            unimodular_const: Complex::new(1.0, 0.0),
        }
    }

    pub fn zeros(&self) -> &[Complex] {
        &self.zeros
    }

    pub fn z_power(&self) -> usize {
        self.z_power
    }

    pub fn unimodular_const(&self) -> Complex {
        self.unimodular_const
    }

    /// Zero count including the power of `z`.
    pub fn degree(&self) -> usize {
        self.zeros.len() + self.z_power
    }

    pub fn eval(&self, z: Complex) -> Complex {
        let mut acc = self.unimodular_const * z.powu(self.z_power as u32);
        for &zk in &self.zeros {
            acc *= (z - zk) / (Complex::new(1.0, 0.0) - zk.conj() * z);
        }
        acc
    }

    /// The same function as a rational function with all poles outside the
    /// closed disk.
    pub fn to_rational(&self) -> Result<RationalFunction> {
        let num = Polynomial::from_roots(&self.zeros)
            .scale(self.unimodular_const)
            .shift_up(self.z_power);
        let den_roots: Vec<Complex> = self.zeros.iter().map(|z| z.conj().inv()).collect();
        let mut den = Polynomial::from_roots(&den_roots);
        // from_roots is monic in z; rescale so den = prod (1 - conj(z_k) z).
        let mut c = Complex::new(1.0, 0.0);
        for &z in &self.zeros {
            c *= -z.conj();
        }
        den = den.scale(c);
        RationalFunction::new(num, den)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const ALPHA: f64 = 0.381_966_011_250_105_2; // (3 - sqrt 5)/2

    #[test]
    fn quadratic_roots() {
        let p = Polynomial::from_real(&[1.0, -3.0, 1.0]);
        let rs = find_roots(&p).unwrap();
        let mut mods: Vec<f64> = rs.roots.iter().map(|r| r.re).collect();
        mods.sort_by(|a, b| a.partial_cmp(b).unwrap());
        assert!((mods[0] - ALPHA).abs() < 1e-12);
        assert!((mods[1] - (3.0 + 5.0f64.sqrt()) / 2.0).abs() < 1e-12);

        let p = Polynomial::from_real(&[1.0, 0.0, 1.0]);
        let rs = find_roots(&p).unwrap();
        for r in rs.roots {
            assert!((r.norm() - 1.0).abs() < 1e-12 && r.re.abs() < 1e-12);
        }
    }

    #[test]
    fn double_root_cluster() {
        let p = &Polynomial::from_real(&[-2.0, 1.0]) * &Polynomial::from_real(&[-2.0, 1.0]);
        let rs = find_roots(&p).unwrap();
        assert_eq!(rs.roots.len(), 2);
        for r in rs.roots {
            assert!((r - Complex::new(2.0, 0.0)).norm() < 1e-6);
        }
    }

    #[test]
    fn constant_rejected() {
        assert!(find_roots(&Polynomial::one()).is_err());
        assert!(find_roots(&Polynomial::zero()).is_err());
    }

    #[test]
    fn reconstruction_matches_monic_input() {
        let p = Polynomial::new(vec![
            Complex::new(0.3, -1.2),
            Complex::new(-0.5, 0.1),
            Complex::new(2.0, 0.4),
            Complex::new(0.0, 0.0),
            Complex::new(1.0, -0.7),
        ]);
        let rs = find_roots(&p).unwrap();
        let lead = p.coeff(p.degree().unwrap());
        let back = Polynomial::from_roots(&rs.roots);
        for k in 0..=p.degree().unwrap() {
            let want = p.coeff(k) / lead;
            assert!(
                (back.coeff(k) - want).norm() <= 1e-8 * p.max_coeff() / lead.norm(),
                "coefficient {k} off"
            );
        }
    }

    #[test]
    fn fejer_riesz_constant() {
        let r = fejer_riesz(&TrigPolynomial::constant(4.0)).unwrap();
        assert_eq!(r, Polynomial::from_real(&[2.0]));
    }

    #[test]
    fn fejer_riesz_sarason_weight() {
        // v = 3 - 2 cos t = |1 - e^{it}|^2 + 1; factor is (1 - alpha z)/(1 - alpha)
        let v = TrigPolynomial::from_abs_squared(&Polynomial::from_real(&[1.0, -1.0]))
            .add_constant(1.0);
        let r = fejer_riesz(&v).unwrap();
        assert!((r.eval(Complex::new(1.0, 0.0)).norm() - 1.0).abs() < 1e-12);
        let want0 = 1.0 / (1.0 - ALPHA);
        assert!((r.coeff(0) - Complex::new(want0, 0.0)).norm() < 1e-10);
        assert!((r.coeff(1) - Complex::new(-ALPHA * want0, 0.0)).norm() < 1e-10);
        assert!(r.coeff(0).re > 0.0);
        for root in find_roots(&r).unwrap().roots {
            assert!(root.norm() >= 1.0 + 1e-10);
        }
    }

    #[test]
    fn fejer_riesz_boundary_zero() {
        // v = 2 + 2 cos t = |1 + e^{it}|^2 vanishes at t = pi
        let v = TrigPolynomial::from_abs_squared(&Polynomial::from_real(&[1.0, 1.0]));
        assert!(matches!(
            fejer_riesz(&v),
            Err(Error::BoundaryZero { .. })
        ));
    }

    #[test]
    fn fejer_riesz_idempotent() {
        let v = TrigPolynomial::from_abs_squared(&Polynomial::from_real(&[1.0, -1.0]))
            .add_constant(1.0);
        let r = fejer_riesz(&v).unwrap();
        let r2 = fejer_riesz(&TrigPolynomial::from_abs_squared(&r)).unwrap();
        assert!((&r2 - &r).max_coeff() < 1e-10);
    }

    #[test]
    fn koebe_cases() {
        let z = koebe_preimage(&UnimodularPoint::one()).unwrap();
        assert!((z - Complex::new(ALPHA, 0.0)).norm() < 1e-14);

        let e = UnimodularPoint::from_turns(0.25);
        let z = koebe_preimage(&e).unwrap();
        assert!(z.norm() < 1.0);
        let one = Complex::new(1.0, 0.0);
        let image = z / ((one - z) * (one - z));
        assert!((image - e.value()).norm() < 1e-12);

        assert!(matches!(
            koebe_preimage(&UnimodularPoint::from_turns(0.5)),
            Err(Error::KoebeSlit)
        ));
    }

    #[test]
    fn koebe_vieta() {
        // the two quadratic roots multiply to 1
        let e = UnimodularPoint::from_turns(0.13);
        let z = koebe_preimage(&e).unwrap();
        let p = Polynomial::new(vec![
            e.value(),
            -(e.value() * 2.0 + Complex::new(1.0, 0.0)),
            e.value(),
        ]);
        let roots = find_roots(&p).unwrap().roots;
        let prod = roots[0] * roots[1];
        assert!((prod - Complex::new(1.0, 0.0)).norm() < 1e-10);
        assert!(roots.iter().any(|&r| (r - z).norm() < 1e-9));
    }

    #[test]
    fn blaschke_eval() {
        let b = BlaschkeProduct::new(vec![], 1, Complex::new(1.0, 0.0)).unwrap();
        assert_eq!(b.eval(Complex::new(0.0, 1.0)), Complex::new(0.0, 1.0));

        let b = BlaschkeProduct::new(
            vec![Complex::new(0.5, 0.0), Complex::new(-0.2, 0.3)],
            1,
            Complex::from_polar(1.0, 0.4),
        )
        .unwrap();
        for k in 0..32 {
            let z = Complex::from_polar(1.0, TAU * (k as f64 + 0.3) / 32.0);
            assert!((b.eval(z).norm() - 1.0).abs() < 1e-10);
        }

        let single =
            BlaschkeProduct::new(vec![Complex::new(0.5, 0.0)], 0, Complex::new(1.0, 0.0)).unwrap();
        assert!((single.eval(Complex::zero()) - Complex::new(-0.5, 0.0)).norm() < 1e-15);

        assert!(BlaschkeProduct::new(vec![Complex::new(1.0, 0.0)], 0, Complex::new(1.0, 0.0))
            .is_err());
    }

    #[test]
    fn blaschke_rational_agrees() {
        let b = BlaschkeProduct::new(
            vec![Complex::new(0.5, 0.0), Complex::new(-0.2, 0.3)],
            2,
            Complex::from_polar(1.0, -0.9),
        )
        .unwrap();
        let r = b.to_rational().unwrap();
        for k in 0..8 {
            let z = Complex::from_polar(0.77, TAU * k as f64 / 8.0);
            assert!((b.eval(z) - r.eval(z)).norm() < 1e-12);
        }
    }
}
