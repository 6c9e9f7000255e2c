use serde::{Deserialize, Deserializer, Serialize};

use super::Polynomial;
use crate::error::{Error, Result};
use crate::Complex;

/// Location of the denominator roots relative to the closed unit disk.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum PoleClass {
    /// Every pole has modulus `> 1 + 1e-12`.
    OutsideClosedDisk,
    /// Every pole lies on the unit circle within `1e-12`.
    BoundaryOnly,
    Mixed,
}

/// Quotient of two polynomials. Construction classifies the poles and
/// rejects a numerator/denominator pair sharing a root within `1e-9`;
/// arithmetic never reduces silently.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RationalFunction {
    num: Polynomial,
    den: Polynomial,
    #[serde(skip)]
    pole_class: PoleClass,
    /// Smallest pole modulus (`f64::INFINITY` for a constant denominator).
    #[serde(skip)]
    min_pole_modulus: f64,
}

impl RationalFunction {
    pub fn new(num: Polynomial, den: Polynomial) -> Result<Self> {
        if den.is_zero() {
            return Err(Error::ZeroDivisor);
        }
        let (pole_class, min_pole_modulus, den_roots) = classify(&den)?;
        if !num.is_zero() && num.degree().unwrap_or(0) >= 1 {
            let scale = num.max_coeff();
            for &root in &den_roots {
                if num.eval(root).norm() <= 1e-9 * scale {
                    // Confirm with the actual numerator roots so a small value
                    // of a steep polynomial is not mistaken for a shared zero.
                    let nroots = crate::factor::find_roots(&num)?;
                    if nroots.roots.iter().any(|&nr| (nr - root).norm() <= 1e-9) {
                        return Err(Error::CommonRoot { root });
                    }
                }
            }
        }
        Ok(RationalFunction {
            num,
            den,
            pole_class,
            min_pole_modulus,
        })
    }

    pub fn from_polynomial(p: Polynomial) -> Self {
        RationalFunction {
            num: p,
            den: Polynomial::one(),
            pole_class: PoleClass::OutsideClosedDisk,
            min_pole_modulus: f64::INFINITY,
        }
    }

    pub fn num(&self) -> &Polynomial {
        &self.num
    }

    pub fn den(&self) -> &Polynomial {
        &self.den
    }

    pub fn pole_class(&self) -> PoleClass {
        self.pole_class
    }

    pub fn min_pole_modulus(&self) -> f64 {
        self.min_pole_modulus
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn eval(&self, z: Complex) -> Complex {
        self.num.eval(z) / self.den.eval(z)
    }

    pub fn scale(&self, c: Complex) -> Self {
        RationalFunction {
            num: self.num.scale(c),
            den: self.den.clone(),
            pole_class: self.pole_class,
            min_pole_modulus: self.min_pole_modulus,
        }
    }

    /// Product, without reduction.
    pub fn mul(&self, other: &RationalFunction) -> Result<Self> {
        RationalFunction::new(&self.num * &other.num, &self.den * &other.den)
    }

    pub fn mul_poly(&self, p: &Polynomial) -> Result<Self> {
        RationalFunction::new(&self.num * p, self.den.clone())
    }

    /// First `n + 1` Taylor coefficients at the origin via the linear
    /// recurrence `num_k = sum_j den_j c_{k-j}`.
    pub fn taylor_coeffs(&self, n: usize) -> Result<Vec<Complex>> {
        taylor_quotient(&self.num, &self.den, n)
    }
}

/// Taylor coefficients of `num/den` at the origin, for quotients assembled
/// on the fly (no pole classification involved).
pub(crate) fn taylor_quotient(
    num: &Polynomial,
    den: &Polynomial,
    n: usize,
) -> Result<Vec<Complex>> {
    let d0 = den.coeff(0);
    if d0.norm() <= 1e-300 {
        return Err(Error::DenominatorVanishesAtOrigin);
    }
    let mut c = Vec::with_capacity(n + 1);
    let dd = den.degree().unwrap_or(0);
    for k in 0..=n {
        let mut acc = num.coeff(k);
        for j in 1..=dd.min(k) {
            acc -= den.coeff(j) * c[k - j];
        }
        c.push(acc / d0);
    }
    Ok(c)
}

fn classify(den: &Polynomial) -> Result<(PoleClass, f64, Vec<Complex>)> {
    if den.degree().unwrap_or(0) == 0 {
        return Ok((PoleClass::OutsideClosedDisk, f64::INFINITY, Vec::new()));
    }
    let roots = crate::factor::find_roots(den)?.roots;
    let clusters = crate::factor::local_cluster_sizes(&roots);
    let mut min_mod = f64::INFINITY;
    let mut all_outside = true;
    let mut all_boundary = true;
    for (r, &k) in roots.iter().zip(&clusters) {
        let m = r.norm();
        // Multiple roots are only resolved as clusters; widen the location
        // test accordingly so a true boundary root never leaks outside.
        let slack = 1e-12f64.max(crate::factor::cluster_slack(k));
        min_mod = min_mod.min(m);
        if m <= 1.0 + slack {
            all_outside = false;
        }
        if (m - 1.0).abs() > slack {
            all_boundary = false;
        }
    }
    let class = if all_outside {
        PoleClass::OutsideClosedDisk
    } else if all_boundary {
        PoleClass::BoundaryOnly
    } else {
        PoleClass::Mixed
    };
    Ok((class, min_mod, roots))
}

// JSON form: {"num": [...], "den": [...]}.
#[derive(Deserialize)]
struct RationalRepr {
    num: Polynomial,
    den: Polynomial,
}

impl<'de> Deserialize<'de> for RationalFunction {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let repr = RationalRepr::deserialize(deserializer)?;
        RationalFunction::new(repr.num, repr.den)
            .map_err(|e| serde::de::Error::custom(e.to_string()))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::Zero;

    #[test]
    fn taylor_geometric() {
        // 1/(1-z)
        let f = RationalFunction::new(Polynomial::one(), Polynomial::from_real(&[1.0, -1.0]))
            .unwrap();
        assert_eq!(f.pole_class(), PoleClass::BoundaryOnly);
        let c = f.taylor_coeffs(3).unwrap();
        for k in 0..4 {
            assert!((c[k] - Complex::new(1.0, 0.0)).norm() < 1e-14);
        }
        // 1/(1-z)^2 -> 1, 2, 3, 4
        let den = &Polynomial::from_real(&[1.0, -1.0]) * &Polynomial::from_real(&[1.0, -1.0]);
        let f2 = RationalFunction::new(Polynomial::one(), den).unwrap();
        let c2 = f2.taylor_coeffs(3).unwrap();
        for k in 0..4 {
            assert!((c2[k] - Complex::new((k + 1) as f64, 0.0)).norm() < 1e-13);
        }
        // z/1 -> [0, 1, 0]
        let f3 = RationalFunction::from_polynomial(Polynomial::from_real(&[0.0, 1.0]));
        let c3 = f3.taylor_coeffs(2).unwrap();
        assert_eq!(c3[0], Complex::zero());
        assert!((c3[1] - Complex::new(1.0, 0.0)).norm() < 1e-15);
        assert_eq!(c3[2], Complex::zero());
    }

    #[test]
    fn taylor_rejects_pole_at_origin() {
        let f = RationalFunction::new(Polynomial::one(), Polynomial::from_real(&[0.0, 1.0]))
            .unwrap();
        assert!(matches!(
            f.taylor_coeffs(3),
            Err(Error::DenominatorVanishesAtOrigin)
        ));
    }

    #[test]
    fn taylor_reproduces_numerator() {
        // (num/den)*den has the Taylor coefficients of num.
        let num = Polynomial::from_real(&[2.0, -1.0, 0.5]);
        let den = Polynomial::from_real(&[1.0, 0.0, 0.25]);
        let f = RationalFunction::new(num.clone(), den.clone()).unwrap();
        let c = f.taylor_coeffs(24).unwrap();
        let series = Polynomial::new(c);
        let back = &series * &den;
        for k in 0..=2 {
            assert!((back.coeff(k) - num.coeff(k)).norm() < 1e-12);
        }
    }

    #[test]
    fn common_root_detected() {
        // (z-2)/( (z-2)(z-3) )
        let num = Polynomial::from_real(&[-2.0, 1.0]);
        let den = &num * &Polynomial::from_real(&[-3.0, 1.0]);
        assert!(matches!(
            RationalFunction::new(num, den),
            Err(Error::CommonRoot { .. })
        ));
    }

    #[test]
    fn classification() {
        let outside =
            RationalFunction::new(Polynomial::one(), Polynomial::from_real(&[1.0, -0.5])).unwrap();
        assert_eq!(outside.pole_class(), PoleClass::OutsideClosedDisk);
        assert!((outside.min_pole_modulus() - 2.0).abs() < 1e-10);

        let mixed = RationalFunction::new(
            Polynomial::one(),
            &Polynomial::from_real(&[1.0, -2.0]) * &Polynomial::from_real(&[1.0, -0.5]),
        )
        .unwrap();
        assert_eq!(mixed.pole_class(), PoleClass::Mixed);
    }
}
