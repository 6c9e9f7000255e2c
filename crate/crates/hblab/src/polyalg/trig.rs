use std::collections::BTreeMap;

use num_traits::Zero;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::Polynomial;
use crate::error::{Error, Result};
use crate::Complex;

/// Hermitian-symmetric Laurent polynomial `v(e^{it}) = sum_j c_j e^{ijt}`
/// with `c_{-j} = conj(c_j)`, hence real-valued on the unit circle.
#[derive(Debug, Clone, PartialEq)]
pub struct TrigPolynomial {
    c: BTreeMap<i64, Complex>,
}

impl TrigPolynomial {
    pub fn zero() -> Self {
        TrigPolynomial { c: BTreeMap::new() }
    }

    pub fn constant(v: f64) -> Self {
        let mut c = BTreeMap::new();
        if v != 0.0 {
            c.insert(0, Complex::new(v, 0.0));
        }
        TrigPolynomial { c }
    }

    /// `|p(e^{it})|^2` assembled exactly from the coefficient autocorrelation
    /// `c_j = sum_k p_{k+j} conj(p_k)`, never from circle samples.
    pub fn from_abs_squared(p: &Polynomial) -> Self {
        let mut c = BTreeMap::new();
        let coeffs = p.coeffs();
        let deg = coeffs.len() as i64;
        for j in -(deg - 1).max(0)..deg.max(0) {
            let mut acc = Complex::zero();
            for k in 0..coeffs.len() {
                let kj = k as i64 + j;
                if kj >= 0 && (kj as usize) < coeffs.len() {
                    acc += coeffs[kj as usize] * coeffs[k].conj();
                }
            }
            if acc.norm() > 0.0 {
                c.insert(j, acc);
            }
        }
        let mut v = TrigPolynomial { c };
        v.hermitianize();
        v
    }

    /// Enforce `c_{-j} = conj(c_j)` by averaging.
    fn hermitianize(&mut self) {
        let keys: Vec<i64> = self.c.keys().copied().collect();
        for j in keys {
            if j < 0 {
                continue;
            }
            let pos = self.c.get(&j).copied().unwrap_or_else(Complex::zero);
            let neg = self.c.get(&-j).copied().unwrap_or_else(Complex::zero);
            let avg = (pos + neg.conj()) * 0.5;
            if j == 0 {
                self.c.insert(0, Complex::new(pos.re, 0.0));
            } else {
                self.c.insert(j, avg);
                self.c.insert(-j, avg.conj());
            }
        }
    }

    pub fn add(&self, other: &TrigPolynomial) -> TrigPolynomial {
        let mut c = self.c.clone();
        for (&j, &v) in &other.c {
            *c.entry(j).or_insert_with(Complex::zero) += v;
        }
        c.retain(|_, v| v.norm() > 0.0);
        TrigPolynomial { c }
    }

    pub fn add_constant(&self, v: f64) -> TrigPolynomial {
        self.add(&TrigPolynomial::constant(v))
    }

    pub fn coeff(&self, j: i64) -> Complex {
        self.c.get(&j).copied().unwrap_or_else(Complex::zero)
    }

    pub fn max_abs_coeff(&self) -> f64 {
        self.c.values().map(|v| v.norm()).fold(0.0, f64::max)
    }

    /// Largest `|j|` carrying a coefficient that is not pure noise.
    pub fn bandwidth(&self) -> usize {
        let scale = self.max_abs_coeff();
        self.c
            .iter()
            .filter(|(_, v)| v.norm() > 1e-13 * scale)
            .map(|(&j, _)| j.unsigned_abs() as usize)
            .max()
            .unwrap_or(0)
    }

    /// Value at angle `t`; real by Hermitian symmetry.
    pub fn eval_angle(&self, t: f64) -> f64 {
        let z = Complex::from_polar(1.0, t);
        self.eval_circle(z)
    }

    /// Value at a point of the unit circle.
    pub fn eval_circle(&self, z: Complex) -> f64 {
        let mut acc = self.coeff(0).re;
        let mut zj = Complex::new(1.0, 0.0);
        let bw = self.bandwidth() as i64;
        for j in 1..=bw {
            zj *= z;
            acc += 2.0 * (self.coeff(j) * zj).re;
        }
        acc
    }

    /// The analytic lift `w(z) = z^{m0} v(z)`, a polynomial of degree
    /// `2 m0`, together with `m0`.
    pub fn analytic_lift(&self) -> (Polynomial, usize) {
        let m0 = self.bandwidth();
        let coeffs = (0..=2 * m0 as i64)
            .map(|j| self.coeff(j - m0 as i64))
            .collect();
        (Polynomial::new(coeffs), m0)
    }

    /// Validates Hermitian symmetry within `tol` (relative).
    pub fn check_hermitian(&self, tol: f64) -> Result<()> {
        let scale = self.max_abs_coeff().max(1e-300);
        for (&j, &v) in &self.c {
            let mirror = self.coeff(-j).conj();
            if (v - mirror).norm() > tol * scale {
                return Err(Error::InvalidInput(format!(
                    "coefficients at +/-{j} violate Hermitian symmetry"
                )));
            }
        }
        Ok(())
    }
}

// JSON form: {"c": [[j, re, im], ...]}, Hermitian symmetry enforced on load.
#[derive(Serialize, Deserialize)]
struct TrigRepr {
    c: Vec<(i64, f64, f64)>,
}

impl Serialize for TrigPolynomial {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let repr = TrigRepr {
            c: self.c.iter().map(|(&j, v)| (j, v.re, v.im)).collect(),
        };
        repr.serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for TrigPolynomial {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let repr = TrigRepr::deserialize(deserializer)?;
        let mut c = BTreeMap::new();
        for (j, re, im) in repr.c {
            if !re.is_finite() || !im.is_finite() {
                return Err(serde::de::Error::custom("non-finite coefficient"));
            }
            c.insert(j, Complex::new(re, im));
        }
        let mut v = TrigPolynomial { c };
        v.check_hermitian(1e-9)
            .map_err(|e| serde::de::Error::custom(e.to_string()))?;
        v.hermitianize();
        Ok(v)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn abs_squared_of_linear() {
        // |1 - z|^2 = 2 - 2 cos t: c_0 = 2, c_{+-1} = -1
        let p = Polynomial::from_real(&[1.0, -1.0]);
        let v = TrigPolynomial::from_abs_squared(&p);
        assert!((v.coeff(0) - Complex::new(2.0, 0.0)).norm() < 1e-15);
        assert!((v.coeff(1) - Complex::new(-1.0, 0.0)).norm() < 1e-15);
        assert!((v.coeff(-1) - Complex::new(-1.0, 0.0)).norm() < 1e-15);
        assert_eq!(v.bandwidth(), 1);
        // matches |p|^2 pointwise
        for k in 0..16 {
            let t = std::f64::consts::TAU * k as f64 / 16.0;
            let z = Complex::from_polar(1.0, t);
            assert!((v.eval_angle(t) - p.eval(z).norm_sqr()).abs() < 1e-12);
        }
    }

    #[test]
    fn analytic_lift_shifts() {
        let p = Polynomial::from_real(&[1.0, -1.0]);
        let v = TrigPolynomial::from_abs_squared(&p).add_constant(1.0);
        let (w, m0) = v.analytic_lift();
        assert_eq!(m0, 1);
        // 3 - 2 cos t lifts to -1 + 3z - z^2
        assert_eq!(w, Polynomial::from_real(&[-1.0, 3.0, -1.0]));
    }

    #[test]
    fn json_enforces_symmetry() {
        let bad = r#"{"c": [[0, 1.0, 0.0], [1, 0.5, 0.0], [-1, 0.4, 0.0]]}"#;
        assert!(serde_json::from_str::<TrigPolynomial>(bad).is_err());
        let good = r#"{"c": [[0, 3.0, 0.0], [1, -1.0, 0.0], [-1, -1.0, 0.0]]}"#;
        let v: TrigPolynomial = serde_json::from_str(good).unwrap();
        assert!((v.eval_angle(0.0) - 1.0).abs() < 1e-14);
    }
}
