use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_traits::Zero;
use serde::de::{SeqAccess, Visitor};
use serde::ser::SerializeSeq;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::{approx_zero, UnimodularPoint, TRIM_REL};
use crate::error::{Error, Result};
use crate::Complex;

/// Complex-coefficient polynomial in `z`, stored dense with ascending
/// degree. The zero polynomial is the empty coefficient list; otherwise the
/// trailing coefficient is nonzero (tiny trailing noise is trimmed relative
/// to the largest coefficient modulus).
#[derive(Debug, Clone, PartialEq)]
pub struct Polynomial {
    coeffs: Vec<Complex>,
}

impl Polynomial {
    pub fn zero() -> Self {
        Polynomial { coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        Polynomial::constant(Complex::new(1.0, 0.0))
    }

    pub fn constant(c: Complex) -> Self {
        Polynomial::new(vec![c])
    }

    /// `c * z^k`.
    pub fn monomial(k: usize, c: Complex) -> Self {
        let mut coeffs = vec![Complex::zero(); k + 1];
        coeffs[k] = c;
        Polynomial::new(coeffs)
    }

    /// Builds from ascending coefficients, trimming trailing noise.
    pub fn new(coeffs: Vec<Complex>) -> Self {
        let mut p = Polynomial { coeffs };
        p.trim();
        p
    }

    pub fn from_real(coeffs: &[f64]) -> Self {
        Polynomial::new(coeffs.iter().map(|&x| Complex::new(x, 0.0)).collect())
    }

    /// Monic polynomial with the given roots.
    pub fn from_roots(roots: &[Complex]) -> Self {
        let mut acc = vec![Complex::new(1.0, 0.0)];
        for &r in roots {
            let mut next = vec![Complex::zero(); acc.len() + 1];
            for (i, &c) in acc.iter().enumerate() {
                next[i + 1] += c;
                next[i] -= r * c;
            }
            acc = next;
        }
        Polynomial { coeffs: acc }
    }

    fn trim(&mut self) {
        let scale = self.max_coeff();
        if scale == 0.0 {
            self.coeffs.clear();
            return;
        }
        while let Some(&last) = self.coeffs.last() {
            if approx_zero(last, scale) {
                self.coeffs.pop();
            } else {
                break;
            }
        }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree, or `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn coeffs(&self) -> &[Complex] {
        &self.coeffs
    }

    /// Coefficient of `z^k` (zero beyond the stored degree).
    pub fn coeff(&self, k: usize) -> Complex {
        self.coeffs.get(k).copied().unwrap_or_else(Complex::zero)
    }

    /// Largest coefficient modulus.
    pub fn max_coeff(&self) -> f64 {
        self.coeffs.iter().map(|c| c.norm()).fold(0.0, f64::max)
    }

    /// l2 norm of the coefficient vector (the `H^2` norm).
    pub fn l2_norm(&self) -> f64 {
        self.coeffs
            .iter()
            .map(|c| c.norm_sqr())
            .sum::<f64>()
            .sqrt()
    }

    pub fn eval(&self, z: Complex) -> Complex {
        let mut acc = Complex::zero();
        for &c in self.coeffs.iter().rev() {
            acc = acc * z + c;
        }
        acc
    }

    pub fn scale(&self, c: Complex) -> Self {
        Polynomial::new(self.coeffs.iter().map(|&a| a * c).collect())
    }

    /// Coefficientwise complex conjugation, i.e. `conj(p(conj(z)))`.
    pub fn conj(&self) -> Self {
        Polynomial {
            coeffs: self.coeffs.iter().map(|c| c.conj()).collect(),
        }
    }

    pub fn derivative(&self) -> Self {
        if self.coeffs.len() <= 1 {
            return Polynomial::zero();
        }
        Polynomial::new(
            self.coeffs[1..]
                .iter()
                .enumerate()
                .map(|(i, &c)| c * (i + 1) as f64)
                .collect(),
        )
    }

    pub fn derivative_n(&self, n: usize) -> Self {
        let mut p = self.clone();
        for _ in 0..n {
            p = p.derivative();
        }
        p
    }

    /// `z^k * self`.
    pub fn shift_up(&self, k: usize) -> Self {
        if self.is_zero() {
            return Polynomial::zero();
        }
        let mut coeffs = vec![Complex::zero(); k];
        coeffs.extend_from_slice(&self.coeffs);
        Polynomial { coeffs }
    }

    /// Euclidean division: `self = q * d + rem` with `deg rem < deg d`.
    pub fn divrem(&self, d: &Polynomial) -> Result<(Polynomial, Polynomial)> {
        if d.is_zero() {
            return Err(Error::ZeroDivisor);
        }
        let dd = d.coeffs.len() - 1;
        if self.coeffs.len() <= dd {
            return Ok((Polynomial::zero(), self.clone()));
        }
        let lead = d.coeffs[dd];
        let mut rem = self.coeffs.clone();
        let qlen = rem.len() - dd;
        let mut q = vec![Complex::zero(); qlen];
        for i in (0..qlen).rev() {
            let c = rem[i + dd] / lead;
            q[i] = c;
            for j in 0..=dd {
                rem[i + j] -= c * d.coeffs[j];
            }
        }
        rem.truncate(dd);
        Ok((Polynomial::new(q), Polynomial::new(rem)))
    }

    /// One synthetic division by `(z - center)`: returns the quotient and the
    /// remainder `self(center)`.
    pub fn synth_div(&self, center: Complex) -> (Polynomial, Complex) {
        if self.is_zero() {
            return (Polynomial::zero(), Complex::zero());
        }
        let n = self.coeffs.len();
        let mut q = vec![Complex::zero(); n - 1];
        let mut carry = Complex::zero();
        for i in (0..n).rev() {
            let b = self.coeffs[i] + carry * center;
            if i == 0 {
                return (Polynomial::new(q), b);
            }
            q[i - 1] = b;
            carry = b;
        }
        unreachable!()
    }

    /// Taylor coefficients of `self` at `center` (all of them), computed by
    /// repeated synthetic division. Entry `j` is `f^(j)(center)/j!`.
    pub fn taylor_at(&self, center: Complex) -> Vec<Complex> {
        let mut out = Vec::with_capacity(self.coeffs.len());
        let mut p = self.clone();
        while !p.is_zero() {
            let (q, rem) = p.synth_div(center);
            out.push(rem);
            p = q;
        }
        if out.is_empty() {
            out.push(Complex::zero());
        }
        out
    }

    /// Order-`(m-1)` Taylor section at the boundary point `lambda`: the unique
    /// polynomial of degree `< m` with `self - section` divisible by
    /// `(z - lambda)^m`. Computed by Horner shifts rather than derivative
    /// evaluation.
    pub fn taylor_section(&self, lambda: &UnimodularPoint, m: usize) -> Polynomial {
        assert!(m >= 1, "section order must be positive");
        let center = lambda.value();
        let mut section = Polynomial::zero();
        let mut basis = Polynomial::one();
        let shift = Polynomial::new(vec![-center, Complex::new(1.0, 0.0)]);
        let mut p = self.clone();
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
        section
    }

    /// Reflection `z^m * conj(self(1/conj(z)))`: coefficient `k` of the output
    /// is the conjugate of coefficient `m - k` of the input.
    pub fn reflect(&self, m: usize) -> Result<Polynomial> {
        if let Some(d) = self.degree() {
            if d > m {
                return Err(Error::DegreeExceedsOrder {
                    degree: d,
                    order: m,
                });
            }
        }
        let coeffs = (0..=m).map(|k| self.coeff(m - k).conj()).collect();
        Ok(Polynomial::new(coeffs))
    }
}

impl Add for &Polynomial {
    type Output = Polynomial;
    fn add(self, rhs: &Polynomial) -> Polynomial {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        let coeffs = (0..n).map(|k| self.coeff(k) + rhs.coeff(k)).collect();
        Polynomial::new(coeffs)
    }
}

impl Sub for &Polynomial {
    type Output = Polynomial;
    fn sub(self, rhs: &Polynomial) -> Polynomial {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        let coeffs = (0..n).map(|k| self.coeff(k) - rhs.coeff(k)).collect();
        Polynomial::new(coeffs)
    }
}

impl Neg for &Polynomial {
    type Output = Polynomial;
    fn neg(self) -> Polynomial {
        Polynomial {
            coeffs: self.coeffs.iter().map(|&c| -c).collect(),
        }
    }
}

impl Mul for &Polynomial {
    type Output = Polynomial;
    fn mul(self, rhs: &Polynomial) -> Polynomial {
        if self.is_zero() || rhs.is_zero() {
            return Polynomial::zero();
        }
        let mut coeffs = vec![Complex::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, &a) in self.coeffs.iter().enumerate() {
            for (j, &b) in rhs.coeffs.iter().enumerate() {
                coeffs[i + j] += a * b;
            }
        }
        Polynomial::new(coeffs)
    }
}

impl fmt::Display for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (k, c) in self.coeffs.iter().enumerate() {
            if c.norm() <= TRIM_REL * self.max_coeff() {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            write!(f, "({:.6}{:+.6}i)", c.re, c.im)?;
            if k == 1 {
                write!(f, " z")?;
            } else if k > 1 {
                write!(f, " z^{}", k)?;
            }
        }
        Ok(())
    }
}

// JSON form: array of [re, im] pairs, ascending degree.
impl Serialize for Polynomial {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let mut seq = serializer.serialize_seq(Some(self.coeffs.len()))?;
        for c in &self.coeffs {
            seq.serialize_element(&[c.re, c.im])?;
        }
        seq.end()
    }
}

impl<'de> Deserialize<'de> for Polynomial {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        struct V;
        impl<'de> Visitor<'de> for V {
            type Value = Polynomial;
            fn expecting(&self, f: &mut fmt::Formatter) -> fmt::Result {
                f.write_str("an array of [re, im] coefficient pairs")
            }
            fn visit_seq<A: SeqAccess<'de>>(
                self,
                mut seq: A,
            ) -> std::result::Result<Polynomial, A::Error> {
                let mut coeffs = Vec::new();
                while let Some(pair) = seq.next_element::<[f64; 2]>()? {
                    if !pair[0].is_finite() || !pair[1].is_finite() {
                        return Err(serde::de::Error::custom("non-finite coefficient"));
                    }
                    coeffs.push(Complex::new(pair[0], pair[1]));
                }
                Ok(Polynomial::new(coeffs))
            }
        }
        deserializer.deserialize_seq(V)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn c(re: f64, im: f64) -> Complex {
        Complex::new(re, im)
    }

    #[test]
    fn ring_ops() {
        // (z-1)(z+1) = z^2 - 1
        let a = Polynomial::from_real(&[-1.0, 1.0]);
        let b = Polynomial::from_real(&[1.0, 1.0]);
        assert_eq!(&a * &b, Polynomial::from_real(&[-1.0, 0.0, 1.0]));
        // derivative of z^2 is 2z
        let sq = Polynomial::from_real(&[0.0, 0.0, 1.0]);
        assert_eq!(sq.derivative(), Polynomial::from_real(&[0.0, 2.0]));
        // derivative of a constant is 0
        assert!(Polynomial::from_real(&[5.0]).derivative().is_zero());
    }

    #[test]
    fn divrem_cases() {
        let f = Polynomial::from_real(&[-1.0, 0.0, 1.0]);
        let d = Polynomial::from_real(&[-1.0, 1.0]);
        let (q, rem) = f.divrem(&d).unwrap();
        assert_eq!(q, Polynomial::from_real(&[1.0, 1.0]));
        assert!(rem.is_zero());

        let f = Polynomial::from_real(&[0.0, 0.0, 1.0]);
        let (q, rem) = f.divrem(&d).unwrap();
        assert_eq!(q, Polynomial::from_real(&[1.0, 1.0]));
        assert_eq!(rem, Polynomial::from_real(&[1.0]));

        let (q, rem) = Polynomial::one()
            .divrem(&Polynomial::from_real(&[0.0, 1.0]))
            .unwrap();
        assert!(q.is_zero());
        assert_eq!(rem, Polynomial::one());

        assert!(matches!(
            Polynomial::one().divrem(&Polynomial::zero()),
            Err(Error::ZeroDivisor)
        ));
    }

    #[test]
    fn reflect_cases() {
        // alpha0 + alpha1 z with m = 1 -> conj(alpha1) + conj(alpha0) z
        let p = Polynomial::new(vec![c(1.0, 2.0), c(3.0, -4.0)]);
        let r = p.reflect(1).unwrap();
        assert_eq!(r.coeff(0), c(3.0, 4.0));
        assert_eq!(r.coeff(1), c(1.0, -2.0));
        // z^m reflects to the constant 1
        let zm = Polynomial::monomial(3, c(1.0, 0.0));
        assert_eq!(zm.reflect(3).unwrap(), Polynomial::one());
        // 1+2i + z^2 with m = 2 -> 1 + (1-2i) z^2
        let p = Polynomial::new(vec![c(1.0, 2.0), c(0.0, 0.0), c(1.0, 0.0)]);
        let r = p.reflect(2).unwrap();
        assert_eq!(r.coeff(0), c(1.0, 0.0));
        assert_eq!(r.coeff(2), c(1.0, -2.0));
        // degree above the order is rejected
        assert!(Polynomial::monomial(3, c(1.0, 0.0)).reflect(2).is_err());
    }

    #[test]
    fn taylor_section_cases() {
        let one = UnimodularPoint::from_turns(0.0);
        let sq = Polynomial::from_real(&[0.0, 0.0, 1.0]);
        // f = z^2 at lambda = 1, m = 1 -> constant 1
        assert_eq!(sq.taylor_section(&one, 1), Polynomial::one());
        // m = 2 -> 1 + 2(z-1) = 2z - 1
        assert_eq!(sq.taylor_section(&one, 2), Polynomial::from_real(&[-1.0, 2.0]));
        // degree < m returns f itself
        let lin = Polynomial::from_real(&[4.0, -2.0]);
        assert_eq!(lin.taylor_section(&one, 5), lin);
    }

    #[test]
    fn section_remainder_divisible() {
        let lam = UnimodularPoint::from_turns(0.3);
        let f = Polynomial::new(vec![c(1.0, -0.5), c(0.3, 0.2), c(0.0, 1.0), c(2.0, 0.0)]);
        for m in 1..=3usize {
            let s = f.taylor_section(&lam, m);
            let d = Polynomial::from_roots(&vec![lam.value(); m]);
            let (_, rem) = (&f - &s).divrem(&d).unwrap();
            assert!(rem.max_coeff() <= 1e-10 * f.max_coeff().max(1.0));
        }
    }

    #[test]
    fn json_roundtrip() {
        let p = Polynomial::new(vec![c(1.0, 2.0), c(-0.25, 0.0)]);
        let s = serde_json::to_string(&p).unwrap();
        assert_eq!(s, "[[1.0,2.0],[-0.25,0.0]]");
        let q: Polynomial = serde_json::from_str(&s).unwrap();
        assert_eq!(p, q);
    }

    fn arb_poly(max_deg: usize) -> impl Strategy<Value = Polynomial> {
        proptest::collection::vec((-1.0f64..1.0, -1.0f64..1.0), 1..=max_deg + 1)
            .prop_map(|v| Polynomial::new(v.into_iter().map(|(re, im)| c(re, im)).collect()))
    }

    proptest! {
        #[test]
        fn divrem_reconstructs(f in arb_poly(10), d in arb_poly(5)) {
            prop_assume!(!d.is_zero());
            // a small leading coefficient makes the division ill-conditioned
            prop_assume!(d.coeffs().last().unwrap().norm() > 0.5);
            let (q, rem) = f.divrem(&d).unwrap();
            let back = &(&q * &d) + &rem;
            let err = (&back - &f).max_coeff();
            let scale = f.max_coeff().max(q.max_coeff() * d.max_coeff()).max(1.0);
            prop_assert!(err <= 1e-12 * scale);
        }

        #[test]
        fn reflect_is_involutive(p in arb_poly(7)) {
            let m = p.degree().unwrap_or(0) + 2;
            let twice = p.reflect(m).unwrap().reflect(m).unwrap();
            prop_assert_eq!(twice, p);
        }
    }
}
