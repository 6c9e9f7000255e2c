use std::f64::consts::TAU;
use std::fmt;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::Complex;

/// A point on the unit circle. Construction rescales inputs within `1e-9` of
/// the circle to modulus exactly 1 and rejects anything farther out.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct UnimodularPoint {
    value: Complex,
}

impl UnimodularPoint {
    /// `e^{2 pi i t}`.
    pub fn from_turns(t: f64) -> Self {
        UnimodularPoint {
            value: Complex::from_polar(1.0, TAU * t),
        }
    }

    pub fn new(value: Complex) -> Result<Self> {
        let modulus = value.norm();
        if !modulus.is_finite() || (modulus - 1.0).abs() > 1e-9 {
            return Err(Error::NotUnimodular { modulus });
        }
        Ok(UnimodularPoint {
            value: value / modulus,
        })
    }

    pub fn one() -> Self {
        UnimodularPoint {
            value: Complex::new(1.0, 0.0),
        }
    }

    pub fn value(&self) -> Complex {
        self.value
    }

    pub fn conj(&self) -> Complex {
        self.value.conj()
    }

    /// `value^n` for signed n (negative powers conjugate).
    pub fn powi(&self, n: i32) -> Complex {
        if n >= 0 {
            self.value.powu(n as u32)
        } else {
            self.value.conj().powu((-n) as u32)
        }
    }

    pub fn arg(&self) -> f64 {
        self.value.arg()
    }
}

impl fmt::Display for UnimodularPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:.12}{:+.12}i", self.value.re, self.value.im)
    }
}

#[derive(Deserialize)]
#[serde(untagged)]
enum PointRepr {
    Turns { angle_turns: f64 },
    Cartesian { re: f64, im: f64 },
}

impl Serialize for UnimodularPoint {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        use serde::ser::SerializeStruct;
        let mut s = serializer.serialize_struct("UnimodularPoint", 2)?;
        s.serialize_field("re", &self.value.re)?;
        s.serialize_field("im", &self.value.im)?;
        s.end()
    }
}

impl<'de> Deserialize<'de> for UnimodularPoint {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        match PointRepr::deserialize(deserializer)? {
            PointRepr::Turns { angle_turns } => Ok(UnimodularPoint::from_turns(angle_turns)),
            PointRepr::Cartesian { re, im } => UnimodularPoint::new(Complex::new(re, im))
                .map_err(|e| serde::de::Error::custom(e.to_string())),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn normalizes_and_rejects() {
        let p = UnimodularPoint::new(Complex::new(1.0 + 5e-10, 0.0)).unwrap();
        assert_eq!(p.value(), Complex::new(1.0, 0.0));
        assert!(UnimodularPoint::new(Complex::new(1.1, 0.0)).is_err());
    }

    #[test]
    fn json_forms() {
        let a: UnimodularPoint = serde_json::from_str(r#"{"angle_turns":0.25}"#).unwrap();
        assert!((a.value() - Complex::new(0.0, 1.0)).norm() < 1e-15);
        let b: UnimodularPoint = serde_json::from_str(r#"{"re":0.0,"im":-1.0}"#).unwrap();
        assert!((b.value() - Complex::new(0.0, -1.0)).norm() < 1e-15);
    }
}
