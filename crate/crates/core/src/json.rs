//! Serde helpers shared by the JSON formats.

use num_complex::Complex64;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

/// A complex number written as a bare real, `[re, im]`, or `{"re":…, "im":…}`.
#[derive(Deserialize)]
#[serde(untagged)]
enum ComplexRepr {
    Real(f64),
    Pair([f64; 2]),
    Object { re: f64, #[serde(default)] im: f64 },
}

impl From<ComplexRepr> for Complex64 {
    fn from(r: ComplexRepr) -> Self {
        match r {
            ComplexRepr::Real(x) => Complex64::new(x, 0.0),
            ComplexRepr::Pair([re, im]) => Complex64::new(re, im),
            ComplexRepr::Object { re, im } => Complex64::new(re, im),
        }
    }
}

pub mod complex_vec {
    use super::*;

    pub fn serialize<S: Serializer>(v: &[Complex64], s: S) -> Result<S::Ok, S::Error> {
        let pairs: Vec<[f64; 2]> = v.iter().map(|z| [z.re, z.im]).collect();
        pairs.serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<Complex64>, D::Error> {
        let raw: Vec<ComplexRepr> = Vec::deserialize(d)?;
        Ok(raw.into_iter().map(Complex64::from).collect())
    }
}

pub mod complex {
    use super::*;

    pub fn serialize<S: Serializer>(z: &Complex64, s: S) -> Result<S::Ok, S::Error> {
        [z.re, z.im].serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Complex64, D::Error> {
        Ok(ComplexRepr::deserialize(d)?.into())
    }
}
