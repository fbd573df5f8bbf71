//! Serde adapters that put `Complex64` on the wire as `{"re": .., "im": ..}`.
//!
//! The derived representation from `num-complex` is a two-element array,
//! which is easy to misread in reports; every serialized complex number in
//! this crate goes through these adapters instead. Annotate fields with
//! `#[serde(with = "crate::serde_complex")]` (scalars),
//! `crate::serde_complex::vec` (vectors) or `crate::serde_complex::opt_vec`.

use num_complex::Complex64;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

#[derive(Serialize, Deserialize)]
struct Wire {
    re: f64,
    im: f64,
}

impl From<Complex64> for Wire {
    fn from(z: Complex64) -> Self {
        Wire { re: z.re, im: z.im }
    }
}

impl From<Wire> for Complex64 {
    fn from(w: Wire) -> Self {
        Complex64::new(w.re, w.im)
    }
}

pub fn serialize<S: Serializer>(z: &Complex64, s: S) -> Result<S::Ok, S::Error> {
    Wire::from(*z).serialize(s)
}

pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Complex64, D::Error> {
    Wire::deserialize(d).map(Complex64::from)
}

pub mod vec {
    use super::*;

    pub fn serialize<S: Serializer>(v: &[Complex64], s: S) -> Result<S::Ok, S::Error> {
        s.collect_seq(v.iter().copied().map(Wire::from))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<Complex64>, D::Error> {
        let wires = Vec::<Wire>::deserialize(d)?;
        Ok(wires.into_iter().map(Complex64::from).collect())
    }
}

pub mod opt {
    use super::*;

    pub fn serialize<S: Serializer>(v: &Option<Complex64>, s: S) -> Result<S::Ok, S::Error> {
        v.map(Wire::from).serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Option<Complex64>, D::Error> {
        Ok(Option::<Wire>::deserialize(d)?.map(Complex64::from))
    }
}

pub mod opt_vec {
    use super::*;

    pub fn serialize<S: Serializer>(v: &Option<Vec<Complex64>>, s: S) -> Result<S::Ok, S::Error> {
        match v {
            Some(v) => s.collect_seq(v.iter().copied().map(Wire::from)),
            None => s.serialize_none(),
        }
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(
        d: D,
    ) -> Result<Option<Vec<Complex64>>, D::Error> {
        let wires = Option::<Vec<Wire>>::deserialize(d)?;
        Ok(wires.map(|v| v.into_iter().map(Complex64::from).collect()))
    }
}
