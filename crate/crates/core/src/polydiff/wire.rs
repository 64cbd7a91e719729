//! JSON interchange helpers shared by the exact types.

use std::str::FromStr;

use num_bigint::BigInt;
use num_traits::{ToPrimitive, Zero};
use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::Rational;

/// An integer that serializes as a JSON number when it fits in `i64` and as a
/// decimal string otherwise, so that large coefficients survive round trips.
#[derive(Clone, Debug, PartialEq, Eq)]
pub(crate) struct JsonInt(pub BigInt);

impl Serialize for JsonInt {
    fn serialize<S: Serializer>(&self, ser: S) -> Result<S::Ok, S::Error> {
        match self.0.to_i64() {
            Some(v) => ser.serialize_i64(v),
            None => ser.serialize_str(&self.0.to_string()),
        }
    }
}

impl<'de> Deserialize<'de> for JsonInt {
    fn deserialize<D: Deserializer<'de>>(de: D) -> Result<Self, D::Error> {
        match serde_json::Value::deserialize(de)? {
            serde_json::Value::Number(n) => n
                .as_i64()
                .map(|v| JsonInt(BigInt::from(v)))
                .ok_or_else(|| D::Error::custom(format!("non-integer coefficient {n}"))),
            serde_json::Value::String(s) => BigInt::from_str(&s)
                .map(JsonInt)
                .map_err(|e| D::Error::custom(format!("bad integer {s:?}: {e}"))),
            other => Err(D::Error::custom(format!("expected integer, got {other}"))),
        }
    }
}

pub(crate) fn split(r: &Rational) -> (JsonInt, JsonInt) {
    (JsonInt(r.numer().clone()), JsonInt(r.denom().clone()))
}

pub(crate) fn join(num: JsonInt, den: JsonInt) -> Result<Rational, String> {
    if den.0.is_zero() {
        return Err("zero denominator".into());
    }
    Ok(Rational::new(num.0, den.0))
}
