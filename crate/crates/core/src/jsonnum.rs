//! Serde adapters writing big integers as plain JSON numbers.

use num_bigint::BigInt;
use serde::de::Error;
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use serde_json::Number;

fn to_number(n: &BigInt) -> Number {
    n.to_string().parse().expect("integers are valid JSON numbers")
}

fn from_number<E: Error>(n: &Number) -> Result<BigInt, E> {
    n.to_string().parse().map_err(|_| E::custom(format!("not an integer: {n}")))
}

pub fn serialize<S: Serializer>(n: &BigInt, s: S) -> Result<S::Ok, S::Error> {
    to_number(n).serialize(s)
}

pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<BigInt, D::Error> {
    from_number(&Number::deserialize(d)?)
}

pub mod vec {
    use super::*;

    pub fn serialize<S: Serializer>(v: &[BigInt], s: S) -> Result<S::Ok, S::Error> {
        v.iter().map(to_number).collect::<Vec<_>>().serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<BigInt>, D::Error> {
        Vec::<Number>::deserialize(d)?.iter().map(from_number).collect()
    }
}
