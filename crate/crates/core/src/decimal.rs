//! Serde adapters that write integers as exact decimal strings.

use std::str::FromStr;

use serde::{de, Deserialize, Deserializer, Serializer};

use crate::arith::Integer;

pub fn serialize<S: Serializer>(v: &Integer, s: S) -> Result<S::Ok, S::Error> {
    s.serialize_str(&v.to_str_radix(10))
}

pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Integer, D::Error> {
    let s = String::deserialize(d)?;
    Integer::from_str(&s).map_err(de::Error::custom)
}

pub mod option {
    use super::*;

    pub fn serialize<S: Serializer>(v: &Option<Integer>, s: S) -> Result<S::Ok, S::Error> {
        match v {
            Some(v) => s.serialize_some(&v.to_str_radix(10)),
            None => s.serialize_none(),
        }
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Option<Integer>, D::Error> {
        Option::<String>::deserialize(d)?
            .map(|s| Integer::from_str(&s).map_err(de::Error::custom))
            .transpose()
    }
}
