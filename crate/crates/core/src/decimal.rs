//! Serde adapters writing naturals as decimal strings.

use num_bigint::BigUint;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::filters::BaseIndex;

fn parse<E: serde::de::Error>(s: &str) -> Result<BigUint, E> {
    s.parse().map_err(|_| E::custom(format!("`{s}` is not a decimal natural")))
}

/// `Vec<(BaseIndex, Option<BigUint>)>`
pub mod indexed_points {
    use super::*;

    pub fn serialize<S: Serializer>(points: &[(BaseIndex, Option<BigUint>)], s: S) -> Result<S::Ok, S::Error> {
        let text: Vec<(&BaseIndex, Option<String>)> =
            points.iter().map(|(i, p)| (i, p.as_ref().map(ToString::to_string))).collect();
        text.serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<(BaseIndex, Option<BigUint>)>, D::Error> {
        let text: Vec<(BaseIndex, Option<String>)> = Vec::deserialize(d)?;
        text.into_iter()
            .map(|(i, p)| Ok((i, p.as_deref().map(parse).transpose()?)))
            .collect()
    }
}

/// `Option<(BigUint, BigUint)>`
pub mod optional_pair {
    use super::*;

    pub fn serialize<S: Serializer>(point: &Option<(BigUint, BigUint)>, s: S) -> Result<S::Ok, S::Error> {
        point.as_ref().map(|(a, b)| (a.to_string(), b.to_string())).serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Option<(BigUint, BigUint)>, D::Error> {
        let text: Option<(String, String)> = Option::deserialize(d)?;
        text.map(|(a, b)| Ok((parse::<D::Error>(&a)?, parse(&b)?))).transpose()
    }
}
