//! Serde helpers: integers are written as JSON numbers when they fit in `i64`, otherwise as
//! decimal strings.

use num_bigint::BigInt;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

#[derive(Serialize, Deserialize)]
#[serde(untagged)]
enum Num {
    Small(i64),
    Big(String),
}

fn to_num(x: &BigInt) -> Num {
    i64::try_from(x).map(Num::Small).unwrap_or_else(|_| Num::Big(x.to_string()))
}

fn from_num<E: serde::de::Error>(n: Num) -> Result<BigInt, E> {
    match n {
        Num::Small(v) => Ok(BigInt::from(v)),
        Num::Big(s) => s.parse().map_err(|_| E::custom(format!("bad integer {s:?}"))),
    }
}

pub mod bigint_vec {
    use super::*;

    pub fn serialize<S: Serializer>(x: &[BigInt], s: S) -> Result<S::Ok, S::Error> {
        x.iter().map(to_num).collect::<Vec<_>>().serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<BigInt>, D::Error> {
        Vec::<Num>::deserialize(d)?.into_iter().map(from_num).collect()
    }
}

pub mod bigint_matrix {
    use super::*;

    pub fn serialize<S: Serializer>(x: &[Vec<BigInt>], s: S) -> Result<S::Ok, S::Error> {
        x.iter().map(|r| r.iter().map(to_num).collect::<Vec<_>>()).collect::<Vec<_>>().serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<Vec<BigInt>>, D::Error> {
        Vec::<Vec<Num>>::deserialize(d)?
            .into_iter()
            .map(|r| r.into_iter().map(from_num).collect())
            .collect()
    }
}

