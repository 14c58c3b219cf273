//! Serde helpers: big integers are serialized as decimal strings so the JSON
//! output stays readable and round-trips exactly.

use num_bigint::BigInt;
use serde::{Deserialize, Deserializer, Serializer};
use std::str::FromStr;

pub mod bigint {
    use super::*;

    pub fn serialize<S: Serializer>(x: &BigInt, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&x.to_string())
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<BigInt, D::Error> {
        let raw = String::deserialize(d)?;
        BigInt::from_str(&raw).map_err(serde::de::Error::custom)
    }
}

pub mod bigint_vec {
    use super::*;

    pub fn serialize<S: Serializer>(xs: &[BigInt], s: S) -> Result<S::Ok, S::Error> {
        s.collect_seq(xs.iter().map(BigInt::to_string))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<BigInt>, D::Error> {
        let raw = Vec::<String>::deserialize(d)?;
        raw.iter()
            .map(|x| BigInt::from_str(x).map_err(serde::de::Error::custom))
            .collect()
    }
}

/// Matrices serialize as row-major nested arrays of decimal strings.
pub mod matrix {
    use super::*;
    use crate::matrix::Mat;
    use serde::ser::SerializeSeq;

    pub fn serialize<S: Serializer>(m: &Mat, s: S) -> Result<S::Ok, S::Error> {
        let mut seq = s.serialize_seq(Some(m.rows()))?;
        for i in 0..m.rows() {
            let row: Vec<String> = (0..m.cols()).map(|j| m[(i, j)].to_string()).collect();
            seq.serialize_element(&row)?;
        }
        seq.end()
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Mat, D::Error> {
        let raw = Vec::<Vec<String>>::deserialize(d)?;
        let rows = raw.len();
        let cols = raw.first().map_or(0, Vec::len);
        if raw.iter().any(|r| r.len() != cols) {
            return Err(serde::de::Error::custom("ragged matrix"));
        }
        let mut parsed = Vec::with_capacity(rows);
        for row in &raw {
            let mut prow = Vec::with_capacity(cols);
            for e in row {
                prow.push(BigInt::from_str(e).map_err(serde::de::Error::custom)?);
            }
            parsed.push(prow);
        }
        Ok(Mat::from_fn(rows, cols, |i, j| parsed[i][j].clone()))
    }
}
