//! Exact rationals and their JSON form `{"num": .., "den": ..}`.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

pub type Q = BigRational;

pub fn q(num: i64, den: i64) -> Q {
    Q::new(BigInt::from(num), BigInt::from(den))
}

pub fn qi(n: impl Into<BigInt>) -> Q {
    Q::from_integer(n.into())
}

/// Ratio of two counts.
pub fn ratio(num: u128, den: u128) -> Q {
    Q::new(BigInt::from(num), BigInt::from(den))
}

/// Parses `"3"`, `"-2/7"` or a finite decimal such as `"0.25"`.
pub fn parse_q(s: &str) -> Result<Q> {
    let s = s.trim();
    let bad = || Error::Parse(format!("not a rational: {s:?}"));
    if let Some((n, d)) = s.split_once('/') {
        let n: BigInt = n.trim().parse().map_err(|_| bad())?;
        let d: BigInt = d.trim().parse().map_err(|_| bad())?;
        if d.is_zero() {
            return Err(Error::Parse(format!("zero denominator in {s:?}")));
        }
        return Ok(Q::new(n, d));
    }
    if let Some((int, frac)) = s.split_once('.') {
        if frac.is_empty() || !frac.bytes().all(|b| b.is_ascii_digit()) {
            return Err(bad());
        }
        let neg = int.starts_with('-');
        let digits = format!("{}{}", int.trim_start_matches(['-', '+']), frac);
        let mag: BigInt = digits.parse().map_err(|_| bad())?;
        let den = num_traits::pow(BigInt::from(10), frac.len());
        let v = Q::new(mag, den);
        return Ok(if neg { -v } else { v });
    }
    let n: BigInt = s.parse().map_err(|_| bad())?;
    Ok(Q::from_integer(n))
}

pub fn to_f64(x: &Q) -> f64 {
    x.to_f64().unwrap_or(f64::NAN)
}

/// `num/den` rendering used by CSV output.
pub fn render(x: &Q) -> String {
    format!("{}/{}", x.numer(), x.denom())
}

/// Largest rational with denominator `den` that is `<= x`.
pub fn floor_to(x: &Q, den: u64) -> Q {
    let d = BigInt::from(den);
    let scaled = (x * Q::from_integer(d.clone())).floor();
    Q::new(scaled.to_integer(), d)
}

/// Smallest rational with denominator `den` that is `>= x`.
pub fn ceil_to(x: &Q, den: u64) -> Q {
    let d = BigInt::from(den);
    let scaled = (x * Q::from_integer(d.clone())).ceil();
    Q::new(scaled.to_integer(), d)
}

pub fn is_in_unit_interval(x: &Q) -> bool {
    !x.is_negative() && *x <= Q::one()
}

fn int_value(n: &BigInt) -> serde_json::Value {
    match n.to_i64() {
        Some(v) => serde_json::Value::from(v),
        None => serde_json::Value::from(n.to_string()),
    }
}

fn value_int(v: &serde_json::Value) -> Option<BigInt> {
    match v {
        serde_json::Value::Number(n) => n.as_i64().map(BigInt::from),
        serde_json::Value::String(s) => s.parse().ok(),
        _ => None,
    }
}

pub fn to_json(x: &Q) -> serde_json::Value {
    serde_json::json!({ "num": int_value(x.numer()), "den": int_value(x.denom()) })
}

pub fn from_json(v: &serde_json::Value) -> Option<Q> {
    match v {
        serde_json::Value::Object(m) => {
            let n = value_int(m.get("num")?)?;
            let d = value_int(m.get("den")?)?;
            (!d.is_zero()).then(|| Q::new(n, d))
        }
        serde_json::Value::String(s) => parse_q(s).ok(),
        serde_json::Value::Number(n) => n.as_i64().map(qi),
        _ => None,
    }
}

/// `#[serde(with = "crate::rational::json")]` for a single rational.
pub mod json {
    use super::*;

    pub fn serialize<S: Serializer>(x: &Q, s: S) -> std::result::Result<S::Ok, S::Error> {
        to_json(x).serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<Q, D::Error> {
        let v = serde_json::Value::deserialize(d)?;
        from_json(&v).ok_or_else(|| D::Error::custom("expected {\"num\":..,\"den\":..}"))
    }
}

pub mod json_opt {
    use super::*;

    pub fn serialize<S: Serializer>(x: &Option<Q>, s: S) -> std::result::Result<S::Ok, S::Error> {
        x.as_ref().map(to_json).serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<Option<Q>, D::Error> {
        let v = Option::<serde_json::Value>::deserialize(d)?;
        match v {
            None => Ok(None),
            Some(v) => from_json(&v)
                .map(Some)
                .ok_or_else(|| D::Error::custom("expected rational")),
        }
    }
}

pub mod json_vec {
    use super::*;

    pub fn serialize<S: Serializer>(xs: &[Q], s: S) -> std::result::Result<S::Ok, S::Error> {
        xs.iter().map(to_json).collect::<Vec<_>>().serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<Vec<Q>, D::Error> {
        let vs = Vec::<serde_json::Value>::deserialize(d)?;
        vs.iter()
            .map(|v| from_json(v).ok_or_else(|| D::Error::custom("expected rational")))
            .collect()
    }
}

/// Maps keyed by an index, serialized as a JSON object with string keys.
pub mod json_map {
    use super::*;
    use std::collections::BTreeMap;

    pub fn serialize<S: Serializer>(
        m: &BTreeMap<usize, Q>,
        s: S,
    ) -> std::result::Result<S::Ok, S::Error> {
        m.iter()
            .map(|(k, v)| (k.to_string(), to_json(v)))
            .collect::<BTreeMap<_, _>>()
            .serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(
        d: D,
    ) -> std::result::Result<BTreeMap<usize, Q>, D::Error> {
        let raw = BTreeMap::<String, serde_json::Value>::deserialize(d)?;
        raw.iter()
            .map(|(k, v)| {
                let k = k.parse().map_err(D::Error::custom)?;
                let v = from_json(v).ok_or_else(|| D::Error::custom("expected rational"))?;
                Ok((k, v))
            })
            .collect()
    }
}
