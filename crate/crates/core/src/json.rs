//! JSON encodings for exact scalars.
//!
//! Integers are written as JSON numbers when they fit in `i64` and as decimal
//! strings otherwise; rationals are always strings `"a/b"` (or `"a"`). Readers
//! accept either form.

use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive};
use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use serde_json::Value;

use crate::gaussian::GaussianRational;
use crate::linalg::{ComplexMatrix, IntegerMatrix, RationalMatrix};

pub fn bigint_to_value(x: &BigInt) -> Value {
    match x.to_i64() {
        Some(v) => Value::from(v),
        None => Value::String(x.to_string()),
    }
}

pub fn value_to_bigint(v: &Value) -> Result<BigInt, String> {
    match v {
        Value::Number(n) => {
            if let Some(i) = n.as_i64() {
                Ok(BigInt::from(i))
            } else if let Some(u) = n.as_u64() {
                Ok(BigInt::from(u))
            } else {
                Err(format!("expected an integer, found {n}"))
            }
        }
        Value::String(s) => BigInt::from_str(s.trim()).map_err(|_| format!("invalid integer string {s:?}")),
        other => Err(format!("expected an integer, found {other}")),
    }
}

pub fn rational_to_string(x: &BigRational) -> String {
    if x.denom().is_one() {
        x.numer().to_string()
    } else {
        format!("{}/{}", x.numer(), x.denom())
    }
}

pub fn parse_rational(s: &str) -> Result<BigRational, String> {
    let s = s.trim();
    match s.split_once('/') {
        Some((a, b)) => {
            let num = BigInt::from_str(a.trim()).map_err(|_| format!("invalid rational {s:?}"))?;
            let den = BigInt::from_str(b.trim()).map_err(|_| format!("invalid rational {s:?}"))?;
            if den == BigInt::from(0) {
                return Err(format!("zero denominator in {s:?}"));
            }
            Ok(BigRational::new(num, den))
        }
        None => BigInt::from_str(s).map(BigRational::from_integer).map_err(|_| format!("invalid rational {s:?}")),
    }
}

pub fn value_to_rational(v: &Value) -> Result<BigRational, String> {
    match v {
        Value::String(s) => parse_rational(s),
        other => value_to_bigint(other).map(BigRational::from_integer),
    }
}

pub fn value_to_gaussian(v: &Value) -> Result<GaussianRational, String> {
    match v {
        Value::Object(map) => {
            let re = map.get("re").map(value_to_rational).transpose()?.unwrap_or_default();
            let im = map.get("im").map(value_to_rational).transpose()?.unwrap_or_default();
            Ok(GaussianRational::new(re, im))
        }
        other => value_to_rational(other).map(GaussianRational::from_real),
    }
}

pub fn gaussian_to_value(z: &GaussianRational) -> Value {
    serde_json::json!({ "re": rational_to_string(&z.re), "im": rational_to_string(&z.im) })
}

fn rows_of<'a>(v: &'a Value, what: &str) -> Result<&'a Vec<Value>, String> {
    v.as_array().ok_or_else(|| format!("{what}: expected an array of rows"))
}

/// Parses a row-major integer matrix; `cols` fixes the width for empty row lists.
pub fn value_to_int_matrix(v: &Value, cols: Option<usize>) -> Result<IntegerMatrix, String> {
    let rows = rows_of(v, "integer matrix")?;
    let parsed: Vec<Vec<BigInt>> = rows
        .iter()
        .map(|r| r.as_array().ok_or("matrix row must be an array".to_string())?.iter().map(value_to_bigint).collect())
        .collect::<Result<_, _>>()?;
    let width = match (parsed.first(), cols) {
        (Some(r), _) => r.len(),
        (None, Some(c)) => c,
        (None, None) => 0,
    };
    if parsed.iter().any(|r| r.len() != width) {
        return Err("ragged matrix rows".into());
    }
    Ok(IntegerMatrix::from_rows_with_cols(parsed, width))
}

pub fn value_to_rat_matrix(v: &Value) -> Result<RationalMatrix, String> {
    let rows = rows_of(v, "rational matrix")?;
    let parsed: Vec<Vec<BigRational>> = rows
        .iter()
        .map(|r| r.as_array().ok_or("matrix row must be an array".to_string())?.iter().map(value_to_rational).collect())
        .collect::<Result<_, _>>()?;
    let width = parsed.first().map_or(0, Vec::len);
    if parsed.iter().any(|r| r.len() != width) {
        return Err("ragged matrix rows".into());
    }
    Ok(RationalMatrix::from_rows_with_cols(parsed, width))
}

pub fn int_matrix_to_value(m: &IntegerMatrix) -> Value {
    Value::Array((0..m.rows()).map(|i| Value::Array(m.row(i).iter().map(bigint_to_value).collect())).collect())
}

pub fn int_vectors_to_value(vs: &[Vec<BigInt>]) -> Value {
    Value::Array(vs.iter().map(|v| Value::Array(v.iter().map(bigint_to_value).collect())).collect())
}

pub fn rat_matrix_to_value(m: &RationalMatrix) -> Value {
    Value::Array(
        (0..m.rows())
            .map(|i| Value::Array(m.row(i).iter().map(|x| Value::String(rational_to_string(x))).collect()))
            .collect(),
    )
}

pub fn complex_matrix_to_value(m: &ComplexMatrix) -> Value {
    Value::Array((0..m.rows()).map(|i| Value::Array(m.row(i).iter().map(gaussian_to_value).collect())).collect())
}

/// `#[serde(with = "crate::json::bigint_vec")]`
pub mod bigint_vec {
    use super::*;

    pub fn serialize<S: Serializer>(v: &[BigInt], s: S) -> Result<S::Ok, S::Error> {
        Value::Array(v.iter().map(bigint_to_value).collect()).serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<BigInt>, D::Error> {
        let v = Value::deserialize(d)?;
        let arr = v.as_array().ok_or_else(|| D::Error::custom("expected an array of integers"))?;
        arr.iter().map(|x| value_to_bigint(x).map_err(D::Error::custom)).collect()
    }
}

/// `#[serde(with = "crate::json::bigint_vecs")]`
pub mod bigint_vecs {
    use super::*;

    pub fn serialize<S: Serializer>(v: &[Vec<BigInt>], s: S) -> Result<S::Ok, S::Error> {
        int_vectors_to_value(v).serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<Vec<BigInt>>, D::Error> {
        let v = Value::deserialize(d)?;
        let arr = v.as_array().ok_or_else(|| D::Error::custom("expected an array of integer vectors"))?;
        arr.iter()
            .map(|row| {
                row.as_array()
                    .ok_or_else(|| D::Error::custom("expected an integer vector"))?
                    .iter()
                    .map(|x| value_to_bigint(x).map_err(D::Error::custom))
                    .collect()
            })
            .collect()
    }
}

/// `#[serde(with = "crate::json::rational")]`
pub mod rational {
    use super::*;

    pub fn serialize<S: Serializer>(x: &BigRational, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&rational_to_string(x))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<BigRational, D::Error> {
        let v = Value::deserialize(d)?;
        value_to_rational(&v).map_err(D::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rationals_parse_and_print() {
        let x = parse_rational("-6/4").unwrap();
        assert_eq!(rational_to_string(&x), "-3/2");
        assert_eq!(rational_to_string(&parse_rational("7").unwrap()), "7");
        assert!(parse_rational("1/0").is_err());
        assert!(parse_rational("x").is_err());
    }

    #[test]
    fn big_integers_fall_back_to_strings() {
        let big = BigInt::from(i64::MAX) * 4;
        let v = bigint_to_value(&big);
        assert!(v.is_string());
        assert_eq!(value_to_bigint(&v).unwrap(), big);
        assert_eq!(bigint_to_value(&BigInt::from(-3)), Value::from(-3));
    }

    #[test]
    fn gaussian_entries() {
        let v = serde_json::json!({"re": "1/2", "im": -1});
        let z = value_to_gaussian(&v).unwrap();
        assert_eq!(z, GaussianRational::new(parse_rational("1/2").unwrap(), parse_rational("-1").unwrap()));
    }

    #[test]
    fn empty_matrix_keeps_width() {
        let m = value_to_int_matrix(&serde_json::json!([]), Some(3)).unwrap();
        assert_eq!((m.rows(), m.cols()), (0, 3));
        assert!(value_to_int_matrix(&serde_json::json!([[1, 2], [3]]), None).is_err());
    }
}
