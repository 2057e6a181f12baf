//! JSON formats for band systems and solutions.
//!
//! System document: `{"n": …, "w": …, "diagonals": {"-1": […], "0": […],
//! "1": […]}, "rhs": […]}` where the diagonal keys cover exactly the offsets
//! `-w..=w` and entries are integers or `"p/q"` strings. Solution document:
//! `{"solution": […], "det": "p/q", "substituted_pivots": […]}` with pivots
//! as 1-based row numbers.

use std::str::FromStr;

use num_bigint::BigInt;
use serde_json::{json, Map, Value};
use thiserror::Error;

use super::{build_system, BandError, BandSystem, StorageKind};
use crate::scalar::{rational_checked, Rational, ScalarError};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ParseError {
    #[error("invalid JSON: {0}")]
    Json(String),
    #[error("missing field {0:?}")]
    MissingField(&'static str),
    #[error("field {field:?}: expected {expected}")]
    WrongType {
        field: String,
        expected: &'static str,
    },
    #[error("diagonal keys must cover exactly -w..w: {0}")]
    WrongKeys(String),
    #[error("entry {text:?} is not a rational number")]
    BadNumber { text: String },
    #[error("entry {text:?} has a zero denominator")]
    ZeroDenominator { text: String },
    #[error("entry {text:?} is not a finite number")]
    NotFinite { text: String },
    #[error(transparent)]
    Band(#[from] BandError),
}

fn root_object(text: &str) -> Result<Map<String, Value>, ParseError> {
    let value: Value = serde_json::from_str(text).map_err(|e| ParseError::Json(e.to_string()))?;
    match value {
        Value::Object(map) => Ok(map),
        _ => Err(ParseError::WrongType {
            field: "<root>".into(),
            expected: "object",
        }),
    }
}

fn get_usize(map: &Map<String, Value>, field: &'static str) -> Result<usize, ParseError> {
    let v = map.get(field).ok_or(ParseError::MissingField(field))?;
    v.as_u64()
        .map(|u| u as usize)
        .ok_or_else(|| ParseError::WrongType {
            field: field.into(),
            expected: "nonnegative integer",
        })
}

fn get_array<'a>(
    map: &'a Map<String, Value>,
    field: &'static str,
) -> Result<&'a Vec<Value>, ParseError> {
    let v = map.get(field).ok_or(ParseError::MissingField(field))?;
    v.as_array().ok_or_else(|| ParseError::WrongType {
        field: field.into(),
        expected: "array",
    })
}

fn parse_rational_text(text: &str) -> Result<Rational, ParseError> {
    let bad = || ParseError::BadNumber { text: text.into() };
    match text.split_once('/') {
        None => {
            let n = BigInt::from_str(text.trim()).map_err(|_| bad())?;
            Ok(Rational::from_integer(n))
        }
        Some((num, den)) => {
            let n = BigInt::from_str(num.trim()).map_err(|_| bad())?;
            let d = BigInt::from_str(den.trim()).map_err(|_| bad())?;
            rational_checked(n, d).map_err(|e| match e {
                ScalarError::ZeroDenominator => ParseError::ZeroDenominator { text: text.into() },
                _ => bad(),
            })
        }
    }
}

fn parse_rational_entry(value: &Value) -> Result<Rational, ParseError> {
    match value {
        Value::Number(n) => {
            if let Some(i) = n.as_i64() {
                Ok(Rational::from_integer(i.into()))
            } else if let Some(u) = n.as_u64() {
                Ok(Rational::from_integer(u.into()))
            } else {
                // Fractions must be spelled as "p/q" strings on the exact side.
                Err(ParseError::BadNumber {
                    text: n.to_string(),
                })
            }
        }
        Value::String(s) => parse_rational_text(s),
        other => Err(ParseError::BadNumber {
            text: other.to_string(),
        }),
    }
}

fn parse_float_entry(value: &Value) -> Result<f64, ParseError> {
    let v = match value {
        Value::Number(n) => n.as_f64().ok_or_else(|| ParseError::BadNumber {
            text: n.to_string(),
        })?,
        Value::String(s) => match s.split_once('/') {
            None => f64::from_str(s.trim()).map_err(|_| ParseError::BadNumber { text: s.clone() })?,
            Some((num, den)) => {
                let n =
                    f64::from_str(num.trim()).map_err(|_| ParseError::BadNumber { text: s.clone() })?;
                let d =
                    f64::from_str(den.trim()).map_err(|_| ParseError::BadNumber { text: s.clone() })?;
                if d == 0.0 {
                    return Err(ParseError::ZeroDenominator { text: s.clone() });
                }
                n / d
            }
        },
        other => {
            return Err(ParseError::BadNumber {
                text: other.to_string(),
            })
        }
    };
    if !v.is_finite() {
        return Err(ParseError::NotFinite {
            text: value.to_string(),
        });
    }
    Ok(v)
}

fn parse_system_with<T>(
    text: &str,
    storage: StorageKind,
    parse_entry: impl Fn(&Value) -> Result<T, ParseError>,
) -> Result<BandSystem<T>, ParseError> {
    let map = root_object(text)?;
    let n = get_usize(&map, "n")?;
    let w = get_usize(&map, "w")?;
    if !(1..=3).contains(&w) {
        return Err(BandError::Bandwidth { w }.into());
    }
    let diag_obj = map
        .get("diagonals")
        .ok_or(ParseError::MissingField("diagonals"))?
        .as_object()
        .ok_or_else(|| ParseError::WrongType {
            field: "diagonals".into(),
            expected: "object",
        })?;

    let expected_keys: Vec<String> = (-(w as isize)..=w as isize).map(|o| o.to_string()).collect();
    for key in diag_obj.keys() {
        if !expected_keys.contains(key) {
            return Err(ParseError::WrongKeys(format!(
                "unexpected key {key:?} for w = {w}"
            )));
        }
    }

    let mut diagonals = Vec::with_capacity(2 * w + 1);
    for key in &expected_keys {
        let arr = diag_obj
            .get(key)
            .ok_or_else(|| ParseError::WrongKeys(format!("missing key {key:?} for w = {w}")))?
            .as_array()
            .ok_or_else(|| ParseError::WrongType {
                field: format!("diagonals.{key}"),
                expected: "array",
            })?;
        diagonals.push(arr.iter().map(&parse_entry).collect::<Result<Vec<_>, _>>()?);
    }

    let rhs = get_array(&map, "rhs")?
        .iter()
        .map(&parse_entry)
        .collect::<Result<Vec<_>, _>>()?;

    Ok(build_system(n, w, diagonals, rhs, storage)?)
}

/// Parses a system document with exact rational entries.
pub fn parse_system(text: &str, storage: StorageKind) -> Result<BandSystem<Rational>, ParseError> {
    parse_system_with(text, storage, parse_rational_entry)
}

/// Parses a system document with 64-bit float entries.
pub fn parse_system_f64(text: &str, storage: StorageKind) -> Result<BandSystem<f64>, ParseError> {
    parse_system_with(text, storage, parse_float_entry)
}

/// Serializes an exact system back to the document format, entries as strings.
pub fn write_system(sys: &BandSystem<Rational>) -> String {
    let w = sys.w() as isize;
    let mut diagonals = Map::new();
    for offset in -w..=w {
        let entries: Vec<Value> = sys
            .diagonal(offset)
            .iter()
            .map(|r| Value::String(r.to_string()))
            .collect();
        diagonals.insert(offset.to_string(), Value::Array(entries));
    }
    let rhs: Vec<Value> = sys
        .rhs_vec()
        .iter()
        .map(|r| Value::String(r.to_string()))
        .collect();
    let doc = json!({
        "n": sys.n(),
        "w": sys.w(),
        "diagonals": diagonals,
        "rhs": rhs,
    });
    format!("{:#}\n", doc)
}

/// Exact solution document: solution vector, determinant, and the 1-based
/// rows where the elimination substituted the indeterminate for a zero pivot.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SolutionDocument {
    pub solution: Vec<Rational>,
    pub det: Rational,
    pub substituted_pivots: Vec<usize>,
}

pub fn write_solution(doc: &SolutionDocument) -> String {
    let solution: Vec<Value> = doc
        .solution
        .iter()
        .map(|r| Value::String(r.to_string()))
        .collect();
    let value = json!({
        "solution": solution,
        "det": doc.det.to_string(),
        "substituted_pivots": doc.substituted_pivots,
    });
    format!("{:#}\n", value)
}

/// Float solution document: same shape as the exact one, with entries as
/// JSON numbers. Non-finite values (an overflowed determinant) fall back to
/// strings, keeping the document valid JSON.
pub fn write_float_solution(solution: &[f64], det: f64) -> String {
    let number = |v: f64| match serde_json::Number::from_f64(v) {
        Some(n) => Value::Number(n),
        None => Value::String(v.to_string()),
    };
    let value = json!({
        "solution": solution.iter().map(|&v| number(v)).collect::<Vec<_>>(),
        "det": number(det),
        "substituted_pivots": Vec::<usize>::new(),
    });
    format!("{:#}\n", value)
}

pub fn parse_solution(text: &str) -> Result<SolutionDocument, ParseError> {
    let map = root_object(text)?;
    let solution = get_array(&map, "solution")?
        .iter()
        .map(parse_rational_entry)
        .collect::<Result<Vec<_>, _>>()?;
    let det = parse_rational_entry(
        map.get("det").ok_or(ParseError::MissingField("det"))?,
    )?;
    let substituted_pivots = get_array(&map, "substituted_pivots")?
        .iter()
        .map(|v| {
            v.as_u64().map(|u| u as usize).ok_or(ParseError::WrongType {
                field: "substituted_pivots".into(),
                expected: "nonnegative integer",
            })
        })
        .collect::<Result<Vec<_>, _>>()?;
    Ok(SolutionDocument {
        solution,
        det,
        substituted_pivots,
    })
}
