//! Canonical JSON form of polynomials.
//!
//! `{"vars": ["x1", ...], "terms": [{"coeff": "<decimal>", "exps": [..]}, ..]}`
//!
//! Terms are emitted in ascending lexicographic order of the exponent
//! vector, coefficients as decimal strings (arbitrary precision), and no
//! zero coefficients appear. Loading validates lengths and nonzero
//! coefficients, so serialize-then-parse reproduces an equal value
//! bit-exactly.

use std::str::FromStr;
use std::sync::Arc;

use num_bigint::BigInt;
use num_traits::Zero;
use serde_json::{json, Map, Value};

use crate::error::{Error, Result};

use super::{LaurentPoly, VarTable};

impl LaurentPoly {
    pub fn to_json(&self) -> Value {
        let terms: Vec<Value> = self
            .terms()
            .map(|(e, c)| {
                let mut obj = Map::new();
                obj.insert("coeff".into(), Value::String(c.to_string()));
                obj.insert(
                    "exps".into(),
                    Value::Array(e.iter().map(|&x| json!(x)).collect()),
                );
                Value::Object(obj)
            })
            .collect();
        json!({
            "vars": self.table().names(),
            "terms": terms,
        })
    }

    pub fn from_json(value: &Value) -> Result<LaurentPoly> {
        let obj = value
            .as_object()
            .ok_or_else(|| Error::Usage("polynomial JSON must be an object".into()))?;
        let vars = obj
            .get("vars")
            .and_then(Value::as_array)
            .ok_or_else(|| Error::Usage("polynomial JSON needs a `vars` array".into()))?;
        let names: Vec<String> = vars
            .iter()
            .map(|v| {
                v.as_str()
                    .map(str::to_string)
                    .ok_or_else(|| Error::Usage("variable names must be strings".into()))
            })
            .collect::<Result<_>>()?;
        let table = VarTable::new(names)?;
        Self::from_json_with_table(value, &table)
    }

    /// Parse the `terms` of a polynomial JSON against a known table (used
    /// when several polynomials must share one table instance).
    pub fn from_json_with_table(value: &Value, table: &Arc<VarTable>) -> Result<LaurentPoly> {
        let obj = value
            .as_object()
            .ok_or_else(|| Error::Usage("polynomial JSON must be an object".into()))?;
        if let Some(vars) = obj.get("vars").and_then(Value::as_array) {
            let names: Vec<&str> = vars.iter().filter_map(Value::as_str).collect();
            if names.len() != table.len()
                || names
                    .iter()
                    .zip(table.names().iter())
                    .any(|(a, b)| a != b)
            {
                return Err(Error::VarTableMismatch);
            }
        }
        let terms = obj
            .get("terms")
            .and_then(Value::as_array)
            .ok_or_else(|| Error::Usage("polynomial JSON needs a `terms` array".into()))?;
        let mut parsed = Vec::with_capacity(terms.len());
        for term in terms {
            let term = term
                .as_object()
                .ok_or_else(|| Error::Usage("each term must be an object".into()))?;
            let coeff_str = term
                .get("coeff")
                .and_then(Value::as_str)
                .ok_or_else(|| Error::Usage("term `coeff` must be a decimal string".into()))?;
            let coeff = BigInt::from_str(coeff_str)
                .map_err(|_| Error::Usage(format!("bad coefficient `{coeff_str}`")))?;
            if coeff.is_zero() {
                return Err(Error::Usage("zero coefficient in polynomial JSON".into()));
            }
            let exps = term
                .get("exps")
                .and_then(Value::as_array)
                .ok_or_else(|| Error::Usage("term `exps` must be an array".into()))?;
            if exps.len() != table.len() {
                return Err(Error::Usage(format!(
                    "exponent vector of length {} does not match {} variables",
                    exps.len(),
                    table.len()
                )));
            }
            let exps: Vec<i64> = exps
                .iter()
                .map(|e| {
                    e.as_i64()
                        .ok_or_else(|| Error::Usage("exponents must be integers".into()))
                })
                .collect::<Result<_>>()?;
            parsed.push((exps, coeff));
        }
        LaurentPoly::from_terms(table, parsed)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn round_trip_is_bit_exact() {
        let t = VarTable::new(["x", "y"]).unwrap();
        let p = LaurentPoly::from_terms(
            &t,
            [
                (vec![-1, 2], BigInt::from(-7)),
                (vec![0, 0], BigInt::from(123456789012345678901234567890i128)),
            ],
        )
        .unwrap();
        let j = p.to_json();
        let q = LaurentPoly::from_json(&j).unwrap();
        assert_eq!(p, q);
        assert_eq!(serde_json::to_string(&j).unwrap(), serde_json::to_string(&q.to_json()).unwrap());
    }

    #[test]
    fn rejects_zero_coefficients_and_bad_lengths() {
        let bad_zero = json!({"vars": ["x"], "terms": [{"coeff": "0", "exps": [1]}]});
        assert!(LaurentPoly::from_json(&bad_zero).is_err());
        let bad_len = json!({"vars": ["x"], "terms": [{"coeff": "1", "exps": [1, 2]}]});
        assert!(LaurentPoly::from_json(&bad_len).is_err());
    }

    #[test]
    fn terms_are_sorted_lexicographically() {
        let t = VarTable::new(["x", "y"]).unwrap();
        let p = LaurentPoly::from_terms(
            &t,
            [
                (vec![1, 0], BigInt::from(1)),
                (vec![-1, 3], BigInt::from(2)),
                (vec![0, 0], BigInt::from(3)),
            ],
        )
        .unwrap();
        let j = p.to_json();
        let exps: Vec<Vec<i64>> = j["terms"]
            .as_array()
            .unwrap()
            .iter()
            .map(|t| {
                t["exps"]
                    .as_array()
                    .unwrap()
                    .iter()
                    .map(|e| e.as_i64().unwrap())
                    .collect()
            })
            .collect();
        let mut sorted = exps.clone();
        sorted.sort();
        assert_eq!(exps, sorted);
    }
}
