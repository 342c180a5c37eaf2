//! Command outcomes and their JSON encoding.

use monodyn::matrix::IntMatrix;
use num_bigint::BigInt;
use num_traits::ToPrimitive;
use serde_json::{json, Map, Value};

/// What a command produced: a JSON report, its plain-text rendering, and
/// whether the verdict is negative.
#[derive(Debug)]
pub struct Report {
    pub json: Value,
    pub text: String,
    pub negative: bool,
}

impl Report {
    /// `fields` must be an object; `kind` is added to it.
    pub fn new(kind: &str, fields: Value, text: impl Into<String>) -> Report {
        let mut obj = match fields {
            Value::Object(m) => m,
            other => {
                let mut m = Map::new();
                m.insert("result".into(), other);
                m
            }
        };
        obj.insert("kind".into(), Value::String(kind.into()));
        Report {
            json: Value::Object(obj),
            text: text.into(),
            negative: false,
        }
    }

    pub fn negative_if(mut self, negative: bool) -> Report {
        self.negative = negative;
        self
    }
}

/// Integers that fit in 64 bits become JSON numbers, larger ones decimal strings.
pub fn int(x: &BigInt) -> Value {
    match x.to_i64() {
        Some(v) => json!(v),
        None => json!(x.to_string()),
    }
}

pub fn ints(xs: &[BigInt]) -> Value {
    Value::Array(xs.iter().map(int).collect())
}

pub fn matrix(m: &IntMatrix) -> Value {
    Value::Array((0..m.rows()).map(|i| ints(m.row(i))).collect())
}

/// `{"name": count}` for the given names and counts, in vertex order.
pub fn named_counts(names: &[String], counts: &[u64]) -> Value {
    let mut m = Map::new();
    for (n, c) in names.iter().zip(counts) {
        m.insert(n.clone(), json!(c));
    }
    Value::Object(m)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn big_entries_become_strings() {
        let big: BigInt = BigInt::from(u64::MAX) * 3;
        assert_eq!(int(&big), json!(big.to_string()));
        assert_eq!(int(&BigInt::from(-4)), json!(-4));
    }

    #[test]
    fn kind_is_added() {
        let r = Report::new("iso", json!(true), "true");
        assert_eq!(r.json, json!({"kind": "iso", "result": true}));
    }
}
