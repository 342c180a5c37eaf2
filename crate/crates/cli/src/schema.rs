//! The JSON schema every report validates against.

use serde_json::Value;

use crate::report::Report;

pub const SCHEMA: &str = include_str!("../schema/report.schema.json");

pub fn report() -> Report {
    let json: Value = serde_json::from_str(SCHEMA).expect("embedded schema is valid JSON");
    Report {
        text: SCHEMA.to_string(),
        json,
        negative: false,
    }
}
