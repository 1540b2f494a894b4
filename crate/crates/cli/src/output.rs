use std::io::Write;

use anyhow::Result;
use clap::ValueEnum;
use serde::Serialize;
use serde_json::Value;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Tsv,
}

impl std::str::FromStr for Format {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        <Format as ValueEnum>::from_str(s, true)
    }
}

fn tsv_field(v: &Value) -> String {
    match v {
        Value::String(s) => s.replace(['\t', '\n'], " "),
        Value::Null => String::new(),
        other => other.to_string(),
    }
}

/// One line per record: a JSON object, or its top-level values joined by
/// tabs with nested values written as compact JSON.
pub fn render<T: Serialize>(record: &T, format: Format) -> Result<String> {
    let value = serde_json::to_value(record)?;
    Ok(match format {
        Format::Json => serde_json::to_string(&value)?,
        Format::Tsv => match &value {
            Value::Object(map) => map.values().map(tsv_field).collect::<Vec<_>>().join("\t"),
            other => tsv_field(other),
        },
    })
}

pub fn emit<T: Serialize>(out: &mut impl Write, record: &T, format: Format) -> Result<()> {
    writeln!(out, "{}", render(record, format)?)?;
    Ok(())
}

/// Rounds for display so that hand-checkable values print as written.
pub fn round(x: f64, digits: u32) -> f64 {
    let scale = 10f64.powi(digits as i32);
    (x * scale).round() / scale
}

#[cfg(test)]
mod tests {
    use super::*;
    use serde_json::json;

    #[test]
    fn json_and_tsv() {
        let v = json!({"label": "Positive", "score": 0.5, "trace": [1, 2]});
        assert_eq!(render(&v, Format::Json).unwrap(), r#"{"label":"Positive","score":0.5,"trace":[1,2]}"#);
        assert_eq!(render(&v, Format::Tsv).unwrap(), "Positive\t0.5\t[1,2]");
        assert_eq!(render(&json!({"a": "x\ty", "b": null}), Format::Tsv).unwrap(), "x y\t");
    }

    #[test]
    fn rounding() {
        assert_eq!(round(1.0 / 7.0, 3), 0.143);
        assert_eq!(round(3.0 / 7.0, 3), 0.429);
    }
}
