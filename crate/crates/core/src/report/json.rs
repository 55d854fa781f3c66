use std::fmt::Write as _;

use serde_json::{json, Map, Value};

/// Document emitted by every CLI command.
#[derive(Clone, Debug)]
pub struct RunReport {
    pub command: String,
    pub inputs: Value,
    pub results: Value,
    pub version: String,
    pub elapsed_ms: u64,
}

impl RunReport {
    pub fn new(command: impl Into<String>, inputs: Value, results: Value) -> Self {
        RunReport {
            command: command.into(),
            inputs,
            results,
            version: env!("CARGO_PKG_VERSION").to_string(),
            elapsed_ms: 0,
        }
    }

    pub fn to_value(&self) -> Value {
        json!({
            "command": self.command,
            "inputs": self.inputs,
            "results": self.results,
            "version": self.version,
            "elapsed_ms": self.elapsed_ms,
        })
    }

    pub fn to_json_string(&self) -> String {
        to_json_string(&self.to_value())
    }
}

/// Pretty JSON with sorted keys and every float written with 17
/// significant digits, so that output bytes depend only on the values.
pub fn to_json_string(value: &Value) -> String {
    let mut out = String::new();
    write_value(&mut out, value, 0);
    out.push('\n');
    out
}

fn write_value(out: &mut String, value: &Value, indent: usize) {
    match value {
        Value::Null => out.push_str("null"),
        Value::Bool(b) => out.push_str(if *b { "true" } else { "false" }),
        Value::Number(n) => {
            if n.is_i64() || n.is_u64() {
                let _ = write!(out, "{n}");
            } else {
                let _ = write!(out, "{:.16e}", n.as_f64().unwrap_or(f64::NAN));
            }
        }
        Value::String(s) => out.push_str(&Value::String(s.clone()).to_string()),
        Value::Array(items) => {
            if items.is_empty() {
                out.push_str("[]");
                return;
            }
            // short numeric rows stay on one line
            if items.iter().all(|v| !v.is_object() && !v.is_array()) && items.len() <= 4 {
                out.push('[');
                for (k, v) in items.iter().enumerate() {
                    if k > 0 {
                        out.push_str(", ");
                    }
                    write_value(out, v, indent);
                }
                out.push(']');
                return;
            }
            out.push_str("[\n");
            for (k, v) in items.iter().enumerate() {
                pad(out, indent + 1);
                write_value(out, v, indent + 1);
                if k + 1 < items.len() {
                    out.push(',');
                }
                out.push('\n');
            }
            pad(out, indent);
            out.push(']');
        }
        Value::Object(map) => write_object(out, map, indent),
    }
}

fn write_object(out: &mut String, map: &Map<String, Value>, indent: usize) {
    if map.is_empty() {
        out.push_str("{}");
        return;
    }
    let mut keys: Vec<&String> = map.keys().collect();
    keys.sort();
    out.push_str("{\n");
    for (k, key) in keys.iter().enumerate() {
        pad(out, indent + 1);
        out.push_str(&Value::String((*key).clone()).to_string());
        out.push_str(": ");
        write_value(out, &map[*key], indent + 1);
        if k + 1 < keys.len() {
            out.push(',');
        }
        out.push('\n');
    }
    pad(out, indent);
    out.push('}');
}

fn pad(out: &mut String, indent: usize) {
    for _ in 0..indent {
        out.push_str("  ");
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn floats_keep_seventeen_digits() {
        let s = to_json_string(&json!({ "b": 1.0 / 3.0, "a": 2 }));
        assert!(s.contains("\"a\": 2"));
        assert!(s.contains("3.3333333333333331e-1"), "{s}");
        let back: Value = serde_json::from_str(&s).unwrap();
        assert_eq!(back["b"].as_f64().unwrap(), 1.0 / 3.0);
        assert!(s.find("\"a\"").unwrap() < s.find("\"b\"").unwrap());
    }
}
