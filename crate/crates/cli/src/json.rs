//! Deterministic JSON text output.
//!
//! Objects are printed one member per line; arrays made only of scalars, or
//! only of arrays of scalars, stay on one line, so a matrix prints one row per
//! line. Non-integer numbers use 17 significant digits in exponent form,
//! which round-trips every `f64` exactly.

use serde_json::Value;

const INDENT: &str = "  ";

pub fn to_string_pretty(value: &Value) -> String {
    let mut out = String::new();
    write_value(value, 0, &mut out);
    out
}

pub fn format_float(x: f64) -> String {
    format!("{x:.16e}")
}

fn is_scalar(v: &Value) -> bool {
    !matches!(v, Value::Array(_) | Value::Object(_))
}

fn is_flat(items: &[Value]) -> bool {
    items.iter().all(|v| match v {
        Value::Array(inner) => inner.iter().all(is_scalar),
        other => is_scalar(other),
    })
}

fn write_scalar(v: &Value, out: &mut String) {
    match v {
        Value::Number(n) => {
            if let Some(i) = n.as_i64() {
                out.push_str(&i.to_string());
            } else if let Some(u) = n.as_u64() {
                out.push_str(&u.to_string());
            } else {
                out.push_str(&format_float(n.as_f64().expect("finite number")));
            }
        }
        other => out.push_str(&other.to_string()),
    }
}

fn write_inline(v: &Value, out: &mut String) {
    match v {
        Value::Array(items) => {
            out.push('[');
            for (i, item) in items.iter().enumerate() {
                if i > 0 {
                    out.push_str(", ");
                }
                write_inline(item, out);
            }
            out.push(']');
        }
        other => write_scalar(other, out),
    }
}

fn newline(depth: usize, out: &mut String) {
    out.push('\n');
    for _ in 0..depth {
        out.push_str(INDENT);
    }
}

fn write_value(v: &Value, depth: usize, out: &mut String) {
    match v {
        Value::Object(map) if map.is_empty() => out.push_str("{}"),
        Value::Object(map) => {
            out.push('{');
            for (i, (key, item)) in map.iter().enumerate() {
                if i > 0 {
                    out.push(',');
                }
                newline(depth + 1, out);
                out.push_str(&Value::String(key.clone()).to_string());
                out.push_str(": ");
                write_value(item, depth + 1, out);
            }
            newline(depth, out);
            out.push('}');
        }
        Value::Array(items) if items.is_empty() || is_flat(items) => write_inline(v, out),
        Value::Array(items) => {
            out.push('[');
            for (i, item) in items.iter().enumerate() {
                if i > 0 {
                    out.push(',');
                }
                newline(depth + 1, out);
                write_value(item, depth + 1, out);
            }
            newline(depth, out);
            out.push(']');
        }
        scalar => write_scalar(scalar, out),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use serde_json::json;

    #[test]
    fn layout() {
        let v = json!({"a": 1, "b": [1.5, -2.0], "m": [[[1.0, 0.0]], [[0.0, 1.0]]], "s": "x\"y", "e": {}, "n": null});
        let text = to_string_pretty(&v);
        let expected = r#"{
  "a": 1,
  "b": [1.5000000000000000e0, -2.0000000000000000e0],
  "m": [
    [[1.0000000000000000e0, 0.0000000000000000e0]],
    [[0.0000000000000000e0, 1.0000000000000000e0]]
  ],
  "s": "x\"y",
  "e": {},
  "n": null
}"#;
        assert_eq!(text, expected);
    }

    #[test]
    fn floats_round_trip_exactly() {
        for x in [0.1, 1.0 / 3.0, -1e-300, 5e-324, f64::MAX, std::f64::consts::PI, -0.0] {
            let text = format_float(x);
            let back: f64 = text.parse().unwrap();
            assert_eq!(back.to_bits(), x.to_bits(), "{text}");
        }
    }

    #[test]
    fn output_parses_back_to_the_same_text() {
        let v = json!({"x": [0.1, 0.2], "nested": [{"k": 3.25}]});
        let text = to_string_pretty(&v);
        let reparsed: Value = serde_json::from_str(&text).unwrap();
        assert_eq!(to_string_pretty(&reparsed), text);
    }
}
