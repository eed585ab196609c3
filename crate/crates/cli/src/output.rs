use bellgauge_core::format::{format_sig, round_sig};
use serde::Serialize;
use serde_json::Value;

fn round_floats(value: &mut Value) {
    match value {
        Value::Number(n) if n.is_f64() => {
            if let Some(x) = n.as_f64().and_then(|x| serde_json::Number::from_f64(round_sig(x))) {
                *n = x;
            }
        }
        Value::Array(items) => items.iter_mut().for_each(round_floats),
        Value::Object(fields) => fields.values_mut().for_each(round_floats),
        _ => {}
    }
}

/// Pretty JSON with every float rounded to nine significant digits, so
/// parsing and re-serializing the output reproduces it exactly.
pub fn to_json<T: Serialize>(value: &T) -> String {
    let mut v = serde_json::to_value(value).expect("output types serialize to JSON");
    round_floats(&mut v);
    let mut s = serde_json::to_string_pretty(&v).expect("JSON values serialize");
    s.push('\n');
    s
}

pub fn vector(v: &[f64]) -> String {
    v.iter().map(|&x| format_sig(x)).collect::<Vec<_>>().join(" ")
}

/// `key: value` lines, keys padded to a common width.
pub fn fields(rows: &[(&str, String)]) -> String {
    let width = rows.iter().map(|(k, _)| k.len()).max().unwrap_or(0);
    rows.iter()
        .map(|(k, v)| format!("{k:<width$}  {v}\n", width = width + 1, k = format!("{k}:")))
        .collect()
}
