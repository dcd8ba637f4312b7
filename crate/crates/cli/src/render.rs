//! Plain-text rendering of a JSON report. Every value in the JSON form
//! appears in the text form.

use std::fmt::Write;

use serde_json::{Map, Value};

fn scalar(v: &Value) -> String {
    match v {
        Value::Null => "-".into(),
        Value::String(s) if s.is_empty() => "ε".into(),
        Value::String(s) => s.clone(),
        other => other.to_string(),
    }
}

fn is_scalar(v: &Value) -> bool {
    !matches!(v, Value::Array(_) | Value::Object(_))
}

fn cell(v: &Value) -> String {
    match v {
        Value::Array(items) if items.iter().all(is_scalar) => {
            format!("[{}]", items.iter().map(scalar).collect::<Vec<_>>().join(","))
        }
        v if is_scalar(v) => scalar(v),
        other => other.to_string(),
    }
}

fn table(out: &mut String, indent: &str, rows: &[Map<String, Value>]) {
    let mut cols: Vec<&String> = Vec::new();
    for row in rows {
        for k in row.keys() {
            if !cols.contains(&k) {
                cols.push(k);
            }
        }
    }
    let cells: Vec<Vec<String>> = rows
        .iter()
        .map(|r| cols.iter().map(|c| r.get(*c).map_or(String::new(), cell)).collect())
        .collect();
    let widths: Vec<usize> = cols
        .iter()
        .enumerate()
        .map(|(i, c)| cells.iter().map(|r| r[i].chars().count()).chain([c.len()]).max().unwrap_or(0))
        .collect();
    let line = |items: Vec<String>| {
        items
            .iter()
            .zip(&widths)
            .map(|(s, w)| format!("{s:<w$}"))
            .collect::<Vec<_>>()
            .join("  ")
            .trim_end()
            .to_string()
    };
    let _ = writeln!(out, "{indent}{}", line(cols.iter().map(|c| c.to_string()).collect()));
    for r in cells {
        let _ = writeln!(out, "{indent}{}", line(r));
    }
}

fn object(out: &mut String, indent: &str, map: &Map<String, Value>) {
    for (k, v) in map {
        match v {
            Value::Object(inner) if inner.is_empty() => {
                let _ = writeln!(out, "{indent}{k}: (none)");
            }
            Value::Object(inner) => {
                let _ = writeln!(out, "{indent}{k}:");
                object(out, &format!("{indent}  "), inner);
            }
            Value::Array(items) if items.is_empty() => {
                let _ = writeln!(out, "{indent}{k}: (none)");
            }
            Value::Array(items) if items.iter().all(is_scalar) => {
                let _ = writeln!(
                    out,
                    "{indent}{k}: {}",
                    items.iter().map(scalar).collect::<Vec<_>>().join(" ")
                );
            }
            Value::Array(items) if items.iter().all(Value::is_object) => {
                let _ = writeln!(out, "{indent}{k}:");
                let rows: Vec<Map<String, Value>> =
                    items.iter().filter_map(|i| i.as_object().cloned()).collect();
                table(out, &format!("{indent}  "), &rows);
            }
            Value::Array(items) => {
                let _ = writeln!(out, "{indent}{k}:");
                for item in items {
                    let _ = writeln!(out, "{indent}  {}", cell(item));
                }
            }
            other => {
                let _ = writeln!(out, "{indent}{k}: {}", scalar(other));
            }
        }
    }
}

pub fn text(value: &Value) -> String {
    let mut out = String::new();
    match value {
        Value::Object(map) => object(&mut out, "", map),
        other => out.push_str(&cell(other)),
    }
    out
}
