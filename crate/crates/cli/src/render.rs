//! Plain-text rendering of report documents.

use serde_json::Value;

use crate::number::{format_f64, to_compact_json};

/// `key: value` lines for scalars (nested keys joined with `.`) and
/// tab-separated tables for arrays of objects, in document order.
pub fn render_table(doc: &Value) -> String {
    let mut out = String::new();
    walk(doc, "", &mut out);
    out
}

fn walk(value: &Value, prefix: &str, out: &mut String) {
    let Value::Object(map) = value else {
        out.push_str(&format!("{prefix}: {}\n", cell(value)));
        return;
    };
    for (key, v) in map {
        let name = if prefix.is_empty() { key.clone() } else { format!("{prefix}.{key}") };
        match v {
            Value::Object(_) => walk(v, &name, out),
            Value::Array(items) if !items.is_empty() && items.iter().all(Value::is_object) => {
                table(&name, items, out)
            }
            _ => out.push_str(&format!("{name}: {}\n", cell(v))),
        }
    }
}

fn table(name: &str, rows: &[Value], out: &mut String) {
    let mut columns: Vec<&str> = Vec::new();
    for row in rows {
        for key in row.as_object().into_iter().flat_map(|m| m.keys()) {
            if !columns.contains(&key.as_str()) {
                columns.push(key);
            }
        }
    }
    out.push_str(&format!("\n[{name}]\n{}\n", columns.join("\t")));
    for row in rows {
        let cells: Vec<String> = columns
            .iter()
            .map(|c| row.get(*c).map_or_else(|| "-".to_string(), cell))
            .collect();
        out.push_str(&cells.join("\t"));
        out.push('\n');
    }
    out.push('\n');
}

fn cell(v: &Value) -> String {
    match v {
        Value::Null => "-".into(),
        Value::Bool(b) => b.to_string(),
        Value::Number(n) => match n.as_f64() {
            Some(x) if !(n.is_u64() || n.is_i64()) => format_f64(x),
            _ => n.to_string(),
        },
        Value::String(s) => s.clone(),
        other => to_compact_json(other),
    }
}
