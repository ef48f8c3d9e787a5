use std::fmt::Write;

use serde_json::Value;

use super::Report;

/// Pretty JSON; byte-identical for identical reports.
pub fn render_json(report: &Report) -> String {
    let mut s = serde_json::to_string_pretty(report).expect("reports serialise");
    s.push('\n');
    s
}

fn scalar(v: &Value) -> String {
    match v {
        Value::Null => "-".into(),
        Value::Bool(b) => if *b { "yes" } else { "no" }.into(),
        Value::Number(x) => match x.as_f64() {
            Some(f) if !x.is_i64() && !x.is_u64() => format!("{f:.3e}"),
            _ => x.to_string(),
        },
        Value::String(s) => s.clone(),
        Value::Array(items) => format!("[{}]", items.iter().map(scalar).collect::<Vec<_>>().join(", ")),
        Value::Object(map) => format!(
            "{{{}}}",
            map.iter().map(|(k, v)| format!("{k}: {}", scalar(v))).collect::<Vec<_>>().join(", ")
        ),
    }
}

fn is_row_list(items: &[Value]) -> bool {
    !items.is_empty() && items.iter().all(Value::is_object)
}

fn write_rows(out: &mut String, indent: usize, items: &[Value]) {
    let cols: Vec<String> = items[0].as_object().map(|o| o.keys().cloned().collect()).unwrap_or_default();
    let cells: Vec<Vec<String>> = items
        .iter()
        .map(|row| cols.iter().map(|c| row.get(c).map(scalar).unwrap_or_default()).collect())
        .collect();
    let widths: Vec<usize> =
        cols.iter().enumerate().map(|(i, c)| cells.iter().map(|r| r[i].len()).max().unwrap_or(0).max(c.len())).collect();
    let pad = " ".repeat(indent);
    let line = |vals: &[String]| vals.iter().zip(&widths).map(|(v, w)| format!("{v:<w$}")).collect::<Vec<_>>().join("  ");
    let _ = writeln!(out, "{pad}{}", line(&cols).trim_end());
    for r in &cells {
        let _ = writeln!(out, "{pad}{}", line(r).trim_end());
    }
}

fn write_value(out: &mut String, indent: usize, key: &str, v: &Value) {
    let pad = " ".repeat(indent);
    match v {
        Value::Object(map) => {
            let _ = writeln!(out, "{pad}{key}:");
            for (k, x) in map {
                write_value(out, indent + 2, k, x);
            }
        }
        Value::Array(items) if is_row_list(items) => {
            let _ = writeln!(out, "{pad}{key}:");
            write_rows(out, indent + 2, items);
        }
        Value::Array(items) if items.iter().any(Value::is_array) => {
            let _ = writeln!(out, "{pad}{key}:");
            for it in items {
                let _ = writeln!(out, "{pad}  {}", scalar(it));
            }
        }
        _ => {
            let _ = writeln!(out, "{pad}{key}: {}", scalar(v));
        }
    }
}

/// Human-readable rendering of a report.
pub fn render_table(report: &Report) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "hdl {} | model {} | status {:?}", report.command, report.model, report.status);
    if let Value::Object(map) = &report.results {
        for (k, v) in map {
            write_value(&mut out, 0, k, v);
        }
    }
    if !report.defects.is_empty() {
        let _ = writeln!(out, "defects:");
        for (k, v) in &report.defects {
            let _ = writeln!(out, "  {k}: {v:.3e}");
        }
    }
    for w in &report.warnings {
        let _ = writeln!(out, "warning: {w}");
    }
    out
}
