//! Output rendering. The table form is computed from the serialized envelope only.

use serde_json::Value;

use crate::config::OutputFormat;

pub fn render(envelope: &Value, format: OutputFormat) -> String {
    match format {
        OutputFormat::Json => serde_json::to_string_pretty(envelope).expect("json values serialize"),
        OutputFormat::Table => table(envelope),
    }
}

fn cell(v: &Value) -> String {
    match v {
        Value::String(s) => s.clone(),
        Value::Null => "-".into(),
        other => other.to_string(),
    }
}

/// Columns are binding keys in first-seen order; missing keys show as `-`.
pub fn table(envelope: &Value) -> String {
    let mut out = String::new();
    out.push_str(&format!("query: {}\n", cell(&envelope["query"])));
    let empty = Vec::new();
    let bindings = envelope["bindings"].as_array().unwrap_or(&empty);
    let mut columns: Vec<String> = Vec::new();
    for b in bindings {
        if let Some(obj) = b.as_object() {
            for k in obj.keys() {
                if !columns.contains(k) {
                    columns.push(k.clone());
                }
            }
        } else if !columns.iter().any(|c| c == "value") {
            columns.push("value".into());
        }
    }
    let rows: Vec<Vec<String>> = bindings
        .iter()
        .map(|b| {
            columns
                .iter()
                .map(|c| match b.as_object() {
                    Some(obj) => obj.get(c).map(cell).unwrap_or_else(|| "-".into()),
                    None => cell(b),
                })
                .collect()
        })
        .collect();
    if !columns.is_empty() {
        let widths: Vec<usize> = columns
            .iter()
            .enumerate()
            .map(|(i, c)| rows.iter().map(|r| r[i].chars().count()).chain([c.chars().count()]).max().unwrap_or(0))
            .collect();
        let line = |cells: &[String]| {
            let padded: Vec<String> = cells
                .iter()
                .zip(&widths)
                .map(|(c, w)| format!("{c:<w$}"))
                .collect();
            format!("{}\n", padded.join(" | ").trim_end())
        };
        out.push_str(&line(&columns));
        out.push_str(&format!(
            "{}\n",
            widths.iter().map(|w| "-".repeat(*w)).collect::<Vec<_>>().join("-+-")
        ));
        for r in &rows {
            out.push_str(&line(r));
        }
    }
    out.push_str(&format!("({} bindings, {} ms)\n", bindings.len(), cell(&envelope["elapsed_ms"])));
    if let Some(ws) = envelope["warnings"].as_array() {
        for w in ws {
            out.push_str(&format!("warning: {}\n", cell(w)));
        }
    }
    out
}
