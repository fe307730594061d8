//! Rendering of command results as JSON, CSV or Markdown.

use clap::ValueEnum;
use serde_json::Value;

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
    Markdown,
}

/// A command result: the full JSON document and the part shown as a table.
pub struct Rendered {
    pub json: Value,
    pub table: Value,
}

impl Rendered {
    pub fn same(v: Value) -> Self {
        Rendered { json: v.clone(), table: v }
    }
}

fn cell(v: &Value) -> String {
    match v {
        Value::Null => String::new(),
        Value::String(s) => s.clone(),
        Value::Bool(b) => b.to_string(),
        Value::Number(n) => n.to_string(),
        other => other.to_string(),
    }
}

/// Columns and rows: an array of objects becomes one row per object, an object becomes
/// key/value rows.
fn tabulate(v: &Value) -> (Vec<String>, Vec<Vec<String>>) {
    match v {
        Value::Array(items) if items.iter().all(Value::is_object) => {
            let mut cols: Vec<String> = Vec::new();
            for item in items {
                for k in item.as_object().expect("checked above").keys() {
                    if !cols.contains(k) {
                        cols.push(k.clone());
                    }
                }
            }
            let rows = items.iter().map(|item| cols.iter().map(|c| item.get(c).map(cell).unwrap_or_default()).collect()).collect();
            (cols, rows)
        }
        Value::Object(map) => {
            let rows = map.iter().map(|(k, v)| vec![k.clone(), cell(v)]).collect();
            (vec!["key".into(), "value".into()], rows)
        }
        Value::Array(items) => (vec!["value".into()], items.iter().map(|x| vec![cell(x)]).collect()),
        other => (vec!["value".into()], vec![vec![cell(other)]]),
    }
}

pub fn render(r: &Rendered, format: Format) -> Result<String, String> {
    match format {
        Format::Json => serde_json::to_string_pretty(&r.json).map(|s| s + "\n").map_err(|e| e.to_string()),
        Format::Csv => {
            let (cols, rows) = tabulate(&r.table);
            let mut w = csv::Writer::from_writer(Vec::new());
            w.write_record(&cols).map_err(|e| e.to_string())?;
            for row in rows {
                w.write_record(&row).map_err(|e| e.to_string())?;
            }
            let bytes = w.into_inner().map_err(|e| e.to_string())?;
            String::from_utf8(bytes).map_err(|e| e.to_string())
        }
        Format::Markdown => {
            let (cols, rows) = tabulate(&r.table);
            let esc = |s: &str| s.replace('|', "\\|");
            let mut out = format!("| {} |\n", cols.iter().map(|c| esc(c)).collect::<Vec<_>>().join(" | "));
            out += &format!("|{}\n", "---|".repeat(cols.len()));
            for row in rows {
                out += &format!("| {} |\n", row.iter().map(|c| esc(c)).collect::<Vec<_>>().join(" | "));
            }
            Ok(out)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use serde_json::json;

    #[test]
    fn array_of_objects_becomes_rows() {
        let r = Rendered::same(json!([{"p": 7, "a": 5}, {"p": 7, "a": 41}]));
        assert_eq!(render(&r, Format::Csv).unwrap(), "p,a\n7,5\n7,41\n");
        assert_eq!(render(&r, Format::Markdown).unwrap(), "| p | a |\n|---|---|\n| 7 | 5 |\n| 7 | 41 |\n");
    }

    #[test]
    fn object_becomes_key_value_rows() {
        let r = Rendered::same(json!({"a": 21, "basis": "B3(1,1)", "x": ["1/3", "2"]}));
        assert_eq!(render(&r, Format::Csv).unwrap(), "key,value\na,21\nbasis,\"B3(1,1)\"\nx,\"[\"\"1/3\"\",\"\"2\"\"]\"\n");
    }
}
