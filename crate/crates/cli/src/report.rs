use std::time::Duration;

use serde_json::{json, Map, Value};

#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    Text,
    Json,
    Csv,
}

#[derive(Debug)]
pub struct Report {
    pub command: String,
    pub inputs: Value,
    pub results: Value,
    pub timing: Duration,
    pub cap_flags: Vec<String>,
    /// Replaces the generic text rendering of `results`.
    pub text: Option<String>,
}

impl Report {
    pub fn to_json(&self) -> Value {
        json!({
            "command": self.command,
            "inputs": self.inputs,
            "results": self.results,
            "timing": {"seconds": self.timing.as_secs_f64()},
            "cap_flags": self.cap_flags,
        })
    }

    pub fn render(&self, format: Format) -> String {
        match format {
            Format::Json => serde_json::to_string_pretty(&self.to_json()).unwrap() + "\n",
            Format::Csv => to_csv(&self.results),
            Format::Text => self.to_text(),
        }
    }

    fn to_text(&self) -> String {
        let mut out = format!("{}\n", self.command);
        if let Some(t) = &self.text {
            out.push_str(t);
        } else {
            self.results_text(&mut out);
        }
        for f in &self.cap_flags {
            out.push_str(&format!("  cap: {f}\n"));
        }
        out.push_str(&format!("  ({:.2}s)\n", self.timing.as_secs_f64()));
        out
    }

    fn results_text(&self, out: &mut String) {
        match &abbreviate(&self.results) {
            Value::Object(m) => text_object(out, m, 1),
            Value::Array(rows) => {
                for row in rows {
                    out.push_str(&format!("  {}\n", flat(row)));
                }
            }
            other => out.push_str(&format!("  {}\n", flat(other))),
        }
    }
}

fn text_object(out: &mut String, m: &Map<String, Value>, depth: usize) {
    let pad = "  ".repeat(depth);
    for (k, v) in m {
        match v {
            Value::Object(inner) if depth < 3 => {
                out.push_str(&format!("{pad}{k}:\n"));
                text_object(out, inner, depth + 1);
            }
            _ => out.push_str(&format!("{pad}{k}: {}\n", flat(v))),
        }
    }
}

const TEXT_WIDTH: usize = 80;

/// Long digit strings shortened for the text view; JSON and CSV keep them.
fn abbreviate(v: &Value) -> Value {
    match v {
        Value::String(s) if s.len() > TEXT_WIDTH => {
            Value::String(format!("{}...{} ({} chars)", &s[..20], &s[s.len() - 20..], s.len()))
        }
        Value::Array(a) => Value::Array(a.iter().map(abbreviate).collect()),
        Value::Object(m) => Value::Object(m.iter().map(|(k, v)| (k.clone(), abbreviate(v))).collect()),
        other => other.clone(),
    }
}

fn flat(v: &Value) -> String {
    match v {
        Value::String(s) => s.clone(),
        other => other.to_string(),
    }
}

/// Arrays of objects become one row per element; an object becomes
/// key,value rows.
fn to_csv(v: &Value) -> String {
    let mut w = csv::Writer::from_writer(Vec::new());
    match v {
        Value::Array(rows) if rows.iter().all(Value::is_object) && !rows.is_empty() => {
            let mut header: Vec<String> = Vec::new();
            for r in rows {
                for k in r.as_object().unwrap().keys() {
                    if !header.contains(k) {
                        header.push(k.clone());
                    }
                }
            }
            w.write_record(&header).unwrap();
            for r in rows {
                let rec: Vec<String> = header.iter().map(|k| r.get(k).map(flat).unwrap_or_default()).collect();
                w.write_record(&rec).unwrap();
            }
        }
        Value::Object(m) => {
            w.write_record(["key", "value"]).unwrap();
            for (k, v) in m {
                w.write_record([k.as_str(), &flat(v)]).unwrap();
            }
        }
        other => {
            w.write_record(["value"]).unwrap();
            w.write_record([flat(other)]).unwrap();
        }
    }
    String::from_utf8(w.into_inner().unwrap()).unwrap()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn csv_of_rows_and_objects() {
        let rows = json!([{"a": 1, "b": "x,y"}, {"a": 2, "c": [1, 2]}]);
        assert_eq!(to_csv(&rows), "a,b,c\n1,\"x,y\",\n2,,\"[1,2]\"\n");
        assert_eq!(to_csv(&json!({"k": true})), "key,value\nk,true\n");
    }

    #[test]
    fn long_strings_are_shortened_for_text_only() {
        let digits = "9".repeat(200);
        let v = abbreviate(&json!({"u": [digits.clone()]}));
        let s = v["u"][0].as_str().unwrap();
        assert!(s.ends_with("(200 chars)") && s.len() < 80);
        assert_eq!(abbreviate(&json!("short")), json!("short"));
    }
}
