//! Structured reports rendered as JSON or as flat `key,value` CSV.
//!
//! Numbers are printed in scientific notation with a fixed number of
//! significant digits (17 by default, which round-trips every f64), so
//! identical inputs give byte-identical output.

#[derive(Clone, Debug, PartialEq)]
pub enum Value {
    Num(f64),
    Int(i64),
    Bool(bool),
    Str(String),
    Null,
    List(Vec<Value>),
    Map(Vec<(String, Value)>),
}

impl From<f64> for Value {
    fn from(v: f64) -> Self {
        Value::Num(v)
    }
}

impl From<&str> for Value {
    fn from(v: &str) -> Self {
        Value::Str(v.to_string())
    }
}

impl From<String> for Value {
    fn from(v: String) -> Self {
        Value::Str(v)
    }
}

impl From<bool> for Value {
    fn from(v: bool) -> Self {
        Value::Bool(v)
    }
}

impl From<usize> for Value {
    fn from(v: usize) -> Self {
        Value::Int(v as i64)
    }
}

impl From<i64> for Value {
    fn from(v: i64) -> Self {
        Value::Int(v)
    }
}

/// Ordered key/value report.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct Report {
    entries: Vec<(String, Value)>,
}

impl Report {
    pub fn new() -> Self {
        Report::default()
    }

    pub fn push(&mut self, key: &str, value: impl Into<Value>) -> &mut Self {
        self.entries.push((key.to_string(), value.into()));
        self
    }

    pub fn get(&self, key: &str) -> Option<&Value> {
        self.entries.iter().find(|(k, _)| k == key).map(|(_, v)| v)
    }

    pub fn into_value(self) -> Value {
        Value::Map(self.entries)
    }

    pub fn to_json(&self, precision: usize) -> String {
        let mut out = String::new();
        write_json(&mut out, &Value::Map(self.entries.clone()), precision, 0);
        out.push('\n');
        out
    }

    pub fn to_csv(&self, precision: usize) -> String {
        let mut out = String::from("key,value\n");
        for (k, v) in &self.entries {
            flatten(&mut out, k, v, precision);
        }
        out
    }
}

/// `precision` significant digits in scientific notation.
pub fn format_num(x: f64, precision: usize) -> String {
    if x.is_nan() {
        "nan".to_string()
    } else if x.is_infinite() {
        if x > 0.0 { "inf" } else { "-inf" }.to_string()
    } else {
        format!("{:.*e}", precision.saturating_sub(1), x)
    }
}

fn escape(s: &str) -> String {
    let mut out = String::with_capacity(s.len() + 2);
    out.push('"');
    for ch in s.chars() {
        match ch {
            '"' => out.push_str("\\\""),
            '\\' => out.push_str("\\\\"),
            '\n' => out.push_str("\\n"),
            c if (c as u32) < 0x20 => out.push_str(&format!("\\u{:04x}", c as u32)),
            c => out.push(c),
        }
    }
    out.push('"');
    out
}

fn write_json(out: &mut String, v: &Value, precision: usize, depth: usize) {
    let pad = |n: usize| "  ".repeat(n);
    match v {
        Value::Num(x) if x.is_finite() => out.push_str(&format_num(*x, precision)),
        Value::Num(_) | Value::Null => out.push_str("null"),
        Value::Int(i) => out.push_str(&i.to_string()),
        Value::Bool(b) => out.push_str(if *b { "true" } else { "false" }),
        Value::Str(s) => out.push_str(&escape(s)),
        Value::List(items) if items.is_empty() => out.push_str("[]"),
        Value::List(items) => {
            out.push_str("[\n");
            for (i, item) in items.iter().enumerate() {
                out.push_str(&pad(depth + 1));
                write_json(out, item, precision, depth + 1);
                out.push_str(if i + 1 < items.len() { ",\n" } else { "\n" });
            }
            out.push_str(&pad(depth));
            out.push(']');
        }
        Value::Map(entries) if entries.is_empty() => out.push_str("{}"),
        Value::Map(entries) => {
            out.push_str("{\n");
            for (i, (k, item)) in entries.iter().enumerate() {
                out.push_str(&pad(depth + 1));
                out.push_str(&escape(k));
                out.push_str(": ");
                write_json(out, item, precision, depth + 1);
                out.push_str(if i + 1 < entries.len() { ",\n" } else { "\n" });
            }
            out.push_str(&pad(depth));
            out.push('}');
        }
    }
}

fn csv_field(s: &str) -> String {
    if s.contains([',', '"', '\n']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

fn flatten(out: &mut String, key: &str, v: &Value, precision: usize) {
    let scalar = match v {
        Value::Num(x) => format_num(*x, precision),
        Value::Int(i) => i.to_string(),
        Value::Bool(b) => b.to_string(),
        Value::Str(s) => s.clone(),
        Value::Null => String::new(),
        Value::List(items) => {
            for (i, item) in items.iter().enumerate() {
                flatten(out, &format!("{key}.{i}"), item, precision);
            }
            return;
        }
        Value::Map(entries) => {
            for (k, item) in entries {
                flatten(out, &format!("{key}.{k}"), item, precision);
            }
            return;
        }
    };
    out.push_str(&csv_field(key));
    out.push(',');
    out.push_str(&csv_field(&scalar));
    out.push('\n');
}
