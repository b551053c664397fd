//! Report envelope and text rendering.
//!
//! Both output modes come from the same JSON value, so the text form never
//! states anything the JSON form does not.

use serde_json::{Map, Value};

pub const SCHEMA: &str = "chaincond.report/1";

/// Exit codes: property holds, property fails, bad input.
pub const EXIT_HOLDS: i32 = 0;
pub const EXIT_FAILS: i32 = 1;
pub const EXIT_ERROR: i32 = 2;

#[derive(Debug, Clone)]
pub struct Report {
    pub command: &'static str,
    pub exit: i32,
    pub body: Map<String, Value>,
}

impl Report {
    pub fn new(command: &'static str, exit: i32, body: Value) -> Self {
        let body = match body {
            Value::Object(m) => m,
            other => {
                let mut m = Map::new();
                m.insert("result".into(), other);
                m
            }
        };
        Report { command, exit, body }
    }

    pub fn error(command: &'static str, message: &str) -> Self {
        let mut body = Map::new();
        body.insert("error".into(), Value::String(message.to_string()));
        Report {
            command,
            exit: EXIT_ERROR,
            body,
        }
    }

    pub fn to_value(&self) -> Value {
        let mut m = self.body.clone();
        m.insert("schema".into(), Value::String(SCHEMA.into()));
        m.insert("command".into(), Value::String(self.command.into()));
        m.insert("exit".into(), Value::from(self.exit));
        Value::Object(m)
    }

    pub fn to_json(&self) -> String {
        crate::doc::to_canonical_text(&self.to_value())
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let verdict = match (self.exit, self.command) {
            (EXIT_HOLDS, "search") => "exhausted",
            (EXIT_FAILS, "search") => "witness found",
            (EXIT_HOLDS, _) => "holds",
            (EXIT_FAILS, _) => "fails",
            _ => "error",
        };
        out.push_str(&format!("{}: {verdict}\n", self.command));
        render_map(&self.body, 1, &mut out);
        out
    }
}

fn scalar(v: &Value) -> Option<String> {
    match v {
        Value::Null => Some("none".into()),
        Value::Bool(b) => Some(if *b { "yes" } else { "no" }.into()),
        Value::Number(n) => Some(n.to_string()),
        Value::String(s) => Some(s.clone()),
        Value::Array(xs) if xs.iter().all(|x| !x.is_object() && !x.is_array() || is_flat(x)) => {
            let parts: Vec<String> = xs.iter().map(|x| scalar(x).unwrap_or_default()).collect();
            Some(format!("{{{}}}", parts.join(", ")))
        }
        _ => None,
    }
}

fn is_flat(v: &Value) -> bool {
    matches!(v, Value::Array(xs) if xs.iter().all(|x| !x.is_object() && !x.is_array()))
}

fn render_map(m: &Map<String, Value>, depth: usize, out: &mut String) {
    for (k, v) in m {
        render_entry(k, v, depth, out);
    }
}

fn render_entry(k: &str, v: &Value, depth: usize, out: &mut String) {
    let pad = "  ".repeat(depth);
    if let Some(s) = scalar(v) {
        out.push_str(&format!("{pad}{k}: {s}\n"));
        return;
    }
    out.push_str(&format!("{pad}{k}:\n"));
    match v {
        Value::Object(m) => render_map(m, depth + 1, out),
        Value::Array(xs) => {
            for (i, x) in xs.iter().enumerate() {
                match x {
                    Value::Object(m) => {
                        out.push_str(&format!("{pad}  - [{i}]\n"));
                        render_map(m, depth + 2, out);
                    }
                    other => render_entry(&format!("[{i}]"), other, depth + 1, out),
                }
            }
        }
        _ => unreachable!("scalars are handled above"),
    }
}
