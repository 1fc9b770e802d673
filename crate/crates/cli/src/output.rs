use cherednik::report::Report;
use cherednik::Error;
use serde_json::{Map, Value};

use crate::config::OutFormat;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Status {
    Pass,
    Fail,
    /// The degree cap is too small to decide.
    Inconclusive,
}

impl Status {
    pub fn as_str(self) -> &'static str {
        match self {
            Status::Pass => "pass",
            Status::Fail => "fail",
            Status::Inconclusive => "inconclusive",
        }
    }

    pub fn exit_code(self) -> i32 {
        match self {
            Status::Pass => 0,
            Status::Fail | Status::Inconclusive => 1,
        }
    }

    pub fn of(pass: bool) -> Self {
        if pass {
            Status::Pass
        } else {
            Status::Fail
        }
    }
}

/// The result of one command, before the provenance headers are added.
#[derive(Clone, Debug)]
pub struct Outcome {
    pub status: Status,
    pub body: Map<String, Value>,
}

impl Outcome {
    pub fn new(status: Status) -> Self {
        Outcome { status, body: Map::new() }
    }

    pub fn with(mut self, key: &str, value: Value) -> Self {
        self.body.insert(key.to_string(), value);
        self
    }

    pub fn from_report(r: &Report) -> Self {
        let mut out = Outcome::new(Status::of(r.pass))
            .with("pass", Value::Bool(r.pass))
            .with("checked", r.checked.into())
            .with("witness", r.witness.clone().map_or(Value::Null, Value::String));
        if !r.details.is_null() {
            out = out.with("details", r.details.clone());
        }
        out
    }

    /// Failures that the engine reports through `Err`. Configuration
    /// problems are not handled here.
    pub fn from_error(e: &Error) -> Self {
        let status = match e {
            Error::Inconclusive { .. } => Status::Inconclusive,
            _ => Status::Fail,
        };
        Outcome::new(status).with("pass", Value::Bool(false)).with("witness", Value::String(e.to_string()))
    }
}

pub struct Headers {
    pub command: String,
    pub group: String,
    pub k: String,
    pub caps: Value,
}

pub fn envelope(h: &Headers, o: &Outcome) -> Value {
    let mut m = Map::new();
    m.insert("command".into(), Value::String(h.command.clone()));
    m.insert("group".into(), Value::String(h.group.clone()));
    m.insert("k".into(), Value::String(h.k.clone()));
    m.insert("caps".into(), h.caps.clone());
    m.insert("status".into(), Value::String(o.status.as_str().into()));
    for (key, v) in &o.body {
        m.insert(key.clone(), v.clone());
    }
    Value::Object(m)
}

fn text_value(v: &Value) -> String {
    match v {
        Value::String(s) => s.clone(),
        Value::Null => "-".into(),
        other => other.to_string(),
    }
}

pub fn render(h: &Headers, o: &Outcome, format: OutFormat) -> String {
    let doc = envelope(h, o);
    match format {
        OutFormat::Json => serde_json::to_string_pretty(&doc).expect("json") + "\n",
        OutFormat::Text => {
            let mut s = format!("{}: {}\n", h.command, o.status.as_str().to_uppercase());
            if let Value::Object(m) = doc {
                for (key, v) in m {
                    if key == "command" || key == "status" {
                        continue;
                    }
                    s.push_str(&format!("  {key}: {}\n", text_value(&v)));
                }
            }
            s
        }
    }
}
