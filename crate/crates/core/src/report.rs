use serde::Serialize;
use serde_json::Value;

/// Outcome of an exact verification: a pass flag, how many cases were
/// checked, and the first counterexample if any.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Report {
    pub name: String,
    pub pass: bool,
    pub checked: usize,
    pub witness: Option<String>,
    #[serde(skip_serializing_if = "Value::is_null")]
    pub details: Value,
}

impl Report {
    pub fn new(name: impl Into<String>) -> Self {
        Report { name: name.into(), pass: true, checked: 0, witness: None, details: Value::Null }
    }

    /// Records one case; the first failure becomes the witness.
    pub fn record(&mut self, ok: bool, witness: impl FnOnce() -> String) {
        self.checked += 1;
        if !ok && self.pass {
            self.pass = false;
            self.witness = Some(witness());
        }
    }

    pub fn with_details(mut self, details: Value) -> Self {
        self.details = details;
        self
    }

    /// Merges another report's counts and first witness.
    pub fn absorb(&mut self, other: &Report) {
        self.checked += other.checked;
        if !other.pass && self.pass {
            self.pass = false;
            self.witness = other.witness.as_ref().map(|w| format!("{}: {w}", other.name));
        }
    }

    pub fn to_json(&self) -> Value {
        serde_json::to_value(self).expect("report serializes")
    }
}
