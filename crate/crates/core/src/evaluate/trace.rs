use std::cmp::Ordering;

use serde::{Deserialize, Serialize};

/// Statements plus loop tests executed before a run is cut off.
pub const STEP_LIMIT: usize = 100_000;
/// Nested paragraph or method invocations allowed.
pub const MAX_DEPTH: usize = 256;

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Value {
    Int(i64),
    Str(String),
}

impl Value {
    pub fn display(&self) -> String {
        match self {
            Value::Int(v) => v.to_string(),
            Value::Str(s) => s.clone(),
        }
    }
}

/// Compares as COBOL does: the shorter string is padded with spaces.
pub fn padded_cmp(a: &str, b: &str) -> Ordering {
    let mut x = a.chars();
    let mut y = b.chars();
    loop {
        match (x.next(), y.next()) {
            (None, None) => return Ordering::Equal,
            (p, q) => {
                let o = p.unwrap_or(' ').cmp(&q.unwrap_or(' '));
                if o != Ordering::Equal {
                    return o;
                }
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CallEvent {
    pub program: String,
    pub args: Vec<Value>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub enum Outcome {
    Halted,
    StepLimit,
    RuntimeError(String),
}

impl Outcome {
    pub fn kind(&self) -> &'static str {
        match self {
            Outcome::Halted => "Halted",
            Outcome::StepLimit => "StepLimit",
            Outcome::RuntimeError(_) => "RuntimeError",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Trace {
    pub display_lines: Vec<String>,
    pub call_events: Vec<CallEvent>,
    pub outcome: Outcome,
}

impl Trace {
    pub fn new() -> Self {
        Self { display_lines: Vec::new(), call_events: Vec::new(), outcome: Outcome::Halted }
    }
}

impl Default for Trace {
    fn default() -> Self {
        Self::new()
    }
}

/// Why two traces differ, or None when they agree. Runtime error messages
/// are not compared. When both runs were cut off by the step limit, the
/// shorter observation only has to be a prefix of the longer one.
pub fn trace_mismatch(a: &Trace, b: &Trace) -> Option<String> {
    if a.outcome.kind() != b.outcome.kind() {
        return Some(format!("outcome mismatch: {} vs {}", a.outcome.kind(), b.outcome.kind()));
    }
    let truncated = a.outcome == Outcome::StepLimit;
    if let Some(k) = first_difference(&a.display_lines, &b.display_lines, truncated) {
        return Some(format!("trace mismatch at line {}", k + 1));
    }
    if let Some(k) = first_difference(&a.call_events, &b.call_events, truncated) {
        return Some(format!("call mismatch at event {}", k + 1));
    }
    None
}

fn first_difference<T: PartialEq>(a: &[T], b: &[T], prefix_ok: bool) -> Option<usize> {
    let common = a.iter().zip(b).position(|(x, y)| x != y);
    match common {
        Some(k) => Some(k),
        None if a.len() == b.len() || prefix_ok => None,
        None => Some(a.len().min(b.len())),
    }
}
