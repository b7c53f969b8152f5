//! Deterministic JSON reports.
//!
//! Objects are `serde_json` maps, which keep keys sorted, so the same inputs
//! always give the same bytes. Floats are written in shortest round-trip form;
//! non-finite floats become the strings `"inf"`, `"-inf"` and `"nan"`.

use projconst::bounds::Verdict;
use projconst::numerics::{LogScalar, Rational};
use serde_json::{json, Map, Value};

pub fn num(x: f64) -> Value {
    if x.is_finite() {
        json!(x)
    } else if x.is_nan() {
        json!("nan")
    } else if x > 0.0 {
        json!("inf")
    } else {
        json!("-inf")
    }
}

pub fn nums(xs: &[f64]) -> Value {
    Value::Array(xs.iter().map(|x| num(*x)).collect())
}

pub fn log_scalar(x: LogScalar) -> Value {
    json!({
        "sign": x.sign(),
        "log10": if x.is_zero() { Value::Null } else { num(x.log10_abs()) },
        "approx": format!("≈ {}", x.to_sci_string()),
    })
}

pub fn rational(x: &Rational) -> Value {
    json!(x.to_string())
}

/// A comparison in log space; the margin is `log₁₀(lhs/rhs)`.
pub fn verdict(v: &Verdict) -> Value {
    json!({ "name": v.name, "holds": v.holds, "margin": num(v.margin_log10), "scale": "log10" })
}

/// A floating-point check `value ≤ bound` (or `≥`), with margin in absolute units.
pub fn check(name: &str, holds: bool, margin: f64) -> Value {
    json!({ "name": name, "holds": holds, "margin": num(margin), "scale": "linear" })
}

#[derive(Debug, Clone)]
pub struct Report {
    pub command: String,
    pub seed: u64,
    pub inputs: Map<String, Value>,
    pub results: Map<String, Value>,
    pub verdicts: Vec<Value>,
}

impl Report {
    pub fn new(command: &str, seed: u64) -> Self {
        Report { command: command.to_string(), seed, inputs: Map::new(), results: Map::new(), verdicts: Vec::new() }
    }

    pub fn input(&mut self, key: &str, value: Value) {
        self.inputs.insert(key.to_string(), value);
    }

    pub fn result(&mut self, key: &str, value: Value) {
        self.results.insert(key.to_string(), value);
    }

    pub fn push(&mut self, verdict: Value) {
        self.verdicts.push(verdict);
    }

    pub fn all_hold(&self) -> bool {
        self.verdicts.iter().all(|v| v["holds"] == json!(true))
    }

    pub fn to_value(&self) -> Value {
        json!({
            "command": self.command,
            "seed": self.seed,
            "inputs": Value::Object(self.inputs.clone()),
            "results": Value::Object(self.results.clone()),
            "verdicts": self.verdicts,
            "all_hold": self.all_hold(),
        })
    }

    /// Pretty-printed, newline-terminated.
    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(&self.to_value()).expect("reports contain only JSON values");
        s.push('\n');
        s
    }

    /// One line per verdict, for terminals.
    pub fn summary(&self) -> String {
        let mut out = format!("{}: {}\n", self.command, if self.all_hold() { "ok" } else { "FAILED" });
        for v in &self.verdicts {
            let mark = if v["holds"] == json!(true) { "ok  " } else { "FAIL" };
            out.push_str(&format!("  {mark} {} (margin {})\n", v["name"].as_str().unwrap_or("?"), v["margin"]));
        }
        out
    }
}
