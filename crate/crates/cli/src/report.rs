//! Machine and text reports. JSON objects are key-sorted, so output is a
//! function of the inputs alone.

use serde::Serialize;
use serde_json::{Map, Value};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
}

/// One identity or invariant check.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Check {
    pub name: String,
    /// Largest residual observed.
    pub residual: f64,
    pub threshold: f64,
    pub samples: usize,
    pub failures: usize,
    pub pass: bool,
}

impl Check {
    pub fn single(name: impl Into<String>, residual: f64, threshold: f64) -> Self {
        let pass = residual < threshold;
        Check { name: name.into(), residual, threshold, samples: 1, failures: usize::from(!pass), pass }
    }
}

/// Accumulates a check over many samples.
#[derive(Debug, Clone)]
pub struct Tally {
    check: Check,
}

impl Tally {
    pub fn new(name: impl Into<String>, threshold: f64) -> Self {
        Tally { check: Check { name: name.into(), residual: 0.0, threshold, samples: 0, failures: 0, pass: true } }
    }

    /// Records one residual; NaN counts as a failure.
    pub fn record(&mut self, residual: f64) {
        self.check.samples += 1;
        let ok = residual < self.check.threshold;
        if !ok {
            self.check.failures += 1;
        }
        if residual.is_nan() || residual > self.check.residual {
            self.check.residual = residual;
        }
    }

    /// Records a pass/fail outcome with no numeric residual.
    pub fn record_outcome(&mut self, ok: bool) {
        self.record(if ok { 0.0 } else { f64::INFINITY });
    }

    pub fn finish(mut self) -> Check {
        self.check.pass = self.check.failures == 0 && self.check.samples > 0;
        self.check
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Provenance {
    pub version: String,
    pub tolerance: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub prng: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Report {
    pub command: String,
    pub status: Status,
    pub provenance: Provenance,
    pub ledger: Vec<Check>,
    pub data: Map<String, Value>,
}

impl Report {
    pub fn new(command: &str, tolerance: f64) -> Self {
        Report {
            command: command.to_string(),
            status: Status::Pass,
            provenance: Provenance {
                version: env!("CARGO_PKG_VERSION").to_string(),
                tolerance,
                seed: None,
                prng: None,
            },
            ledger: Vec::new(),
            data: Map::new(),
        }
    }

    pub fn check(&mut self, c: Check) {
        if !c.pass {
            self.status = Status::Fail;
        }
        self.ledger.push(c);
    }

    pub fn set(&mut self, key: &str, value: Value) {
        self.data.insert(key.to_string(), value);
    }

    pub fn passed(&self) -> bool {
        self.status == Status::Pass
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("reports serialize");
        s.push('\n');
        s
    }

    pub fn to_text(&self) -> String {
        let mut out = format!(
            "{}: {} ({} checks, {} failed)\n",
            self.command,
            if self.passed() { "PASS" } else { "FAIL" },
            self.ledger.len(),
            self.ledger.iter().filter(|c| !c.pass).count()
        );
        for (k, v) in &self.data {
            render(&mut out, k, v, 1);
        }
        if !self.ledger.is_empty() {
            out.push_str("checks:\n");
            let width = self.ledger.iter().map(|c| c.name.len()).max().unwrap_or(0);
            for c in &self.ledger {
                out.push_str(&format!(
                    "  {}  {:width$}  {:.3e} < {:.0e}  ({} samples)\n",
                    if c.pass { "PASS" } else { "FAIL" },
                    c.name,
                    c.residual,
                    c.threshold,
                    c.samples,
                ));
            }
        }
        out
    }
}

fn render(out: &mut String, key: &str, v: &Value, depth: usize) {
    let pad = "  ".repeat(depth);
    match v {
        Value::Object(m) => {
            out.push_str(&format!("{pad}{key}:\n"));
            for (k, v) in m {
                render(out, k, v, depth + 1);
            }
        }
        Value::Number(n) => match n.as_f64() {
            Some(x) if !n.is_u64() && !n.is_i64() => out.push_str(&format!("{pad}{key}: {x:.6e}\n")),
            _ => out.push_str(&format!("{pad}{key}: {n}\n")),
        },
        Value::String(s) => out.push_str(&format!("{pad}{key}: {s}\n")),
        Value::Array(a) if a.iter().all(|x| !x.is_object() && !x.is_array()) => {
            let items: Vec<String> = a
                .iter()
                .map(|x| match x {
                    Value::String(s) => s.clone(),
                    Value::Number(n) if n.is_f64() => format!("{:.6e}", n.as_f64().unwrap_or(f64::NAN)),
                    other => other.to_string(),
                })
                .collect();
            out.push_str(&format!("{pad}{key}: [{}]\n", items.join(", ")));
        }
        Value::Array(a) => {
            out.push_str(&format!("{pad}{key}:\n"));
            for (i, x) in a.iter().enumerate() {
                render(out, &format!("[{i}]"), x, depth + 1);
            }
        }
        other => out.push_str(&format!("{pad}{key}: {other}\n")),
    }
}
