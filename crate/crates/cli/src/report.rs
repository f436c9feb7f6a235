use std::fs;
use std::io::Write;
use std::path::Path;
use std::time::{SystemTime, UNIX_EPOCH};

use serde::Serialize;
use serde_json::{Map, Value};

use crate::commands::CliError;

/// Reproducibility header; the timestamp is the only run-dependent field.
#[derive(Serialize)]
struct Header {
    tool: &'static str,
    version: &'static str,
    timestamp: u64,
}

#[derive(Serialize, Clone, Debug)]
pub struct Check {
    pub name: String,
    pub pass: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub value: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub tolerance: Option<f64>,
}

impl Check {
    pub fn flag(name: impl Into<String>, pass: bool) -> Self {
        Check {
            name: name.into(),
            pass,
            value: None,
            tolerance: None,
        }
    }

    /// `value ≤ tolerance`.
    pub fn below(name: impl Into<String>, value: f64, tolerance: f64) -> Self {
        Check {
            name: name.into(),
            pass: value <= tolerance,
            value: Some(value),
            tolerance: Some(tolerance),
        }
    }

    /// `value ≥ bound`.
    pub fn above(name: impl Into<String>, value: f64, bound: f64) -> Self {
        Check {
            name: name.into(),
            pass: value >= bound,
            value: Some(value),
            tolerance: Some(bound),
        }
    }
}

pub struct Report {
    pub command: String,
    pub config: Value,
    pub checks: Vec<Check>,
    pub results: Map<String, Value>,
}

impl Report {
    pub fn new(command: &str, config: Value) -> Self {
        Report {
            command: command.to_string(),
            config,
            checks: Vec::new(),
            results: Map::new(),
        }
    }

    pub fn check(&mut self, c: Check) {
        self.checks.push(c);
    }

    pub fn set(&mut self, key: &str, v: impl Serialize) {
        self.results
            .insert(key.to_string(), serde_json::to_value(v).expect("report values serialize"));
    }

    pub fn pass(&self) -> bool {
        self.checks.iter().all(|c| c.pass)
    }

    pub fn to_json(&self) -> String {
        let timestamp = SystemTime::now()
            .duration_since(UNIX_EPOCH)
            .map(|d| d.as_secs())
            .unwrap_or(0);
        let mut root = Map::new();
        root.insert(
            "header".into(),
            serde_json::to_value(Header {
                tool: "wedgelab",
                version: env!("CARGO_PKG_VERSION"),
                timestamp,
            })
            .expect("header serializes"),
        );
        root.insert("command".into(), Value::String(self.command.clone()));
        root.insert("config".into(), self.config.clone());
        root.insert("pass".into(), Value::Bool(self.pass()));
        root.insert("checks".into(), serde_json::to_value(&self.checks).expect("checks serialize"));
        for (k, v) in &self.results {
            root.insert(k.clone(), v.clone());
        }
        serde_json::to_string_pretty(&Value::Object(root)).expect("report serializes")
    }

    pub fn emit(&self, out: Option<&Path>) -> Result<(), CliError> {
        let text = self.to_json();
        match out {
            Some(p) => fs::write(p, text + "\n").map_err(|e| CliError::io(p, e))?,
            None => {
                let mut stdout = std::io::stdout().lock();
                writeln!(stdout, "{text}").map_err(|e| CliError::io(Path::new("<stdout>"), e))?;
            }
        }
        Ok(())
    }
}

/// Shortest decimal that parses back to the same `f64`.
pub fn float(v: f64) -> String {
    format!("{v:?}")
}
