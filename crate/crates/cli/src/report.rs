//! Versioned JSON reports and the tolerance profile.

use anyhow::{bail, Result};
use serde_json::{json, Value};

pub const SCHEMA_VERSION: u32 = 1;
pub const TOLERANCE_ENV: &str = "LIFT_TOLERANCE_PROFILE";

#[derive(Clone, Debug, PartialEq)]
pub struct Outcome {
    pub pass: bool,
    pub body: Body,
}

#[derive(Clone, Debug, PartialEq)]
pub enum Body {
    Report(Value),
    Table(String),
}

impl Outcome {
    pub fn new(command: &str, inputs: Value, results: Value, pass: bool) -> Self {
        let report = json!({
            "schema": SCHEMA_VERSION,
            "command": command,
            "inputs": inputs,
            "results": results,
            "pass": pass,
        });
        Self { pass, body: Body::Report(report) }
    }

    pub fn table(csv: String) -> Self {
        Self { pass: true, body: Body::Table(csv) }
    }

    pub fn report(&self) -> Option<&Value> {
        match &self.body {
            Body::Report(v) => Some(v),
            Body::Table(_) => None,
        }
    }

    /// Keys are sorted, so identical inputs give byte-identical output.
    pub fn render(&self) -> String {
        match &self.body {
            Body::Report(v) => {
                let mut s = serde_json::to_string_pretty(v).expect("JSON values serialize");
                s.push('\n');
                s
            }
            Body::Table(t) => t.clone(),
        }
    }
}

/// Default tolerances for the numeric checks.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Tolerances {
    pub emot: f64,
    pub resummation: f64,
    pub structural: f64,
    pub automorphy: f64,
}

impl Tolerances {
    pub const DEFAULT: Self = Self { emot: 1e-8, resummation: 1e-9, structural: 1e-9, automorphy: 1e-4 };

    pub fn profile(name: &str) -> Result<Self> {
        let scale = match name {
            "default" => 1.0,
            "strict" => 1e-2,
            "loose" => 1e2,
            other => bail!("unknown tolerance profile '{other}' (expected default, strict or loose)"),
        };
        let d = Self::DEFAULT;
        Ok(Self {
            emot: d.emot * scale,
            resummation: d.resummation * scale,
            structural: d.structural * scale,
            automorphy: d.automorphy * scale,
        })
    }

    /// Reads [`TOLERANCE_ENV`]; unset means `default`.
    pub fn from_env() -> Result<Self> {
        match std::env::var(TOLERANCE_ENV) {
            Ok(v) => Self::profile(v.trim()),
            Err(_) => Ok(Self::DEFAULT),
        }
    }
}
