//! Pass/fail record of one suite run.

use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum StatisticName {
    Ks,
    Chi2,
    MaxResidual,
    AbsError,
}

impl StatisticName {
    pub fn as_str(self) -> &'static str {
        match self {
            Self::Ks => "ks",
            Self::Chi2 => "chi2",
            Self::MaxResidual => "max_residual",
            Self::AbsError => "abs_error",
        }
    }
}

/// `pass` is `statistic_value <= threshold`; a NaN statistic fails.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct VerificationReport {
    pub suite: String,
    pub params: BTreeMap<String, f64>,
    pub statistic_name: StatisticName,
    pub statistic_value: f64,
    pub threshold: f64,
    pub pass: bool,
    pub runtime_seconds: f64,
}

impl VerificationReport {
    pub fn new(
        suite: impl Into<String>,
        params: BTreeMap<String, f64>,
        statistic_name: StatisticName,
        statistic_value: f64,
        threshold: f64,
        runtime_seconds: f64,
    ) -> Self {
        Self {
            suite: suite.into(),
            params,
            statistic_name,
            statistic_value,
            threshold,
            pass: statistic_value <= threshold,
            runtime_seconds,
        }
    }

    /// One human-readable line, `PASS`/`FAIL` first.
    pub fn summary(&self) -> String {
        format!(
            "{} {}: {} = {:.6e} (threshold {:.3e}, {:.2} s)",
            if self.pass { "PASS" } else { "FAIL" },
            self.suite,
            self.statistic_name.as_str(),
            self.statistic_value,
            self.threshold,
            self.runtime_seconds
        )
    }
}

/// JSON Schema of the serialized report.
pub const REPORT_SCHEMA: &str = r#"{
  "$schema": "https://json-schema.org/draft/2020-12/schema",
  "title": "VerificationReport",
  "type": "object",
  "additionalProperties": false,
  "required": ["suite", "params", "statistic_name", "statistic_value", "threshold", "pass", "runtime_seconds"],
  "properties": {
    "suite": {"type": "string"},
    "params": {"type": "object", "additionalProperties": {"type": "number"}},
    "statistic_name": {"enum": ["ks", "chi2", "max_residual", "abs_error"]},
    "statistic_value": {"type": "number"},
    "threshold": {"type": "number"},
    "pass": {"type": "boolean"},
    "runtime_seconds": {"type": "number", "minimum": 0}
  }
}"#;

/// Checks a JSON value against [`REPORT_SCHEMA`] and the pass rule.
pub fn validate_report_json(v: &serde_json::Value) -> std::result::Result<(), String> {
    const KEYS: [&str; 7] = [
        "suite",
        "params",
        "statistic_name",
        "statistic_value",
        "threshold",
        "pass",
        "runtime_seconds",
    ];
    let obj = v.as_object().ok_or("report is not an object")?;
    for k in obj.keys() {
        if !KEYS.contains(&k.as_str()) {
            return Err(format!("unexpected field `{k}`"));
        }
    }
    for k in KEYS {
        if !obj.contains_key(k) {
            return Err(format!("missing field `{k}`"));
        }
    }
    obj["suite"].as_str().ok_or("suite must be a string")?;
    let params = obj["params"]
        .as_object()
        .ok_or("params must be an object")?;
    if let Some((k, _)) = params.iter().find(|(_, v)| !v.is_number()) {
        return Err(format!("param `{k}` is not a number"));
    }
    let name = obj["statistic_name"]
        .as_str()
        .ok_or("statistic_name must be a string")?;
    if !["ks", "chi2", "max_residual", "abs_error"].contains(&name) {
        return Err(format!("unknown statistic_name `{name}`"));
    }
    let value = obj["statistic_value"]
        .as_f64()
        .ok_or("statistic_value must be a number")?;
    let threshold = obj["threshold"]
        .as_f64()
        .ok_or("threshold must be a number")?;
    let pass = obj["pass"].as_bool().ok_or("pass must be a boolean")?;
    let runtime = obj["runtime_seconds"]
        .as_f64()
        .ok_or("runtime_seconds must be a number")?;
    if runtime < 0.0 {
        return Err("runtime_seconds is negative".into());
    }
    if pass != (value <= threshold) {
        return Err("pass disagrees with statistic_value <= threshold".into());
    }
    Ok(())
}
