//! Versioned, citation-bearing run reports.
//!
//! A report is deterministic in everything except `timestamp`, which
//! comparisons and [`Report::comparable_json`] leave out.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::time::{SystemTime, UNIX_EPOCH};

use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::error::{Error, Result};
use crate::search::default_max_states;

pub const REPORT_SCHEMA: &str = "rpt-1";

pub const DEFAULT_SEED: u64 = 20_240_229;
pub const DEFAULT_MAX_DEPTH: usize = 25;
pub const DEFAULT_ENGINE: &str = "bfs";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum OutputFormat {
    #[default]
    Json,
    Text,
}

/// Everything a run depends on. Echoed verbatim into its report.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RunConfig {
    pub command: String,
    pub params: BTreeMap<String, Value>,
    pub format: OutputFormat,
    pub seed: u64,
    pub engine: String,
    pub strategy: Option<String>,
    pub max_depth: usize,
    pub max_states: usize,
}

impl RunConfig {
    /// Defaults: json output, seed [`DEFAULT_SEED`], engine "bfs", no
    /// strategy override, depth [`DEFAULT_MAX_DEPTH`], state budget from
    /// [`default_max_states`].
    pub fn new(command: impl Into<String>) -> Self {
        RunConfig {
            command: command.into(),
            params: BTreeMap::new(),
            format: OutputFormat::Json,
            seed: DEFAULT_SEED,
            engine: DEFAULT_ENGINE.to_string(),
            strategy: None,
            max_depth: DEFAULT_MAX_DEPTH,
            max_states: default_max_states(),
        }
    }

    pub fn param(mut self, key: &str, value: impl Serialize) -> Self {
        let v = serde_json::to_value(value).unwrap_or(Value::Null);
        self.params.insert(key.to_string(), v);
        self
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Status {
    #[serde(rename = "pass")]
    Pass,
    #[serde(rename = "fail")]
    Fail,
    #[serde(rename = "yes")]
    Yes,
    #[serde(rename = "notGuaranteed")]
    NotGuaranteed,
    /// The oracle ran out of depth or budget.
    #[serde(rename = "inconclusive")]
    Inconclusive,
}

impl Status {
    /// 0 success, 2 failed internal check, 3 negative verdict. Input
    /// errors (1) never produce a report.
    pub fn exit_code(self) -> i32 {
        match self {
            Status::Pass | Status::Yes => 0,
            Status::Fail => 2,
            Status::NotGuaranteed | Status::Inconclusive => 3,
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Status::Pass => "pass",
            Status::Fail => "fail",
            Status::Yes => "yes",
            Status::NotGuaranteed => "notGuaranteed",
            Status::Inconclusive => "inconclusive",
        }
    }
}

pub fn error_exit_code(e: &Error) -> i32 {
    if e.is_internal() {
        2
    } else {
        1
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub schema: String,
    pub command: String,
    pub config: RunConfig,
    pub status: Status,
    pub citations: Vec<String>,
    pub body: Value,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub timestamp: Option<u64>,
}

impl Report {
    pub fn new(config: &RunConfig, status: Status, citations: &[&str], body: impl Serialize) -> Result<Report> {
        let body = serde_json::to_value(body).map_err(|e| Error::Schema(e.to_string()))?;
        let mut cites: Vec<String> = Vec::new();
        for c in citations {
            if !cites.iter().any(|x| x == c) {
                cites.push((*c).to_string());
            }
        }
        Ok(Report {
            schema: REPORT_SCHEMA.to_string(),
            command: config.command.clone(),
            config: config.clone(),
            status,
            citations: cites,
            body,
            timestamp: None,
        })
    }

    /// Seconds since the Unix epoch.
    pub fn stamped(mut self) -> Self {
        self.timestamp = SystemTime::now().duration_since(UNIX_EPOCH).ok().map(|d| d.as_secs());
        self
    }

    pub fn exit_code(&self) -> i32 {
        self.status.exit_code()
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("reports always serialize")
    }

    /// Serialization with the timestamp removed.
    pub fn comparable_json(&self) -> String {
        Report { timestamp: None, ..self.clone() }.to_json()
    }

    pub fn same_content(&self, other: &Report) -> bool {
        self.comparable_json() == other.comparable_json()
    }

    pub fn from_json(text: &str) -> Result<Report> {
        let r: Report = serde_json::from_str(text).map_err(|e| Error::Schema(e.to_string()))?;
        if r.schema != REPORT_SCHEMA {
            return Err(Error::Schema(format!("expected schema {REPORT_SCHEMA}, found {}", r.schema)));
        }
        Ok(r)
    }

    pub fn render(&self, format: OutputFormat) -> String {
        match format {
            OutputFormat::Json => self.to_json(),
            OutputFormat::Text => self.to_text(),
        }
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "{} [{}]: {}", self.command, self.schema, self.status.as_str());
        for c in &self.citations {
            let _ = writeln!(out, "  cite: {c}");
        }
        let cfg = serde_json::to_value(&self.config).unwrap_or(Value::Null);
        text_lines(&mut out, "config", &cfg);
        text_lines(&mut out, "", &self.body);
        if let Some(t) = self.timestamp {
            let _ = writeln!(out, "timestamp: {t}");
        }
        out
    }
}

fn text_lines(out: &mut String, path: &str, v: &Value) {
    match v {
        Value::Object(map) => {
            for (k, x) in map {
                let p = if path.is_empty() { k.clone() } else { format!("{path}.{k}") };
                text_lines(out, &p, x);
            }
        }
        Value::Array(items) if items.iter().any(|x| x.is_object()) => {
            for (i, x) in items.iter().enumerate() {
                text_lines(out, &format!("{path}[{i}]"), x);
            }
        }
        _ => {
            let _ = writeln!(out, "{path}: {v}");
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn timestamp_is_not_compared() {
        let cfg = RunConfig::new("x").param("n", 3);
        let a = Report::new(&cfg, Status::Pass, &["t", "t"], serde_json::json!({"k": 1})).unwrap();
        let b = a.clone().stamped();
        assert!(a.same_content(&b));
        assert_eq!(a.citations, vec!["t"]);
        let back = Report::from_json(&b.to_json()).unwrap();
        assert_eq!(back, b);
    }

    #[test]
    fn exit_codes() {
        assert_eq!(Status::Yes.exit_code(), 0);
        assert_eq!(Status::Fail.exit_code(), 2);
        assert_eq!(Status::NotGuaranteed.exit_code(), 3);
        assert_eq!(error_exit_code(&Error::invalid("x")), 1);
        assert_eq!(error_exit_code(&Error::assertion("x")), 2);
    }

    #[test]
    fn text_flattens_nested_bodies() {
        let cfg = RunConfig::new("x");
        let r = Report::new(&cfg, Status::Pass, &[], serde_json::json!({"a": {"b": [1, 2]}, "c": [{"d": 1}]})).unwrap();
        let t = r.to_text();
        assert!(t.contains("a.b: [1,2]"));
        assert!(t.contains("c[0].d: 1"));
    }

    #[test]
    fn wrong_schema_is_rejected() {
        let cfg = RunConfig::new("x");
        let mut r = Report::new(&cfg, Status::Pass, &[], 0).unwrap();
        r.schema = "rpt-0".into();
        assert!(matches!(Report::from_json(&r.to_json()), Err(Error::Schema(_))));
    }
}
