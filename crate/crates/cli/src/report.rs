use std::collections::BTreeMap;

use serde_json::{json, Value};

use crate::config::ExperimentConfig;

/// One verification inside a run.
#[derive(Debug, Clone, PartialEq)]
pub struct Check {
    pub name: String,
    pub passed: bool,
}

/// Result of a command: the JSON report plus its checks.
#[derive(Debug, Clone)]
pub struct Report {
    pub command: String,
    pub config: ExperimentConfig,
    pub results: Value,
    pub checks: Vec<Check>,
    pub seconds: f64,
    /// Extra artifacts to write next to the report (for example DOT).
    pub dot: Option<String>,
    /// Named JSON side outputs, such as `generators` or `certificate`.
    pub attachments: BTreeMap<String, Value>,
}

impl Report {
    pub fn new(command: &str, config: ExperimentConfig) -> Self {
        Report { command: command.into(), config, results: json!({}), checks: Vec::new(), seconds: 0.0, dot: None, attachments: BTreeMap::new() }
    }

    pub fn check(&mut self, name: impl Into<String>, passed: bool) {
        self.checks.push(Check { name: name.into(), passed });
    }

    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    /// Exit status: 0 when every check passed, 2 otherwise.
    pub fn exit_code(&self) -> i32 {
        if self.passed() {
            0
        } else {
            2
        }
    }

    pub fn to_json(&self) -> Value {
        let mut config = serde_json::to_value(&self.config).expect("config serializes");
        config["command"] = json!(self.command);
        json!({
            "artifact": { "name": "opgraph", "version": env!("CARGO_PKG_VERSION") },
            "command": self.command,
            "config": config,
            "results": self.results,
            "checks": self.checks.iter().map(|c| json!({ "name": c.name, "passed": c.passed })).collect::<Vec<_>>(),
            "status": if self.passed() { "pass" } else { "fail" },
            "timing": { "seconds": self.seconds },
        })
    }

    /// The report without its timing, for byte-level comparison of runs.
    pub fn deterministic_json(&self) -> String {
        let mut v = self.to_json();
        v.as_object_mut().expect("object").remove("timing");
        serde_json::to_string_pretty(&v).expect("json")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn status_follows_checks() {
        let mut r = Report::new("enumerate", ExperimentConfig::default());
        r.check("a", true);
        assert_eq!(r.exit_code(), 0);
        r.check("b", false);
        assert_eq!(r.exit_code(), 2);
        assert_eq!(r.to_json()["status"], "fail");
        assert!(!r.deterministic_json().contains("timing"));
        assert_eq!(r.to_json()["config"]["command"], "enumerate");
    }
}
