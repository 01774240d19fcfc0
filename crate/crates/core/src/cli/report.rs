//! The JSON report written by every task.

use std::time::Duration;

use serde::Serialize;
use serde_json::Value;

use super::config::{ConfigEcho, Task};
use crate::error::{Error, Result};

pub const TOOL: &str = "whittaker-lab";
pub const VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TimingEntry {
    pub section: String,
    pub millis: u64,
}

/// Wall-clock data; the only part of a report that varies between runs.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct Timing {
    pub total_millis: u64,
    pub sections: Vec<TimingEntry>,
}

impl Timing {
    pub fn record(&mut self, section: impl Into<String>, elapsed: Duration) {
        self.sections.push(TimingEntry {
            section: section.into(),
            millis: millis(elapsed),
        });
    }
}

pub(crate) fn millis(d: Duration) -> u64 {
    d.as_millis().try_into().unwrap_or(u64::MAX)
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Report {
    pub tool: &'static str,
    pub version: &'static str,
    pub task: Task,
    pub config: ConfigEcho,
    pub passed: bool,
    pub result: Value,
    pub timing: Timing,
}

impl Report {
    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("reports serialize");
        s.push('\n');
        s
    }

    /// The report with its timing section cleared.
    pub fn without_timing(&self) -> Report {
        Report {
            timing: Timing::default(),
            ..self.clone()
        }
    }
}

pub(crate) fn to_value<T: Serialize>(x: &T) -> Result<Value> {
    serde_json::to_value(x).map_err(|e| Error::Config(format!("report serialization: {e}")))
}
