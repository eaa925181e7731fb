//! Run reports: stage results, verdicts and their JSON/CSV emission.

use std::path::Path;

use serde::{Deserialize, Serialize};

use super::config::{Command, RunConfig};
use crate::error::{Error, Result};

/// How a verdict compares its measured number.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "rule", rename_all = "snake_case")]
pub enum Rule {
    /// Passes iff `measured < tolerance`.
    Below { tolerance: f64 },
    /// Passes iff `measured > threshold`.
    Above { threshold: f64 },
    /// Passes iff `measured == 0` (an exact identity; `measured` counts defects).
    Exact,
}

/// A pass/fail decision derived from one number of the report.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Verdict {
    /// What is checked.
    pub name: String,
    /// The number the decision is based on.
    pub measured: f64,
    /// The comparison applied to `measured`.
    #[serde(flatten)]
    pub rule: Rule,
    /// Outcome of the comparison.
    pub passed: bool,
}

impl Verdict {
    /// Passes iff `measured < tolerance` (NaN fails).
    pub fn below(name: impl Into<String>, measured: f64, tolerance: f64) -> Self {
        Self {
            name: name.into(),
            measured,
            rule: Rule::Below { tolerance },
            passed: measured < tolerance,
        }
    }

    /// Passes iff `measured > threshold` (NaN fails).
    pub fn above(name: impl Into<String>, measured: f64, threshold: f64) -> Self {
        Self {
            name: name.into(),
            measured,
            rule: Rule::Above { threshold },
            passed: measured > threshold,
        }
    }

    /// Passes iff the defect count is zero.
    pub fn exact(name: impl Into<String>, defects: usize) -> Self {
        Self {
            name: name.into(),
            measured: defects as f64,
            rule: Rule::Exact,
            passed: defects == 0,
        }
    }

    /// Re-derives the outcome from the stored number and rule.
    pub fn recheck(&self) -> bool {
        match self.rule {
            Rule::Below { tolerance } => self.measured < tolerance,
            Rule::Above { threshold } => self.measured > threshold,
            Rule::Exact => self.measured == 0.0,
        }
    }
}

/// Result of one stage of a run, as produced by a module operation.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Stage {
    pub name: String,
    pub result: serde_json::Value,
}

/// The deterministic report of a run. Wall-clock timings are kept out of it (see
/// [`Timings`]) so that identical configurations produce identical bytes.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RunReport {
    pub command: Command,
    /// Echo of the configuration after the command-line overrides.
    pub config: RunConfig,
    /// Stage results in execution order.
    pub stages: Vec<Stage>,
    pub verdicts: Vec<Verdict>,
    /// True iff every verdict passed.
    pub passed: bool,
    /// Name of the sibling file holding the wall-clock timings.
    pub timings_file: String,
}

impl RunReport {
    /// The result of a stage by name.
    pub fn stage(&self, name: &str) -> Option<&serde_json::Value> {
        self.stages.iter().find(|s| s.name == name).map(|s| &s.result)
    }

    /// The verdict of a given name.
    pub fn verdict(&self, name: &str) -> Option<&Verdict> {
        self.verdicts.iter().find(|v| v.name == name)
    }

    /// Pretty JSON with a trailing newline.
    pub fn to_json(&self) -> Result<String> {
        let mut s = serde_json::to_string_pretty(self).map_err(|e| Error::Serialize(e.to_string()))?;
        s.push('\n');
        Ok(s)
    }

    /// Parses a report back from JSON.
    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::Serialize(e.to_string()))
    }
}

/// Wall-clock seconds per stage, written next to the report.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct Timings {
    pub stages: Vec<(String, f64)>,
    pub total: f64,
}

/// Collects stage results, verdicts and timings while a command runs.
#[derive(Debug)]
pub(crate) struct Recorder {
    pub stages: Vec<Stage>,
    pub verdicts: Vec<Verdict>,
    pub timings: Timings,
    pub tables: Vec<(String, Table)>,
}

impl Recorder {
    pub fn new() -> Self {
        Self {
            stages: Vec::new(),
            verdicts: Vec::new(),
            timings: Timings::default(),
            tables: Vec::new(),
        }
    }

    /// Runs a stage, records its serialized result and wall-clock time, and returns it.
    pub fn stage<T: Serialize>(&mut self, name: &str, run: impl FnOnce() -> Result<T>) -> Result<T> {
        let start = std::time::Instant::now();
        let value = run()?;
        let seconds = start.elapsed().as_secs_f64();
        self.timings.stages.push((name.to_string(), seconds));
        self.timings.total += seconds;
        let json = serde_json::to_value(&value).map_err(|e| Error::Serialize(e.to_string()))?;
        self.stages.push(Stage {
            name: name.to_string(),
            result: json,
        });
        Ok(value)
    }

    pub fn verdict(&mut self, v: Verdict) {
        self.verdicts.push(v);
    }

    pub fn finish(self, command: Command, config: RunConfig) -> (RunReport, Timings, Vec<(String, Table)>) {
        let passed = self.verdicts.iter().all(|v| v.passed);
        (
            RunReport {
                command,
                config,
                stages: self.stages,
                verdicts: self.verdicts,
                passed,
                timings_file: TIMINGS_FILE.to_string(),
            },
            self.timings,
            self.tables,
        )
    }
}

/// File name of the report inside the output directory.
pub const REPORT_FILE: &str = "report.json";
/// File name of the timings inside the output directory.
pub const TIMINGS_FILE: &str = "timings.json";
/// Sub-directory of the sweep tables.
pub const SWEEP_DIR: &str = "sweeps";

/// A CSV table with a header row.
#[derive(Clone, Debug, PartialEq)]
pub struct Table {
    pub header: Vec<String>,
    pub rows: Vec<Vec<String>>,
}

impl Table {
    pub fn new(header: &[&str]) -> Self {
        Self {
            header: header.iter().map(|s| s.to_string()).collect(),
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<String>) {
        self.rows.push(row);
    }

    /// Writes the table as CSV.
    pub fn write(&self, path: &Path) -> Result<()> {
        let mut w = csv::Writer::from_path(path).map_err(|e| csv_error(path, e))?;
        w.write_record(&self.header).map_err(|e| csv_error(path, e))?;
        for row in &self.rows {
            w.write_record(row).map_err(|e| csv_error(path, e))?;
        }
        w.flush().map_err(|e| Error::io(path, e))
    }
}

fn csv_error(path: &Path, e: csv::Error) -> Error {
    Error::io(path, std::io::Error::other(e.to_string()))
}
