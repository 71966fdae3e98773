//! Structured run reports. Reports are deterministic for a fixed seed:
//! the only wall-clock data lives in the per-item `millis` field, and
//! [`RunReport::canonical_json`] strips it for byte comparisons.

use serde::{Deserialize, Serialize};

pub const REPORT_SCHEMA: u32 = 1;

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct ReportItem {
    pub name: String,
    /// Pass/fail when the item is a check; None for plain measurements.
    pub pass: Option<bool>,
    /// Hard items gate the process exit code.
    pub hard: bool,
    pub data: serde_json::Value,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub millis: Option<f64>,
}

impl ReportItem {
    pub fn check(name: impl Into<String>, pass: bool, hard: bool) -> Self {
        ReportItem {
            name: name.into(),
            pass: Some(pass),
            hard,
            data: serde_json::Value::Null,
            millis: None,
        }
    }

    pub fn measurement(name: impl Into<String>, data: serde_json::Value) -> Self {
        ReportItem {
            name: name.into(),
            pass: None,
            hard: false,
            data,
            millis: None,
        }
    }

    pub fn with_data(mut self, data: serde_json::Value) -> Self {
        self.data = data;
        self
    }

    pub fn with_millis(mut self, millis: f64) -> Self {
        self.millis = Some(millis);
        self
    }
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct RunReport {
    pub schema: u32,
    pub suite: String,
    pub seed: u64,
    pub items: Vec<ReportItem>,
}

impl RunReport {
    pub fn new(suite: impl Into<String>, seed: u64) -> Self {
        RunReport {
            schema: REPORT_SCHEMA,
            suite: suite.into(),
            seed,
            items: Vec::new(),
        }
    }

    pub fn push(&mut self, item: ReportItem) {
        self.items.push(item);
    }

    pub fn all_hard_pass(&self) -> bool {
        self.items
            .iter()
            .filter(|i| i.hard)
            .all(|i| i.pass == Some(true))
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    /// Serialization with timing fields removed; byte-identical across
    /// repeated runs with the same seed.
    pub fn canonical_json(&self) -> String {
        let mut clone = self.clone();
        for item in clone.items.iter_mut() {
            item.millis = None;
        }
        serde_json::to_string_pretty(&clone).expect("report serializes")
    }
}

/// A CSV series emitted next to a report.
#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct CsvSeries {
    pub name: String,
    pub header: Vec<String>,
    pub rows: Vec<Vec<String>>,
}

impl CsvSeries {
    pub fn new(name: impl Into<String>, header: &[&str]) -> Self {
        CsvSeries {
            name: name.into(),
            header: header.iter().map(|s| s.to_string()).collect(),
            rows: Vec::new(),
        }
    }

    pub fn push_row(&mut self, row: Vec<String>) {
        self.rows.push(row);
    }

    pub fn to_csv(&self) -> String {
        let mut out = self.header.join(",");
        out.push('\n');
        for row in &self.rows {
            out.push_str(&row.join(","));
            out.push('\n');
        }
        out
    }
}
