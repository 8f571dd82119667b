//! Outcome of a range verification campaign.

use serde::{Deserialize, Serialize};

pub const REPORT_SCHEMA_VERSION: u32 = 1;

/// A single violated check: the integer that failed and what was expected.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Failure {
    pub n: u64,
    pub detail: String,
}

/// An extremal witness collected during a scan, e.g. the argmax of a ratio.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Extremal {
    pub name: String,
    pub n: u64,
    pub value: f64,
}

/// Report of a campaign over an integer range.
///
/// `failures` empty means the campaign passed. Extremal entries record scan
/// statistics (minimum slack, maximum witness index and similar) so that a
/// passing run still documents how close it came to the asserted bounds.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VerifyReport {
    pub schema_version: u32,
    pub campaign: String,
    pub range: (u64, u64),
    pub failures: Vec<Failure>,
    pub extremal: Vec<Extremal>,
    pub wall_time_seconds: f64,
    pub config_snapshot: String,
}

impl VerifyReport {
    pub fn new(campaign: impl Into<String>, range: (u64, u64)) -> Self {
        Self {
            schema_version: REPORT_SCHEMA_VERSION,
            campaign: campaign.into(),
            range,
            failures: Vec::new(),
            extremal: Vec::new(),
            wall_time_seconds: 0.0,
            config_snapshot: String::new(),
        }
    }

    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }

    pub fn push_failure(&mut self, n: u64, detail: impl Into<String>) {
        self.failures.push(Failure { n, detail: detail.into() });
    }

    pub fn push_extremal(&mut self, name: impl Into<String>, n: u64, value: f64) {
        self.extremal.push(Extremal { name: name.into(), n, value });
    }

    pub fn extremal_value(&self, name: &str) -> Option<&Extremal> {
        self.extremal.iter().find(|e| e.name == name)
    }
}
