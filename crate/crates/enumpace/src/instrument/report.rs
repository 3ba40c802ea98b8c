//! Machine-readable run reports.
//!
//! A [`RunReport`] bundles what a run produced (solution count, total
//! cost) with what the instrumentation concluded (fits, bound verdicts,
//! memory profile) into one JSON document. Serialization is deterministic:
//! the same report always renders to the same bytes.

use serde::{Deserialize, Serialize};

use super::bounds::{BoundReport, MemoryProfile};
use super::fit::FitResult;

/// Bumped whenever the report layout changes incompatibly.
pub const SCHEMA_VERSION: &str = "1";

/// 64-bit FNV-1a over `bytes`.
pub fn fnv1a64(bytes: &[u8]) -> u64 {
    let mut hash: u64 = 0xcbf2_9ce4_8422_2325;
    for &byte in bytes {
        hash ^= byte as u64;
        hash = hash.wrapping_mul(0x0000_0100_0000_01b3);
    }
    hash
}

/// Fixed-width hex digest identifying an instance's raw encoding.
pub fn instance_digest(raw: &[u8]) -> String {
    format!("{:016x}", fnv1a64(raw))
}

/// Everything a run leaves behind, ready for serialization.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunReport {
    pub schema_version: String,
    pub problem: String,
    pub instance_digest: String,
    pub n: u64,
    pub k: u64,
    /// Where the full trace was written, when it was persisted.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub trace_csv: Option<String>,
    /// Number of solutions emitted.
    pub solutions: u64,
    pub total_cost: u64,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub fits: Vec<FitResult>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub bounds: Vec<BoundReport>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub memory: Option<MemoryProfile>,
    /// False as soon as any requested bound failed or the run errored.
    pub pass: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
}

impl RunReport {
    /// A passing skeleton for `problem` on the instance encoded by `raw`;
    /// counts, fits and verdicts are filled in by the caller.
    pub fn new(problem: impl Into<String>, raw: &[u8], k: u64, n: u64) -> Self {
        RunReport {
            schema_version: SCHEMA_VERSION.to_string(),
            problem: problem.into(),
            instance_digest: instance_digest(raw),
            n,
            k,
            trace_csv: None,
            solutions: 0,
            total_cost: 0,
            fits: Vec::new(),
            bounds: Vec::new(),
            memory: None,
            pass: true,
            error: None,
        }
    }
}

/// Pretty-printed JSON with a trailing newline.
pub fn report_json(report: &RunReport) -> String {
    let mut text =
        serde_json::to_string_pretty(report).expect("report serialization cannot fail");
    text.push('\n');
    text
}
