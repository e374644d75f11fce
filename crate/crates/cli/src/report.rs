//! JSON run reports.

use entfilter_core::scan::{ScanPoint, SliceAxis};
use entfilter_core::Mat2;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

pub const TOOL_VERSION: &str = concat!("entfilter ", env!("CARGO_PKG_VERSION"));

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunReport {
    /// SHA-256 of the state file, or of the canonical JSON of a built-in state.
    pub input_digest: String,
    pub command: String,
    pub result: Outcome,
    pub tool_version: String,
}

impl RunReport {
    pub fn new(input_digest: String, command: &str, result: Outcome) -> Self {
        Self {
            input_digest,
            command: command.to_string(),
            result,
            tool_version: TOOL_VERSION.to_string(),
        }
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report serializes");
        s.push('\n');
        s
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Outcome {
    Concurrence(ConcurrenceOutcome),
    Maximize(MaximizeOutcome),
    Scan(ScanOutcome),
    Search(SearchOutcome),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConcurrenceOutcome {
    pub concurrence: f64,
    /// Spectrum of `rho flip(rho)` for the normalized state, descending.
    pub xi: [f64; 4],
    /// Trace of the input operator.
    pub weight: f64,
    pub separable: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MaximizeOutcome {
    pub initial_concurrence: f64,
    pub final_concurrence: f64,
    pub iterations: usize,
    pub joint_steps: usize,
    /// Filter on qubit 1, scaled to unit operator norm.
    pub q1: Mat2,
    /// Filter on qubit 2, scaled to unit operator norm.
    pub q2: Mat2,
    pub success_probability: f64,
    pub marginal_deviation: [f64; 2],
    pub singular_limit: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScanOutcome {
    pub a1: f64,
    pub a2: f64,
    pub points: usize,
    pub slice: Option<SliceAxis>,
    pub argmax: ScanPoint,
    pub refined_argmax: Option<ScanPoint>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SearchOutcome {
    pub samples: usize,
    pub seed: u64,
    pub best_concurrence: f64,
    pub best_index: usize,
    pub q1: Mat2,
    pub q2: Mat2,
}

pub fn sha256_hex(bytes: &[u8]) -> String {
    format!("{:x}", Sha256::digest(bytes))
}
