use mdim_core::analysis::{ChainReport, CoincidenceReport, GridFamilyReport, SlopeReport};
use mdim_core::entropy::EntropyEstimate;
use serde::{Deserialize, Serialize};

use crate::config::{Command, SCHEMA_VERSION};

/// One computed value with everything needed to reproduce it.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ResultRecord {
    pub config_digest: String,
    pub version: String,
    /// `QUANTITY(eps=...)`.
    pub label: String,
    pub units: String,
    /// Quantity id, parameters, finite trace, value, bounds and mode.
    pub estimate: EntropyEstimate,
}

impl ResultRecord {
    pub fn new(config_digest: &str, estimate: EntropyEstimate) -> Self {
        ResultRecord {
            config_digest: config_digest.into(),
            version: mdim_core::VERSION.into(),
            label: format!("{}(eps={})", estimate.quantity, estimate.eps),
            units: "nats".into(),
            estimate,
        }
    }
}

/// A work item that errored.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ItemError {
    pub item: String,
    /// `cap`, `bracket` or `computation`.
    pub kind: String,
    pub message: String,
}

/// Contents of `results.json`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ResultsFile {
    pub schema_version: u32,
    pub name: String,
    pub command: Command,
    pub config_digest: String,
    pub version: String,
    pub records: Vec<ResultRecord>,
    pub chains: Vec<ChainReport>,
    pub slopes: Vec<SlopeReport>,
    pub coincidence: Option<CoincidenceReport>,
    pub grid_family: Option<GridFamilyReport>,
    /// Failed chain links, by name.
    pub failures: Vec<String>,
    pub errors: Vec<ItemError>,
}

impl ResultsFile {
    pub fn empty(name: &str, command: Command, config_digest: &str) -> Self {
        ResultsFile {
            schema_version: SCHEMA_VERSION,
            name: name.into(),
            command,
            config_digest: config_digest.into(),
            version: mdim_core::VERSION.into(),
            records: Vec::new(),
            chains: Vec::new(),
            slopes: Vec::new(),
            coincidence: None,
            grid_family: None,
            failures: Vec::new(),
            errors: Vec::new(),
        }
    }

    pub fn to_json(&self) -> Vec<u8> {
        let mut out = serde_json::to_vec_pretty(self).expect("results serialize");
        out.push(b'\n');
        out
    }

    pub fn from_json(bytes: &[u8]) -> serde_json::Result<Self> {
        serde_json::from_slice(bytes)
    }
}

/// Per-item wall times; kept out of `results.json`.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Timings {
    pub threads: usize,
    pub total_seconds: f64,
    pub items: Vec<(String, f64)>,
}
