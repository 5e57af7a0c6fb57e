//! Run manifest written next to every output.

use std::path::Path;

use serde::Serialize;
use serde_json::Value;

/// Everything needed to repeat a run. Holds no timestamps or absolute
/// output locations, so identical runs produce identical bytes.
#[derive(Debug, Serialize)]
pub struct RunManifest {
    pub command: String,
    pub params: Value,
    pub input_paths: Vec<String>,
    /// Relative to the output directory.
    pub output_paths: Vec<String>,
    pub seed: Option<u64>,
    pub tool_version: String,
}

impl RunManifest {
    pub fn new(command: &str, params: Value, inputs: Vec<&Path>, seed: Option<u64>) -> Self {
        RunManifest {
            command: command.to_string(),
            params,
            input_paths: inputs.iter().map(|p| p.display().to_string()).collect(),
            output_paths: Vec::new(),
            seed,
            tool_version: env!("CARGO_PKG_VERSION").to_string(),
        }
    }
}
