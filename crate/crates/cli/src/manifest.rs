//! Run manifests: the reproducibility record embedded in every output
//! document.

use serde::Serialize;
use std::path::Path;

/// What produced an output file: the command, its inputs, the full
/// parameter echo, and the tool version. The timestamp is omitted for
/// outputs that promise byte-identical reproduction (the model export).
#[derive(Debug, Clone, Serialize)]
pub struct RunManifest {
    pub command: String,
    pub inputs: Vec<String>,
    pub parameters: serde_json::Value,
    pub tool_version: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub timestamp: Option<String>,
}

impl RunManifest {
    /// Timestamped manifest for ordinary outputs.
    pub fn new(command: &str, inputs: &[&Path], parameters: serde_json::Value) -> Self {
        let mut manifest = Self::stable(command, inputs, parameters);
        manifest.timestamp = Some(chrono::Utc::now().to_rfc3339());
        manifest
    }

    /// Timestamp-free manifest for byte-stable outputs: rerunning the same
    /// command on the same inputs reproduces the file exactly.
    pub fn stable(command: &str, inputs: &[&Path], parameters: serde_json::Value) -> Self {
        RunManifest {
            command: command.to_owned(),
            inputs: inputs.iter().map(|p| p.display().to_string()).collect(),
            parameters,
            tool_version: env!("CARGO_PKG_VERSION").to_owned(),
            timestamp: None,
        }
    }

    /// Single-line JSON rendering, for comment headers.
    pub fn to_json_line(&self) -> String {
        serde_json::to_string(self).expect("manifest serialization cannot fail")
    }
}
