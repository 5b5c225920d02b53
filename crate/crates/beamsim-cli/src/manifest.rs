//! Run manifest: tool version, expanded config, constants, and output
//! checksums, written alongside every command's outputs.

use std::collections::BTreeMap;

use serde::Serialize;
use sha2::{Digest, Sha256};

use crate::config::ScenarioConfig;
use crate::errors::CliError;
use crate::output::{hex_string, OutputFile, OutputWriter};

#[derive(Debug, Clone, Serialize)]
pub struct PhysicalConstants {
    pub speed_of_light_m_per_s: f64,
}

#[derive(Debug, Serialize)]
pub struct RunManifest {
    pub tool_version: &'static str,
    pub command: &'static str,
    pub model: &'static str,
    pub seed: u64,
    /// SHA-256 of the fully expanded config JSON below.
    pub config_digest: String,
    pub physical_constants: PhysicalConstants,
    pub expanded_config: ScenarioConfig,
    /// Per-command details (resolved defaults, derived instants, digests).
    pub notes: BTreeMap<String, serde_json::Value>,
    pub outputs: Vec<OutputFile>,
}

impl RunManifest {
    pub fn new(
        command: &'static str,
        model: &'static str,
        seed: u64,
        expanded_config: ScenarioConfig,
    ) -> Result<Self, CliError> {
        let canonical = serde_json::to_string(&expanded_config)
            .map_err(|e| CliError::Runtime(format!("manifest serialization: {e}")))?;
        let digest = Sha256::digest(canonical.as_bytes());
        Ok(Self {
            tool_version: env!("CARGO_PKG_VERSION"),
            command,
            model,
            seed,
            config_digest: format!("sha256:{}", hex_string(&digest)),
            physical_constants: PhysicalConstants {
                speed_of_light_m_per_s: beamsim::SPEED_OF_LIGHT,
            },
            expanded_config,
            notes: BTreeMap::new(),
            outputs: Vec::new(),
        })
    }

    pub fn note(&mut self, key: &str, value: impl Serialize) -> Result<(), CliError> {
        let value = serde_json::to_value(value)
            .map_err(|e| CliError::Runtime(format!("manifest note '{key}': {e}")))?;
        self.notes.insert(key.to_string(), value);
        Ok(())
    }

    /// Records the emitted files and writes `<prefix>.manifest.json`.
    pub fn write(mut self, writer: &mut OutputWriter) -> Result<(), CliError> {
        self.outputs = writer.files().to_vec();
        let mut text = serde_json::to_string_pretty(&self)
            .map_err(|e| CliError::Runtime(format!("manifest serialization: {e}")))?;
        text.push('\n');
        writer.write("manifest.json", &text)?;
        Ok(())
    }
}
