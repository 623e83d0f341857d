//! Run manifests: one JSON record per output directory tying together the
//! command, its configuration, input digests, and produced files.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use serde::Serialize;
use sha2::{Digest, Sha256};

/// Everything needed to reproduce a run; deliberately free of timestamps.
#[derive(Debug, Serialize)]
pub struct RunManifest {
    pub command: String,
    pub config: BTreeMap<String, String>,
    pub engine_version: String,
    /// Input path -> SHA-256 of its bytes.
    pub inputs: BTreeMap<String, String>,
    /// File names written into the output directory, sorted.
    pub outputs: Vec<String>,
    pub seed: u64,
}

impl RunManifest {
    pub fn new(command: &str, seed: u64) -> Self {
        Self {
            command: command.to_string(),
            config: BTreeMap::new(),
            engine_version: env!("CARGO_PKG_VERSION").to_string(),
            inputs: BTreeMap::new(),
            outputs: Vec::new(),
            seed,
        }
    }

    pub fn config_kv(&mut self, key: &str, value: impl ToString) {
        self.config.insert(key.to_string(), value.to_string());
    }

    pub fn input(&mut self, path: &Path) -> anyhow::Result<()> {
        self.inputs
            .insert(path.display().to_string(), sha256_hex(path)?);
        Ok(())
    }

    pub fn output(&mut self, name: &str) {
        self.outputs.push(name.to_string());
    }

    pub fn write(mut self, out_dir: &Path) -> anyhow::Result<PathBuf> {
        self.outputs.sort();
        let path = out_dir.join("manifest.json");
        let mut text = serde_json::to_string_pretty(&self).map_err(parity_core::Error::from)?;
        text.push('\n');
        std::fs::write(&path, text).map_err(parity_core::Error::from)?;
        Ok(path)
    }
}

pub fn sha256_hex(path: &Path) -> anyhow::Result<String> {
    let bytes = std::fs::read(path).map_err(parity_core::Error::from)?;
    let mut hasher = Sha256::new();
    hasher.update(&bytes);
    let digest = hasher.finalize();
    Ok(digest.iter().map(|b| format!("{b:02x}")).collect())
}
