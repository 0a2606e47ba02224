//! Run manifests: command, input digest, options, outputs and residuals.

use std::collections::BTreeMap;
use std::path::Path;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::error::Result;

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct RunManifest {
    pub command: String,
    /// SHA-256 over the input files, in argument order.
    pub input_digest: String,
    pub options: BTreeMap<String, String>,
    /// Output file names mapped to the SHA-256 of their contents.
    pub outputs: BTreeMap<String, String>,
    pub residuals: BTreeMap<String, f64>,
}

pub fn sha256_hex(bytes: &[u8]) -> String {
    hex::encode(Sha256::digest(bytes))
}

impl RunManifest {
    pub fn new(command: &str) -> Self {
        Self {
            command: command.to_string(),
            input_digest: sha256_hex(b""),
            ..Self::default()
        }
    }

    /// Digest of the concatenated contents of `paths`, each prefixed by
    /// its length so that file boundaries count.
    pub fn digest_inputs(&mut self, paths: &[&Path]) -> Result<()> {
        let mut h = Sha256::new();
        for p in paths {
            let bytes = std::fs::read(p)?;
            h.update((bytes.len() as u64).to_le_bytes());
            h.update(&bytes);
        }
        self.input_digest = hex::encode(h.finalize());
        Ok(())
    }

    /// Records an output by file name (not full path) and content digest.
    pub fn add_output(&mut self, path: &Path, bytes: &[u8]) {
        let name = path
            .file_name()
            .map(|s| s.to_string_lossy().into_owned())
            .unwrap_or_else(|| path.display().to_string());
        self.outputs.insert(name, sha256_hex(bytes));
    }
}
