use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::error::{Error, Result};

/// Provenance written next to every output file.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RunManifest {
    pub tool_version: String,
    pub command: String,
    /// Flat settings after merging the config file and the command line.
    /// Feeding them back through `--config` repeats the run.
    pub settings: BTreeMap<String, String>,
    /// Typed configuration handed to the experiment driver.
    pub config: serde_json::Value,
    pub seed: u64,
    pub started: String,
    pub finished: String,
    pub outputs: Vec<OutputHash>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct OutputHash {
    pub path: PathBuf,
    /// SHA-256 over `blob <len>\0` followed by the file bytes.
    pub sha256: String,
}

/// Git-style content hash.
pub fn content_hash(bytes: &[u8]) -> String {
    let mut hasher = Sha256::new();
    hasher.update(format!("blob {}\0", bytes.len()).as_bytes());
    hasher.update(bytes);
    hasher.finalize().iter().map(|b| format!("{b:02x}")).collect()
}

/// `<output>.manifest.json`.
pub fn manifest_path_for(output: &Path) -> PathBuf {
    let mut name = output.as_os_str().to_owned();
    name.push(".manifest.json");
    PathBuf::from(name)
}

impl RunManifest {
    pub fn write(&self, path: &Path) -> Result<()> {
        let text = super::records::to_json(self)?;
        std::fs::write(path, text).map_err(|e| Error::io(path, e))
    }

    pub fn read(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        Ok(serde_json::from_str(&text)?)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn hash_matches_git_blob_convention() {
        // `printf 'hello\n' | git hash-object --stdin` style input, SHA-256 flavour
        let h = content_hash(b"hello\n");
        assert_eq!(h.len(), 64);
        assert_ne!(h, content_hash(b"hello"));
        assert_eq!(
            content_hash(b""),
            "473a0f4c3be8a93681a267e3b1e9a7dcda1185436fe141f7749120a303721813"
        );
    }

    #[test]
    fn manifest_name_appends_suffix() {
        assert_eq!(manifest_path_for(Path::new("out/a.csv")), PathBuf::from("out/a.csv.manifest.json"));
    }
}
