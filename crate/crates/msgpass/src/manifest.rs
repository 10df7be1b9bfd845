//! Run manifests: every artifact-producing command emits one next to its
//! output, recording the command, its parameters, the seeds, and digests of
//! the files read and written. Re-running the recorded command with the same
//! inputs reproduces the outputs byte for byte.

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::{Error, Result};

pub const ARTIFACT_VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FileDigest {
    pub path: String,
    pub sha256: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunManifest {
    pub artifact_version: String,
    pub command: String,
    pub parameters: serde_json::Value,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub inputs: Vec<FileDigest>,
    pub outputs: Vec<FileDigest>,
}

impl RunManifest {
    pub fn new(
        command: impl Into<String>,
        parameters: serde_json::Value,
        seed: Option<u64>,
    ) -> Self {
        RunManifest {
            artifact_version: ARTIFACT_VERSION.to_string(),
            command: command.into(),
            parameters,
            seed,
            inputs: Vec::new(),
            outputs: Vec::new(),
        }
    }

    pub fn record_input(&mut self, path: impl Into<String>, bytes: &[u8]) {
        self.inputs.push(FileDigest {
            path: path.into(),
            sha256: sha256_hex(bytes),
        });
    }

    pub fn record_output(&mut self, path: impl Into<String>, bytes: &[u8]) {
        self.outputs.push(FileDigest {
            path: path.into(),
            sha256: sha256_hex(bytes),
        });
    }

    pub fn to_json_string(&self) -> String {
        serde_json::to_string_pretty(self).expect("manifest serialization is infallible")
    }

    pub fn parse(bytes: &[u8]) -> Result<Self> {
        serde_json::from_slice(bytes).map_err(|e| Error::Format(e.to_string()))
    }
}

pub fn sha256_hex(bytes: &[u8]) -> String {
    let mut hasher = Sha256::new();
    hasher.update(bytes);
    let digest = hasher.finalize();
    let mut s = String::with_capacity(64);
    for byte in digest {
        s.push_str(&format!("{byte:02x}"));
    }
    s
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn manifest_round_trips() {
        let mut m = RunManifest::new(
            "graph gen",
            serde_json::json!({"family": "hub_path", "m": 4}),
            None,
        );
        m.record_output("g.json", b"{}");
        let s = m.to_json_string();
        let parsed = RunManifest::parse(s.as_bytes()).unwrap();
        assert_eq!(parsed, m);
        assert_eq!(parsed.to_json_string(), s);
    }

    #[test]
    fn digests_are_stable() {
        assert_eq!(
            sha256_hex(b""),
            "e3b0c44298fc1c149afbf4c8996fb92427ae41e4649b934ca495991b7852b855"
        );
    }
}
