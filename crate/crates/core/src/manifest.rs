//! Provenance records attached to every emitted artifact.

use std::collections::BTreeMap;
use std::path::Path;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct InputDigest {
    pub path: String,
    pub sha256: String,
}

/// What produced an artifact. Contains no timestamps, so identical runs
/// produce identical manifests.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunManifest {
    pub command: String,
    pub version: String,
    pub inputs: Vec<InputDigest>,
    pub tol: f64,
    pub caps: BTreeMap<String, u64>,
    pub outcome: String,
}

impl RunManifest {
    pub fn new(command: impl Into<String>, tol: f64) -> Self {
        RunManifest {
            command: command.into(),
            version: env!("CARGO_PKG_VERSION").to_string(),
            inputs: Vec::new(),
            tol,
            caps: BTreeMap::new(),
            outcome: String::new(),
        }
    }

    pub fn with_cap(mut self, name: &str, value: u64) -> Self {
        self.caps.insert(name.to_string(), value);
        self
    }

    pub fn add_input(&mut self, path: &Path, bytes: &[u8]) {
        self.inputs.push(InputDigest { path: path.display().to_string(), sha256: sha256_hex(bytes) });
    }
}

pub fn sha256_hex(bytes: &[u8]) -> String {
    hex::encode(Sha256::digest(bytes))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn digest_of_empty_input() {
        assert_eq!(sha256_hex(b""), "e3b0c44298fc1c149afbf4c8996fb92427ae41e4649b934ca495991b7852b855");
    }

    #[test]
    fn manifests_are_deterministic() {
        let mk = || {
            let mut m = RunManifest::new("lift", 1e-9).with_cap("dimension", 100_000);
            m.add_input(Path::new("a.json"), b"{}");
            m
        };
        assert_eq!(serde_json::to_string(&mk()).unwrap(), serde_json::to_string(&mk()).unwrap());
    }
}
