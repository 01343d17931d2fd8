//! Embedded fixture data and helpers for loading overrides from disk.
//!
//! The canonical generator matrices, the structure-constant table, the
//! octonion product table and the closed-form volume table are data, not
//! code; they are shipped as JSON and validated on load. `FixtureSet`
//! resolves each file either from an override directory or from the copies
//! embedded at compile time.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};

pub const OCTONION_TABLE_JSON: &str = include_str!("../fixtures/octonion_table.json");
pub const CANONICAL_BASIS_JSON: &str = include_str!("../fixtures/canonical_basis.json");
pub const STRUCTURE_TABLE_JSON: &str = include_str!("../fixtures/structure_table.json");
pub const VOLUMES_JSON: &str = include_str!("../fixtures/volumes.json");

#[derive(Debug, thiserror::Error)]
pub enum FixtureError {
    #[error("cannot read fixture {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FixtureFile {
    OctonionTable,
    CanonicalBasis,
    StructureTable,
    Volumes,
}

impl FixtureFile {
    pub const ALL: [FixtureFile; 4] = [
        FixtureFile::OctonionTable,
        FixtureFile::CanonicalBasis,
        FixtureFile::StructureTable,
        FixtureFile::Volumes,
    ];

    pub fn file_name(self) -> &'static str {
        match self {
            FixtureFile::OctonionTable => "octonion_table.json",
            FixtureFile::CanonicalBasis => "canonical_basis.json",
            FixtureFile::StructureTable => "structure_table.json",
            FixtureFile::Volumes => "volumes.json",
        }
    }

    pub fn embedded(self) -> &'static str {
        match self {
            FixtureFile::OctonionTable => OCTONION_TABLE_JSON,
            FixtureFile::CanonicalBasis => CANONICAL_BASIS_JSON,
            FixtureFile::StructureTable => STRUCTURE_TABLE_JSON,
            FixtureFile::Volumes => VOLUMES_JSON,
        }
    }
}

/// Fixture contents in use, either embedded or loaded from a directory.
#[derive(Debug, Clone)]
pub struct FixtureSet {
    dir: Option<PathBuf>,
    contents: [String; 4],
}

impl Default for FixtureSet {
    fn default() -> Self {
        Self::embedded()
    }
}

impl FixtureSet {
    pub fn embedded() -> Self {
        Self {
            dir: None,
            contents: FixtureFile::ALL.map(|f| f.embedded().to_string()),
        }
    }

    pub fn from_dir(dir: &Path) -> Result<Self, FixtureError> {
        let mut contents: [String; 4] = Default::default();
        for (slot, file) in contents.iter_mut().zip(FixtureFile::ALL) {
            let path = dir.join(file.file_name());
            *slot = std::fs::read_to_string(&path)
                .map_err(|source| FixtureError::Io { path, source })?;
        }
        Ok(Self { dir: Some(dir.to_path_buf()), contents })
    }

    pub fn source(&self) -> String {
        match &self.dir {
            Some(d) => d.display().to_string(),
            None => "embedded".to_string(),
        }
    }

    pub fn get(&self, file: FixtureFile) -> &str {
        let idx = FixtureFile::ALL.iter().position(|&f| f == file).unwrap();
        &self.contents[idx]
    }

    /// SHA-256 of every fixture file, for reproducible reports.
    pub fn hashes(&self) -> Vec<(String, String)> {
        FixtureFile::ALL
            .iter()
            .map(|&f| (f.file_name().to_string(), sha256_hex(self.get(f).as_bytes())))
            .collect()
    }
}

pub fn sha256_hex(data: &[u8]) -> String {
    use sha2::{Digest, Sha256};
    let digest = Sha256::digest(data);
    let mut out = String::with_capacity(64);
    for byte in digest {
        let _ = write!(out, "{byte:02x}");
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn embedded_fixtures_are_nonempty_json() {
        for file in FixtureFile::ALL {
            let text = file.embedded();
            assert!(!text.is_empty());
            let value: serde_json::Value = serde_json::from_str(text).unwrap();
            assert!(value.is_array());
        }
    }

    #[test]
    fn hashes_are_stable_hex() {
        let set = FixtureSet::embedded();
        for (name, hash) in set.hashes() {
            assert!(!name.is_empty());
            assert_eq!(hash.len(), 64);
            assert!(hash.chars().all(|c| c.is_ascii_hexdigit()));
        }
    }

    #[test]
    fn sha256_known_vector() {
        assert_eq!(
            sha256_hex(b"abc"),
            "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad"
        );
    }
}
