//! Dataset manifests.
//!
//! A manifest binds emitted files to the configs, seed and counts that
//! produced them. Config hashes and a whole-document checksum are written
//! with the manifest and verified again on read.

use std::collections::BTreeMap;
use std::path::Path;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use super::{count_lines, CorpusError, SplitSpec};
use crate::normalize::NormalizationConfig;
use crate::simfilter::FilterConfig;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ArtifactEntry {
    /// File name, relative to the manifest's directory.
    pub file: String,
    pub lines: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DatasetManifest {
    pub dataset: String,
    pub source: String,
    pub command: String,
    pub tool_version: String,
    pub created_at: String,
    #[serde(default)]
    pub seed: Option<u64>,
    #[serde(default)]
    pub normalization: Option<NormalizationConfig>,
    #[serde(default)]
    pub normalization_hash: Option<String>,
    #[serde(default)]
    pub filter: Option<FilterConfig>,
    #[serde(default)]
    pub filter_hash: Option<String>,
    #[serde(default)]
    pub split: Option<SplitSpec>,
    #[serde(default)]
    pub artifacts: BTreeMap<String, ArtifactEntry>,
    #[serde(default)]
    pub notes: BTreeMap<String, serde_json::Value>,
    #[serde(default)]
    pub checksum: String,
}

impl DatasetManifest {
    pub fn new(dataset: impl Into<String>, source: impl Into<String>, command: &str) -> Self {
        Self {
            dataset: dataset.into(),
            source: source.into(),
            command: command.to_string(),
            tool_version: env!("CARGO_PKG_VERSION").to_string(),
            created_at: chrono::Utc::now().to_rfc3339_opts(chrono::SecondsFormat::Secs, true),
            seed: None,
            normalization: None,
            normalization_hash: None,
            filter: None,
            filter_hash: None,
            split: None,
            artifacts: BTreeMap::new(),
            notes: BTreeMap::new(),
            checksum: String::new(),
        }
    }

    pub fn with_normalization(mut self, cfg: &NormalizationConfig) -> Self {
        self.normalization_hash = Some(config_hash(cfg));
        self.normalization = Some(cfg.clone());
        self
    }

    pub fn with_filter(mut self, cfg: &FilterConfig) -> Self {
        self.filter_hash = Some(config_hash(cfg));
        self.filter = Some(cfg.clone());
        self
    }

    pub fn with_split(mut self, spec: &SplitSpec) -> Self {
        self.seed = Some(spec.seed);
        self.split = Some(spec.clone());
        self
    }

    pub fn artifact(&mut self, role: &str, file: &Path, lines: usize) {
        let name = file
            .file_name()
            .map(|n| n.to_string_lossy().into_owned())
            .unwrap_or_default();
        self.artifacts
            .insert(role.to_string(), ArtifactEntry { file: name, lines });
    }

    pub fn note(&mut self, key: &str, value: impl Serialize) {
        let v = serde_json::to_value(value).unwrap_or(serde_json::Value::Null);
        self.notes.insert(key.to_string(), v);
    }

    fn compute_checksum(&self) -> String {
        let mut body = self.clone();
        body.checksum = String::new();
        let bytes = serde_json::to_vec(&body).expect("manifest serializes");
        hex::encode(Sha256::digest(bytes))
    }

    /// Checks every artifact's line count against the file beside `dir`.
    pub fn verify_artifacts(&self, dir: &Path) -> Result<(), CorpusError> {
        for entry in self.artifacts.values() {
            let found = count_lines(&dir.join(&entry.file))?;
            if found != entry.lines {
                return Err(CorpusError::CountMismatch {
                    file: entry.file.clone(),
                    expected: entry.lines,
                    found,
                });
            }
        }
        Ok(())
    }
}

/// SHA-256 of the compact JSON encoding of a config.
pub fn config_hash<T: Serialize>(cfg: &T) -> String {
    let bytes = serde_json::to_vec(cfg).expect("config serializes");
    hex::encode(Sha256::digest(bytes))
}

pub fn write_manifest(manifest: &DatasetManifest, path: &Path) -> Result<(), CorpusError> {
    let mut m = manifest.clone();
    m.normalization_hash = m.normalization.as_ref().map(config_hash);
    m.filter_hash = m.filter.as_ref().map(config_hash);
    m.checksum = m.compute_checksum();
    let mut text = serde_json::to_string_pretty(&m).expect("manifest serializes");
    text.push('\n');
    std::fs::write(path, text).map_err(|e| CorpusError::io(path, e))
}

pub fn read_manifest(path: &Path) -> Result<DatasetManifest, CorpusError> {
    let parse = |message: String| CorpusError::Parse {
        path: path.to_path_buf(),
        line: 0,
        message,
    };
    let text = std::fs::read_to_string(path).map_err(|e| parse(e.to_string()))?;
    let m: DatasetManifest = serde_json::from_str(&text).map_err(|e| parse(e.to_string()))?;
    if m.normalization.as_ref().map(config_hash) != m.normalization_hash {
        return Err(CorpusError::ChecksumMismatch {
            field: "normalization_hash".into(),
        });
    }
    if m.filter.as_ref().map(config_hash) != m.filter_hash {
        return Err(CorpusError::ChecksumMismatch {
            field: "filter_hash".into(),
        });
    }
    if m.compute_checksum() != m.checksum {
        return Err(CorpusError::ChecksumMismatch {
            field: "checksum".into(),
        });
    }
    Ok(m)
}
