//! Dataset ingestion, splitting, decay auditing, paraphrase-corpus
//! construction and dataset manifests.

mod corpus;
mod decay;
mod load;
mod manifest;
mod split;
mod train_config;

use std::path::PathBuf;

use thiserror::Error;

pub use corpus::{
    filter_paraphrase_corpus, load_corpus_pairs, merge_corpora, CorpusPair, MergedCorpus, Source,
    PUBLISHED_MERGED_TOTAL,
};
pub use decay::{aggregate_decay, audit_decay, read_id_list, DecayAggregate, DecayReport};
pub use load::{count_lines, load_dataset, read_jsonl, write_jsonl, Column, ColumnMap, Format};
pub use manifest::{config_hash, read_manifest, write_manifest, ArtifactEntry, DatasetManifest};
pub use split::{carve_dev, split_dataset, Labeled, SplitSpec};
pub use train_config::{ClassifierProfile, LrSchedule, ParaphraserProfile, TrainingConfigExport};

#[derive(Debug, Error)]
pub enum CorpusError {
    #[error("{path}:{line}: {message}")]
    Parse {
        path: PathBuf,
        line: usize,
        message: String,
    },
    #[error("{path}:{line}: label {label:?} is not a class of {dataset}")]
    UnknownLabel {
        path: PathBuf,
        line: usize,
        label: String,
        dataset: String,
    },
    #[error("need at least {needed} records, got {got}")]
    TooFewRecords { needed: usize, got: usize },
    #[error("empty input")]
    EmptyInput,
    #[error("unknown paraphrase source {0:?}")]
    UnknownSource(String),
    #[error("{source_name} label {label} outside {min}..={max}")]
    LabelOutOfRange {
        source_name: String,
        label: u8,
        min: u8,
        max: u8,
    },
    #[error("invalid pair: {0}")]
    InvalidPair(String),
    #[error("invalid split spec: {0}")]
    InvalidSplit(String),
    #[error("manifest checksum mismatch in {field}")]
    ChecksumMismatch { field: String },
    #[error("artifact {file}: manifest says {expected} lines, found {found}")]
    CountMismatch {
        file: String,
        expected: usize,
        found: usize,
    },
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

impl CorpusError {
    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        CorpusError::Io {
            path: path.into(),
            source,
        }
    }
}
