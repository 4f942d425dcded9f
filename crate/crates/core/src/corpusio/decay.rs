use std::collections::HashSet;
use std::io::BufRead;
use std::path::Path;

use serde::{Deserialize, Serialize};

use super::CorpusError;

/// Rehydration outcome for one ID-distributed dataset.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DecayReport {
    pub dataset: String,
    pub original_count: usize,
    /// Original IDs that were retrieved.
    pub retrieved_count: usize,
    pub decay_rate: f64,
    pub retrieval_rate: f64,
    /// Retrieved IDs absent from the original list. Excluded from the rates.
    pub unknown_retrieved: usize,
    /// Set when the original list was empty; both rates are then nominal.
    pub empty_original: bool,
}

pub fn audit_decay(
    original_ids: &HashSet<String>,
    retrieved_ids: &HashSet<String>,
    dataset: &str,
) -> DecayReport {
    let retrieved_count = retrieved_ids
        .iter()
        .filter(|id| original_ids.contains(*id))
        .count();
    let unknown_retrieved = retrieved_ids.len() - retrieved_count;
    let original_count = original_ids.len();
    let retrieval_rate = if original_count == 0 {
        1.0
    } else {
        retrieved_count as f64 / original_count as f64
    };
    DecayReport {
        dataset: dataset.to_string(),
        original_count,
        retrieved_count,
        decay_rate: 1.0 - retrieval_rate,
        retrieval_rate,
        unknown_retrieved,
        empty_original: original_count == 0,
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DecayAggregate {
    /// Unweighted mean of per-dataset retrieval rates.
    pub macro_mean_retrieval: f64,
    /// Pooled retrieved / pooled original.
    pub micro_retrieval: f64,
    pub datasets: usize,
}

pub fn aggregate_decay(reports: &[DecayReport]) -> Result<DecayAggregate, CorpusError> {
    if reports.is_empty() {
        return Err(CorpusError::EmptyInput);
    }
    let macro_mean_retrieval =
        reports.iter().map(|r| r.retrieval_rate).sum::<f64>() / reports.len() as f64;
    let orig: usize = reports.iter().map(|r| r.original_count).sum();
    let got: usize = reports.iter().map(|r| r.retrieved_count).sum();
    let micro_retrieval = if orig == 0 { 1.0 } else { got as f64 / orig as f64 };
    Ok(DecayAggregate {
        macro_mean_retrieval,
        micro_retrieval,
        datasets: reports.len(),
    })
}

/// Reads a newline-delimited ID list; blank lines are skipped.
pub fn read_id_list(path: &Path) -> Result<HashSet<String>, CorpusError> {
    let file = std::fs::File::open(path).map_err(|e| CorpusError::io(path, e))?;
    let mut ids = HashSet::new();
    for line in std::io::BufReader::new(file).lines() {
        let line = line.map_err(|e| CorpusError::io(path, e))?;
        let id = line.trim();
        if !id.is_empty() {
            ids.insert(id.to_string());
        }
    }
    Ok(ids)
}
