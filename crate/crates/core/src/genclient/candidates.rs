use std::collections::{HashMap, HashSet};
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::corpusio::{read_jsonl, CorpusError};
use crate::normalize::TweetRecord;
use crate::simfilter::ParaphraseSet;

/// One line of a candidates file.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CandidateLine {
    pub id: String,
    pub candidates: Vec<String>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct CandidateLoad {
    /// Sets in file order.
    pub sets: Vec<ParaphraseSet>,
    /// Ids in the file that the dataset does not contain.
    pub unknown_ids: Vec<String>,
    /// Dataset ids with no line in the file.
    pub missing_ids: Vec<String>,
}

/// Joins precomputed candidates with their originals.
pub fn load_candidates_file(
    path: &Path,
    dataset: &[TweetRecord],
) -> Result<CandidateLoad, CorpusError> {
    let lines: Vec<CandidateLine> = read_jsonl(path)?;
    let by_id: HashMap<&str, &TweetRecord> = dataset.iter().map(|r| (r.id.as_str(), r)).collect();
    let mut seen = HashSet::new();
    let mut sets = Vec::new();
    let mut unknown_ids = Vec::new();
    for line in lines {
        match by_id.get(line.id.as_str()) {
            Some(orig) => {
                seen.insert(line.id.clone());
                sets.push(ParaphraseSet::new((*orig).clone(), line.candidates));
            }
            None => unknown_ids.push(line.id),
        }
    }
    let missing_ids = dataset
        .iter()
        .filter(|r| !seen.contains(&r.id))
        .map(|r| r.id.clone())
        .collect();
    Ok(CandidateLoad {
        sets,
        unknown_ids,
        missing_ids,
    })
}
