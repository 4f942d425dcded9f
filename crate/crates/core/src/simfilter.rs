//! Word n-gram similarity and the paraphrase filtering cascade.
//!
//! Candidates are first checked against their original (drop copies above
//! `copy_threshold`, drop candidates at or below `floor_similarity`), then
//! deduplicated greedily in generation order. What survives is the clean
//! paraphrase pool from which Para-n training sets are drawn.

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::normalize::TweetRecord;

#[derive(Debug, Error, PartialEq)]
pub enum FilterError {
    #[error("invalid filter config: {0}")]
    InvalidConfig(String),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct FilterConfig {
    pub ngram_order: usize,
    pub copy_threshold: f64,
    pub dedup_threshold: f64,
    pub floor_similarity: f64,
}

impl Default for FilterConfig {
    fn default() -> Self {
        Self {
            ngram_order: 3,
            copy_threshold: 0.95,
            dedup_threshold: 0.50,
            floor_similarity: 0.0,
        }
    }
}

impl FilterConfig {
    pub fn validate(&self) -> Result<(), FilterError> {
        let bad = |msg: String| Err(FilterError::InvalidConfig(msg));
        if self.ngram_order == 0 {
            return bad("ngram_order must be positive".into());
        }
        for (name, v) in [
            ("copy_threshold", self.copy_threshold),
            ("dedup_threshold", self.dedup_threshold),
            ("floor_similarity", self.floor_similarity),
        ] {
            if !(0.0..=1.0).contains(&v) {
                return bad(format!("{name} = {v} is outside [0, 1]"));
            }
        }
        if self.floor_similarity >= self.copy_threshold {
            return bad("floor_similarity must be below copy_threshold".into());
        }
        if self.dedup_threshold > self.copy_threshold {
            return bad("dedup_threshold must not exceed copy_threshold".into());
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DropReason {
    Copy,
    ZeroOverlap,
    NearDuplicate,
    None,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Candidate {
    pub text: String,
    pub sim_to_original: f64,
    pub kept: bool,
    pub drop_reason: DropReason,
}

impl Candidate {
    /// A candidate that has not been through the filter yet.
    pub fn unscored(text: impl Into<String>) -> Self {
        Self {
            text: text.into(),
            sim_to_original: 0.0,
            kept: true,
            drop_reason: DropReason::None,
        }
    }

    fn drop(&mut self, reason: DropReason) {
        self.kept = false;
        self.drop_reason = reason;
    }
}

/// An original post with its candidate paraphrases in generation order.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ParaphraseSet {
    pub original: TweetRecord,
    pub candidates: Vec<Candidate>,
}

impl ParaphraseSet {
    pub fn new<I, S>(original: TweetRecord, texts: I) -> Self
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        Self {
            original,
            candidates: texts.into_iter().map(Candidate::unscored).collect(),
        }
    }

    pub fn kept(&self) -> impl Iterator<Item = &Candidate> {
        self.candidates.iter().filter(|c| c.kept)
    }
}

/// Contiguous word n-grams of the lowercased, whitespace-tokenized text.
/// Texts with fewer than `n` tokens yield a single gram of all tokens.
pub fn trigram_set(text: &str, n: usize) -> BTreeSet<String> {
    let n = n.max(1);
    let lower = text.to_lowercase();
    let tokens: Vec<&str> = lower.split_whitespace().collect();
    if tokens.is_empty() {
        return BTreeSet::new();
    }
    if tokens.len() < n {
        return BTreeSet::from([tokens.join(" ")]);
    }
    tokens.windows(n).map(|w| w.join(" ")).collect()
}

/// Jaccard coefficient of two gram sets; 1.0 when both are empty.
pub fn jaccard(a: &BTreeSet<String>, b: &BTreeSet<String>) -> f64 {
    if a.is_empty() && b.is_empty() {
        return 1.0;
    }
    if a.is_empty() || b.is_empty() {
        return 0.0;
    }
    let (small, large) = if a.len() <= b.len() { (a, b) } else { (b, a) };
    let inter = small.iter().filter(|g| large.contains(*g)).count();
    inter as f64 / (a.len() + b.len() - inter) as f64
}

pub fn trigram_similarity(a: &str, b: &str, cfg: &FilterConfig) -> f64 {
    jaccard(
        &trigram_set(a, cfg.ngram_order),
        &trigram_set(b, cfg.ngram_order),
    )
}

/// Scores candidates against the original and drops copies and candidates
/// with no overlap. Keep rule: `floor < sim <= copy_threshold`.
pub fn filter_against_original<S: AsRef<str>>(
    original: &str,
    candidates: &[S],
    cfg: &FilterConfig,
) -> Vec<Candidate> {
    let orig = trigram_set(original, cfg.ngram_order);
    candidates
        .iter()
        .map(|text| {
            let text = text.as_ref();
            let sim = jaccard(&orig, &trigram_set(text, cfg.ngram_order));
            let mut c = Candidate {
                text: text.to_string(),
                sim_to_original: sim,
                kept: true,
                drop_reason: DropReason::None,
            };
            if sim > cfg.copy_threshold {
                c.drop(DropReason::Copy);
            } else if sim <= cfg.floor_similarity {
                c.drop(DropReason::ZeroOverlap);
            }
            c
        })
        .collect()
}

/// Greedy scan over `len` items: item `i` is kept iff `sim(i, j) <= threshold`
/// for every previously kept `j`.
pub fn greedy_dedup(len: usize, threshold: f64, sim: impl Fn(usize, usize) -> f64) -> Vec<bool> {
    let mut kept: Vec<usize> = Vec::with_capacity(len);
    let mut mask = vec![false; len];
    for i in 0..len {
        if kept.iter().all(|&j| sim(i, j) <= threshold) {
            kept.push(i);
            mask[i] = true;
        }
    }
    mask
}

/// Marks near-duplicates among the candidates still kept. Already dropped
/// candidates are neither compared nor changed.
pub fn dedup_candidates(candidates: &mut [Candidate], cfg: &FilterConfig) {
    let live: Vec<usize> = (0..candidates.len()).filter(|&i| candidates[i].kept).collect();
    let grams: Vec<BTreeSet<String>> = live
        .iter()
        .map(|&i| trigram_set(&candidates[i].text, cfg.ngram_order))
        .collect();
    let mask = greedy_dedup(live.len(), cfg.dedup_threshold, |a, b| {
        jaccard(&grams[a], &grams[b])
    });
    for (pos, &i) in live.iter().enumerate() {
        if !mask[pos] {
            candidates[i].drop(DropReason::NearDuplicate);
        }
    }
}

fn clean_one(set: &ParaphraseSet, cfg: &FilterConfig) -> ParaphraseSet {
    let texts: Vec<&str> = set.candidates.iter().map(|c| c.text.as_str()).collect();
    let mut candidates = filter_against_original(&set.original.text, &texts, cfg);
    dedup_candidates(&mut candidates, cfg);
    ParaphraseSet {
        original: set.original.clone(),
        candidates,
    }
}

/// Runs the full cascade on every set. Output order equals input order and
/// originals with no survivors stay in the output.
pub fn build_para_clean(sets: &[ParaphraseSet], cfg: &FilterConfig) -> Vec<ParaphraseSet> {
    sets.iter().map(|s| clean_one(s, cfg)).collect()
}

/// Emits up to `n` kept candidates per original, in generation order, each
/// labelled like its original. Ids are `<original id>-p<rank>`.
pub fn select_para_n(para_clean: &[ParaphraseSet], n: usize) -> Vec<TweetRecord> {
    para_clean
        .iter()
        .flat_map(|set| {
            set.kept().take(n).enumerate().map(move |(rank, c)| TweetRecord {
                id: format!("{}-p{}", set.original.id, rank + 1),
                text: c.text.clone(),
                label: set.original.label.clone(),
                topic: set.original.topic.clone(),
                dataset: set.original.dataset.clone(),
            })
        })
        .collect()
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct FilterStats {
    pub originals: usize,
    pub candidates: usize,
    pub kept: usize,
    pub dropped_copy: usize,
    pub dropped_zero_overlap: usize,
    pub dropped_near_duplicate: usize,
    pub originals_without_survivors: usize,
}

pub fn filter_stats(sets: &[ParaphraseSet]) -> FilterStats {
    let mut st = FilterStats {
        originals: sets.len(),
        ..Default::default()
    };
    for set in sets {
        st.candidates += set.candidates.len();
        if set.kept().next().is_none() {
            st.originals_without_survivors += 1;
        }
        for c in &set.candidates {
            match c.drop_reason {
                DropReason::None if c.kept => st.kept += 1,
                DropReason::None => {}
                DropReason::Copy => st.dropped_copy += 1,
                DropReason::ZeroOverlap => st.dropped_zero_overlap += 1,
                DropReason::NearDuplicate => st.dropped_near_duplicate += 1,
            }
        }
    }
    st
}
