//! Browser bindings: normalize a post, score two texts, and run the
//! candidate filter with adjustable thresholds.

use paradecay::normalize::{count_emoji, normalize_text, NormalizationConfig};
use paradecay::simfilter::{
    build_para_clean, filter_stats, trigram_similarity, DropReason, FilterConfig, ParaphraseSet,
};
use paradecay::TweetRecord;
use serde::Serialize;
use wasm_bindgen::prelude::*;

#[derive(Serialize)]
struct Normalized {
    text: String,
    emoji_in_input: usize,
}

#[derive(Serialize)]
struct Row {
    text: String,
    similarity: f64,
    kept: bool,
    reason: DropReason,
}

#[derive(Serialize)]
struct Explored {
    rows: Vec<Row>,
    kept: usize,
    dropped_copy: usize,
    dropped_zero_overlap: usize,
    dropped_near_duplicate: usize,
}

pub fn normalize_json(
    text: &str,
    seeds: &str,
    strip_emoji: bool,
    user_token: &str,
    url_token: &str,
) -> Result<String, String> {
    let cfg = NormalizationConfig {
        strip_emoji,
        user_token: user_token.to_string(),
        url_token: url_token.to_string(),
        ..Default::default()
    }
    .with_seed_hashtags(seeds.split([',', ' ']).filter(|s| !s.is_empty()));
    cfg.validate().map_err(|e| e.to_string())?;
    let out = Normalized {
        text: normalize_text(text, &cfg),
        emoji_in_input: count_emoji(text),
    };
    Ok(serde_json::to_string(&out).expect("serializes"))
}

/// Filters newline-separated candidates against `original`. Candidate order
/// is generation order.
pub fn explore_json(
    original: &str,
    candidates: &str,
    copy_threshold: f64,
    dedup_threshold: f64,
) -> Result<String, String> {
    let cfg = FilterConfig {
        copy_threshold,
        dedup_threshold,
        ..Default::default()
    };
    cfg.validate().map_err(|e| e.to_string())?;
    let orig = TweetRecord {
        id: "demo".into(),
        text: original.to_string(),
        label: String::new(),
        topic: None,
        dataset: String::new(),
    };
    let texts = candidates.lines().map(str::trim).filter(|l| !l.is_empty());
    let clean = build_para_clean(&[ParaphraseSet::new(orig, texts)], &cfg);
    let stats = filter_stats(&clean);
    let rows = clean
        .into_iter()
        .flat_map(|s| s.candidates)
        .map(|c| Row {
            text: c.text,
            similarity: c.sim_to_original,
            kept: c.kept,
            reason: c.drop_reason,
        })
        .collect();
    let out = Explored {
        rows,
        kept: stats.kept,
        dropped_copy: stats.dropped_copy,
        dropped_zero_overlap: stats.dropped_zero_overlap,
        dropped_near_duplicate: stats.dropped_near_duplicate,
    };
    Ok(serde_json::to_string(&out).expect("serializes"))
}

#[wasm_bindgen]
pub fn normalize(
    text: &str,
    seeds: &str,
    strip_emoji: bool,
    user_token: &str,
    url_token: &str,
) -> Result<String, JsError> {
    normalize_json(text, seeds, strip_emoji, user_token, url_token).map_err(|e| JsError::new(&e))
}

#[wasm_bindgen]
pub fn similarity(a: &str, b: &str) -> f64 {
    trigram_similarity(a, b, &FilterConfig::default())
}

#[wasm_bindgen]
pub fn explore_filter(
    original: &str,
    candidates: &str,
    copy_threshold: f64,
    dedup_threshold: f64,
) -> Result<String, JsError> {
    explore_json(original, candidates, copy_threshold, dedup_threshold).map_err(|e| JsError::new(&e))
}
