//! Evaluation arithmetic: corpus BLEU, macro-F1 and score aggregation.

mod bleu;
mod f1;
mod table;

use thiserror::Error;

pub use bleu::{corpus_bleu, BleuScore, Smoothing, BLEU_VARIANT};
pub use f1::{macro_f1, per_class_f1};
pub use table::{global_average, mean_over_runs, render_table, ScoreTable};

#[derive(Debug, Error, PartialEq)]
pub enum MetricsError {
    #[error("length mismatch: {0} vs {1}")]
    LengthMismatch(usize, usize),
    #[error("empty input")]
    EmptyInput,
    #[error("label {0:?} is not in the class set")]
    UnknownLabel(String),
    #[error("score {score} for {dataset} is outside [0, 1]")]
    ScoreOutOfRange { dataset: String, score: f64 },
}
