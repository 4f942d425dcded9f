//! Toolkit for making ID-distributed social-media datasets persistent:
//! normalize posts, obtain paraphrase candidates from a generation backend,
//! filter them by word-trigram similarity, assemble Para-n training sets,
//! and audit decay and evaluation metrics.

pub mod corpusio;
pub mod datasets;
pub mod genclient;
pub mod metrics;
pub mod normalize;
pub mod simfilter;

#[cfg(feature = "cli")]
pub mod cli;

pub use normalize::{NormalizationConfig, TweetRecord};
pub use simfilter::{FilterConfig, ParaphraseSet};
