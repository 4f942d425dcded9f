//! Command-line surface.
//!
//! Every artifact-producing command writes a manifest beside its output:
//! `<file>.manifest.json` for single files and `manifest.json` inside output
//! directories. Usage errors exit with 2, data errors with 1 and a JSON error
//! object on stderr.

mod commands;
mod config;

use std::ffi::OsString;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};
use thiserror::Error;

pub use config::{DatasetOverride, PipelineConfig};

use crate::corpusio::CorpusError;
use crate::genclient::GenError;
use crate::metrics::MetricsError;
use crate::normalize::NormalizeError;
use crate::simfilter::FilterError;

#[derive(Debug, Error)]
pub enum CliError {
    #[error(transparent)]
    Corpus(#[from] CorpusError),
    #[error(transparent)]
    Normalize(#[from] NormalizeError),
    #[error(transparent)]
    Filter(#[from] FilterError),
    #[error(transparent)]
    Metrics(#[from] MetricsError),
    #[error(transparent)]
    Generation(#[from] GenError),
    #[error("config: {0}")]
    Config(String),
}

impl CliError {
    fn kind(&self) -> &'static str {
        match self {
            CliError::Corpus(CorpusError::Parse { .. }) => "parse_error",
            CliError::Corpus(CorpusError::UnknownLabel { .. }) => "unknown_label",
            CliError::Corpus(CorpusError::TooFewRecords { .. }) => "too_few_records",
            CliError::Corpus(CorpusError::UnknownSource(_)) => "unknown_source",
            CliError::Corpus(CorpusError::ChecksumMismatch { .. }) => "checksum_mismatch",
            CliError::Corpus(CorpusError::Io { .. }) => "io_error",
            CliError::Corpus(CorpusError::LabelOutOfRange { .. }) => "label_out_of_range",
            CliError::Corpus(CorpusError::InvalidPair(_)) => "invalid_pair",
            CliError::Corpus(CorpusError::InvalidSplit(_)) => "invalid_split",
            CliError::Corpus(CorpusError::CountMismatch { .. }) => "count_mismatch",
            CliError::Corpus(_) => "data_error",
            CliError::Normalize(_) => "normalization_error",
            CliError::Filter(_) => "filter_config_error",
            CliError::Metrics(_) => "metrics_error",
            CliError::Generation(GenError::BackendUnreachable { .. }) => "backend_unreachable",
            CliError::Generation(GenError::Protocol(_)) => "protocol_error",
            CliError::Generation(GenError::Backend { .. }) => "backend_error",
            CliError::Generation(_) => "generation_error",
            CliError::Config(_) => "config_error",
        }
    }
}

#[derive(Debug, Parser)]
#[command(name = "paradecay", version, about = "Paraphrase-based persistence toolkit for social-media datasets")]
pub struct Cli {
    /// Pipeline config (JSON); command-line flags take precedence.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    /// Validate inputs and print planned counts without writing anything.
    #[arg(long, global = true)]
    pub dry_run: bool,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Mask mentions and URLs, drop seed hashtags, optionally strip emoji.
    Normalize(NormalizeArgs),
    /// Seeded train/dev/test split.
    Split(SplitArgs),
    /// Move a seeded fraction of a train set into a dev set.
    CarveDev(CarveDevArgs),
    /// Decay and retrieval rates from original and retrieved ID lists.
    AuditDecay(AuditDecayArgs),
    /// Filter, merge and split paraphrase source corpora.
    BuildCorpus(BuildCorpusArgs),
    /// Request paraphrase candidates from a generation backend.
    Generate(GenerateArgs),
    /// Apply the similarity filter cascade to candidate sets.
    ParaClean(ParaCleanArgs),
    /// Take up to n filtered paraphrases per original.
    SelectParaN(SelectParaNArgs),
    /// Remove emoji from a dataset and report emoji presence.
    StripEmoji(StripEmojiArgs),
    /// Macro-F1 over prediction files, run means and the global average.
    Metrics(MetricsArgs),
    /// Write the training hyper-parameters as JSON.
    ExportTrainConfig(ExportTrainConfigArgs),
}

#[derive(Debug, Args)]
pub struct NormalizeArgs {
    #[arg(long = "in")]
    pub input: PathBuf,
    #[arg(long)]
    pub out: PathBuf,
    /// jsonl, tsv or tsv-header.
    #[arg(long, default_value = "jsonl")]
    pub format: String,
    /// Column map, e.g. `id=0,text=1,label=2` or `id=tweet_id,text=tweet,label=label`.
    #[arg(long)]
    pub columns: Option<String>,
    /// Dataset name; selects the class set and default seed hashtags.
    #[arg(long)]
    pub dataset: Option<String>,
    /// Extra seed hashtag (repeatable).
    #[arg(long = "seed-hashtag")]
    pub seed_hashtags: Vec<String>,
    /// Ignore the dataset's default seed hashtags.
    #[arg(long)]
    pub no_default_seeds: bool,
    #[arg(long)]
    pub strip_emoji: bool,
    #[arg(long)]
    pub user_token: Option<String>,
    #[arg(long)]
    pub url_token: Option<String>,
}

#[derive(Debug, Args)]
pub struct SplitArgs {
    #[arg(long = "in")]
    pub input: PathBuf,
    #[arg(long)]
    pub out_dir: PathBuf,
    #[arg(long)]
    pub seed: Option<u64>,
    #[arg(long)]
    pub train: Option<f64>,
    #[arg(long)]
    pub dev: Option<f64>,
    #[arg(long)]
    pub test: Option<f64>,
    #[arg(long)]
    pub stratify: bool,
}

#[derive(Debug, Args)]
pub struct CarveDevArgs {
    #[arg(long = "in")]
    pub input: PathBuf,
    #[arg(long)]
    pub out_dir: PathBuf,
    #[arg(long)]
    pub seed: Option<u64>,
    #[arg(long, default_value_t = 0.1)]
    pub fraction: f64,
}

#[derive(Debug, Args)]
pub struct AuditDecayArgs {
    /// Original ID list (repeatable, paired with --retrieved).
    #[arg(long, required = true)]
    pub orig: Vec<PathBuf>,
    #[arg(long, required = true)]
    pub retrieved: Vec<PathBuf>,
    /// Dataset names, one per --orig; defaults to the file stem.
    #[arg(long)]
    pub dataset: Vec<String>,
    /// Report path; printed to stdout when absent.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct BuildCorpusArgs {
    /// `SOURCE=PATH` pairs, comma-separated or repeated (pit, languagenet, opusparcus, qqp).
    #[arg(long, value_delimiter = ',', required = true)]
    pub sources: Vec<String>,
    #[arg(long)]
    pub out_dir: PathBuf,
    #[arg(long)]
    pub seed: Option<u64>,
    /// Drop exact duplicate pairs after merging.
    #[arg(long)]
    pub dedup: bool,
}

#[derive(Debug, Args)]
pub struct GenerateArgs {
    #[arg(long = "in")]
    pub input: PathBuf,
    #[arg(long)]
    pub out: PathBuf,
    /// Backend base URL.
    #[arg(long, env = "PARADECAY_BACKEND_URL")]
    pub backend: Option<String>,
    #[arg(long)]
    pub num_return: Option<u32>,
    #[arg(long)]
    pub top_p: Option<f64>,
    #[arg(long)]
    pub max_length: Option<u32>,
    #[arg(long)]
    pub gen_seed: Option<u64>,
    /// Maximum in-flight requests.
    #[arg(long, default_value_t = 8)]
    pub concurrency: usize,
    /// Per-request timeout in seconds.
    #[arg(long, default_value_t = 120)]
    pub timeout: u64,
}

#[derive(Debug, Args)]
pub struct ParaCleanArgs {
    /// ParaphraseSet JSONL, or a candidates file when --dataset-file is given.
    #[arg(long = "in")]
    pub input: PathBuf,
    /// Normalized originals to join candidates against.
    #[arg(long)]
    pub dataset_file: Option<PathBuf>,
    #[arg(long)]
    pub out: PathBuf,
    #[arg(long)]
    pub copy_threshold: Option<f64>,
    #[arg(long)]
    pub dedup_threshold: Option<f64>,
    #[arg(long)]
    pub floor: Option<f64>,
    #[arg(long)]
    pub ngram_order: Option<usize>,
}

#[derive(Debug, Args)]
pub struct SelectParaNArgs {
    #[arg(long = "in")]
    pub input: PathBuf,
    #[arg(long, value_parser = clap::value_parser!(u32).range(1..))]
    pub n: u32,
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Debug, Args)]
pub struct StripEmojiArgs {
    #[arg(long = "in")]
    pub input: PathBuf,
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Debug, Args)]
pub struct MetricsArgs {
    /// `DATASET=PATH` prediction file (JSONL of id, gold, predicted); repeat per run.
    #[arg(long = "pred")]
    pub predictions: Vec<String>,
    /// JSON score table output.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Rendered text table output; printed to stdout when absent.
    #[arg(long)]
    pub table: Option<PathBuf>,
    /// Reference sentences, one per line, for corpus BLEU.
    #[arg(long, requires = "bleu_hyps")]
    pub bleu_refs: Option<PathBuf>,
    /// Hypothesis sentences, one per line, for corpus BLEU.
    #[arg(long, requires = "bleu_refs")]
    pub bleu_hyps: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct ExportTrainConfigArgs {
    #[arg(long)]
    pub out: PathBuf,
}

/// Parses `argv` (including the program name), runs the command and returns
/// the process exit code.
pub fn run<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    match commands::dispatch(&cli) {
        Ok(()) => 0,
        Err(e) => {
            let payload = serde_json::json!({ "error": e.kind(), "message": e.to_string() });
            eprintln!("{payload}");
            1
        }
    }
}
