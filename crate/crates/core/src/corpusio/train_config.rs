//! Training hyper-parameters exported as data for external trainers.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::datasets;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum LrSchedule {
    Constant,
    LinearPeak,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ParaphraserProfile {
    pub model: String,
    pub epochs: u32,
    pub learning_rate: f64,
    pub schedule: LrSchedule,
    pub max_sequence_length: u32,
    pub train_dev_test: [f64; 3],
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ClassifierProfile {
    pub models: Vec<String>,
    pub optimizer: String,
    pub peak_learning_rate: f64,
    pub schedule: LrSchedule,
    pub weight_decay: f64,
    pub epochs: u32,
    pub early_stopping_patience: u32,
    pub batch_size: u32,
    pub max_sequence_length: u32,
    /// Longer limit for tasks that append a topic term after the post.
    pub topic_max_sequence_length: u32,
    pub topic_datasets: Vec<String>,
    pub runs: u32,
    pub metric: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrainingConfigExport {
    pub paraphraser: ParaphraserProfile,
    pub classifier: ClassifierProfile,
}

impl Default for TrainingConfigExport {
    fn default() -> Self {
        Self {
            paraphraser: ParaphraserProfile {
                model: "t5-base".into(),
                epochs: 20,
                learning_rate: 3e-4,
                schedule: LrSchedule::Constant,
                max_sequence_length: 512,
                train_dev_test: [0.8, 0.1, 0.1],
            },
            classifier: ClassifierProfile {
                models: vec!["roberta-base".into(), "vinai/bertweet-base".into()],
                optimizer: "adam".into(),
                peak_learning_rate: 1e-5,
                schedule: LrSchedule::LinearPeak,
                weight_decay: 0.01,
                epochs: 20,
                early_stopping_patience: 5,
                batch_size: 32,
                max_sequence_length: 64,
                topic_max_sequence_length: 72,
                topic_datasets: datasets::builtin()
                    .into_iter()
                    .filter(|d| d.has_topic)
                    .map(|d| d.name)
                    .collect(),
                runs: 3,
                metric: "macro_f1".into(),
            },
        }
    }
}

impl TrainingConfigExport {
    /// Numeric fields that must be strictly positive, by name.
    pub fn positive_fields(&self) -> BTreeMap<&'static str, f64> {
        let p = &self.paraphraser;
        let c = &self.classifier;
        BTreeMap::from([
            ("paraphraser.epochs", p.epochs as f64),
            ("paraphraser.learning_rate", p.learning_rate),
            ("paraphraser.max_sequence_length", p.max_sequence_length as f64),
            ("classifier.peak_learning_rate", c.peak_learning_rate),
            ("classifier.weight_decay", c.weight_decay),
            ("classifier.epochs", c.epochs as f64),
            ("classifier.early_stopping_patience", c.early_stopping_patience as f64),
            ("classifier.batch_size", c.batch_size as f64),
            ("classifier.max_sequence_length", c.max_sequence_length as f64),
            ("classifier.topic_max_sequence_length", c.topic_max_sequence_length as f64),
            ("classifier.runs", c.runs as f64),
        ])
    }

    pub fn validate(&self) -> Result<(), String> {
        match self.positive_fields().into_iter().find(|(_, v)| *v <= 0.0) {
            Some((name, v)) => Err(format!("{name} must be positive, got {v}")),
            None => Ok(()),
        }
    }
}
