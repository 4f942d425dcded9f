use std::collections::BTreeMap;
use std::fmt::Write;

use serde::{Deserialize, Serialize};

use super::MetricsError;

/// Per-dataset scores as fractions, with the per-run maps they came from.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct ScoreTable {
    pub scores: BTreeMap<String, f64>,
    #[serde(default)]
    pub runs: Vec<BTreeMap<String, f64>>,
}

impl ScoreTable {
    pub fn from_scores<I, S>(scores: I) -> Result<Self, MetricsError>
    where
        I: IntoIterator<Item = (S, f64)>,
        S: Into<String>,
    {
        let table = ScoreTable {
            scores: scores.into_iter().map(|(k, v)| (k.into(), v)).collect(),
            runs: Vec::new(),
        };
        table.validate()?;
        Ok(table)
    }

    /// Builds the table from per-run maps; each dataset's score is the mean
    /// over the runs that contain it.
    pub fn from_runs(runs: Vec<BTreeMap<String, f64>>) -> Result<Self, MetricsError> {
        let mut per: BTreeMap<String, Vec<f64>> = BTreeMap::new();
        for run in &runs {
            for (k, v) in run {
                per.entry(k.clone()).or_default().push(*v);
            }
        }
        let mut scores = BTreeMap::new();
        for (k, v) in per {
            scores.insert(k, mean_over_runs(&v)?);
        }
        let table = ScoreTable { scores, runs };
        table.validate()?;
        Ok(table)
    }

    pub fn validate(&self) -> Result<(), MetricsError> {
        let all = self.scores.iter().chain(self.runs.iter().flatten());
        for (dataset, &score) in all {
            if !(0.0..=1.0).contains(&score) {
                return Err(MetricsError::ScoreOutOfRange {
                    dataset: dataset.clone(),
                    score,
                });
            }
        }
        Ok(())
    }
}

pub fn mean_over_runs(run_scores: &[f64]) -> Result<f64, MetricsError> {
    if run_scores.is_empty() {
        return Err(MetricsError::EmptyInput);
    }
    Ok(run_scores.iter().sum::<f64>() / run_scores.len() as f64)
}

/// Unweighted mean over datasets.
pub fn global_average(table: &ScoreTable) -> Result<f64, MetricsError> {
    let v: Vec<f64> = table.scores.values().copied().collect();
    mean_over_runs(&v)
}

/// Plain-text table: one row per dataset, scores ×100 with two decimals,
/// and an Average row.
pub fn render_table(columns: &[(&str, &ScoreTable)]) -> String {
    let mut datasets: Vec<&String> = columns
        .iter()
        .flat_map(|(_, t)| t.scores.keys())
        .collect();
    datasets.sort();
    datasets.dedup();
    let width = datasets.iter().map(|d| d.len()).max().unwrap_or(0).max(7);
    let mut out = String::new();
    let _ = write!(out, "{:<width$}", "Task");
    for (name, _) in columns {
        let _ = write!(out, " {name:>8}");
    }
    out.push('\n');
    for d in &datasets {
        let _ = write!(out, "{d:<width$}");
        for (_, t) in columns {
            match t.scores.get(*d) {
                Some(s) => {
                    let _ = write!(out, " {:>8.2}", s * 100.0);
                }
                None => {
                    let _ = write!(out, " {:>8}", "-");
                }
            }
        }
        out.push('\n');
    }
    let _ = write!(out, "{:<width$}", "Average");
    for (_, t) in columns {
        match global_average(t) {
            Ok(avg) => {
                let _ = write!(out, " {:>8.2}", avg * 100.0);
            }
            Err(_) => {
                let _ = write!(out, " {:>8}", "-");
            }
        }
    }
    out.push('\n');
    out
}
