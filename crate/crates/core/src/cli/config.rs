use std::collections::BTreeMap;
use std::path::Path;

use serde::{Deserialize, Serialize};

use super::CliError;
use crate::corpusio::SplitSpec;
use crate::datasets::{self, DatasetSpec};
use crate::genclient::GenerationParams;
use crate::normalize::NormalizationConfig;
use crate::simfilter::FilterConfig;

/// Per-dataset overrides; missing fields fall back to the built-in registry.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct DatasetOverride {
    pub classes: Option<Vec<String>>,
    pub seed_hashtags: Option<Vec<String>>,
    pub has_topic: Option<bool>,
}

/// Config file contents. Every section is optional; flags win over it.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct PipelineConfig {
    pub datasets: BTreeMap<String, DatasetOverride>,
    pub normalization: Option<NormalizationConfig>,
    pub filter: Option<FilterConfig>,
    pub split: Option<SplitSpec>,
    pub generation: Option<GenerationParams>,
    pub backend: Option<String>,
}

impl PipelineConfig {
    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Config(format!("{}: {e}", path.display())))?;
        serde_json::from_str(&text).map_err(|e| CliError::Config(format!("{}: {e}", path.display())))
    }

    /// Resolves a dataset by name. Unknown names need classes in the config.
    pub fn dataset(&self, name: &str) -> Result<DatasetSpec, CliError> {
        let over = self.datasets.get(name);
        let mut spec = match (datasets::lookup(name), over) {
            (Some(spec), _) => spec,
            (None, Some(o)) if o.classes.is_some() => DatasetSpec::new(name, &[]),
            _ => {
                return Err(CliError::Config(format!(
                    "unknown dataset {name:?}; declare its classes in the config"
                )))
            }
        };
        if let Some(o) = over {
            if let Some(classes) = &o.classes {
                spec.classes = classes.clone();
            }
            if let Some(seeds) = &o.seed_hashtags {
                spec.seed_hashtags = NormalizationConfig::default()
                    .with_seed_hashtags(seeds)
                    .seed_hashtags;
            }
            if let Some(t) = o.has_topic {
                spec.has_topic = t;
            }
        }
        Ok(spec)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn overrides_apply() {
        let cfg: PipelineConfig = serde_json::from_str(
            r#"{"datasets": {"emo_moham": {"seed_hashtags": ["Happy"]},
                             "custom": {"classes": ["x", "y"]}},
                "filter": {"copy_threshold": 0.9}}"#,
        )
        .unwrap();
        let emo = cfg.dataset("emo_moham").unwrap();
        assert!(emo.seed_hashtags.contains("#happy"));
        assert_eq!(emo.classes.len(), 4);
        assert_eq!(cfg.dataset("custom").unwrap().classes, ["x", "y"]);
        assert!(cfg.dataset("nope").is_err());
        let f = cfg.filter.unwrap();
        assert_eq!(f.copy_threshold, 0.9);
        assert_eq!(f.dedup_threshold, 0.5);
    }
}
