//! Registry of the seventeen gold social-meaning datasets: class sets,
//! topic-bearing tasks and the hashtags their authors collected on.

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DatasetSpec {
    pub name: String,
    pub classes: Vec<String>,
    /// Tasks whose posts carry a topic term appended for classification.
    #[serde(default)]
    pub has_topic: bool,
    #[serde(default)]
    pub seed_hashtags: BTreeSet<String>,
}

impl DatasetSpec {
    pub fn new(name: &str, classes: &[&str]) -> Self {
        Self {
            name: name.to_string(),
            classes: classes.iter().map(|c| c.to_string()).collect(),
            has_topic: false,
            seed_hashtags: BTreeSet::new(),
        }
    }

    pub fn has_class(&self, label: &str) -> bool {
        self.classes.iter().any(|c| c == label)
    }

    fn topic(mut self) -> Self {
        self.has_topic = true;
        self
    }

    fn seeds(mut self, tags: &[&str]) -> Self {
        self.seed_hashtags = tags.iter().map(|t| t.to_string()).collect();
        self
    }
}

const SARCASM: &[&str] = &["sarcastic", "non-sarcastic"];
const HUMOR: &[&str] = &["humor", "not humor"];

/// All built-in dataset specs, in alphabetical order of name.
pub fn builtin() -> Vec<DatasetSpec> {
    vec![
        DatasetSpec::new("crisis_oltea", &["on-topic", "off-topic"]).topic(),
        DatasetSpec::new("emo_moham", &["anger", "joy", "optimism", "sadness"]),
        DatasetSpec::new("hate_bas", &["hateful", "none"]),
        DatasetSpec::new("hate_david", &["hate", "offensive", "neither"]),
        DatasetSpec::new("hate_waseem", &["racism", "sexism", "none"]),
        DatasetSpec::new("humor_meaney", HUMOR),
        DatasetSpec::new("humor_potash", HUMOR),
        DatasetSpec::new("irony_hee_a", &["ironic", "not ironic"])
            .seeds(&["#irony", "#not", "#sarcasm"]),
        DatasetSpec::new("irony_hee_b", &["IC", "SI", "OI", "NI"])
            .seeds(&["#irony", "#not", "#sarcasm"]),
        DatasetSpec::new("offense_zamp", &["offensive", "not offensive"]),
        DatasetSpec::new("sarc_bam", SARCASM).seeds(&["#sarcasm", "#sarcastic"]),
        DatasetSpec::new("sarc_ptacek", SARCASM).seeds(&["#sarcasm", "#sarcastic"]),
        DatasetSpec::new("sarc_rajad", SARCASM).seeds(&["#not", "#sarcasm"]),
        DatasetSpec::new("sarc_riloff", SARCASM).seeds(&["#sarcasm", "#sarcastic"]),
        DatasetSpec::new("senti_rosen", &["negative", "neutral", "positive"]),
        DatasetSpec::new("senti_thel", &["negative", "positive"]),
        DatasetSpec::new("stance_moham", &["against", "favor", "none"]).topic(),
    ]
}

pub fn lookup(name: &str) -> Option<DatasetSpec> {
    builtin().into_iter().find(|d| d.name == name)
}
