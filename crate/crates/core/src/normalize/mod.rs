//! Deterministic normalization of social-media posts.
//!
//! The pipeline order is fixed: URLs, then mentions, then seed hashtags,
//! then (optionally) emoji, then whitespace. URLs go first because they may
//! contain `@`.

mod emoji;

use std::collections::BTreeSet;
use std::sync::OnceLock;

use regex::Regex;
use serde::{Deserialize, Serialize};
use thiserror::Error;

pub use emoji::count_emoji;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum NormalizeError {
    #[error("record {id}: text is empty after normalization")]
    EmptyAfterNormalization { id: String },
    #[error("invalid normalization config: {0}")]
    InvalidConfig(String),
}

/// One labeled social-media post.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TweetRecord {
    pub id: String,
    pub text: String,
    pub label: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub topic: Option<String>,
    #[serde(default)]
    pub dataset: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(default)]
pub struct NormalizationConfig {
    pub user_token: String,
    pub url_token: String,
    pub seed_hashtags: BTreeSet<String>,
    pub strip_emoji: bool,
    pub collapse_whitespace: bool,
}

impl Default for NormalizationConfig {
    fn default() -> Self {
        Self {
            user_token: "USER".to_string(),
            url_token: "URL".to_string(),
            seed_hashtags: BTreeSet::new(),
            strip_emoji: false,
            collapse_whitespace: true,
        }
    }
}

impl NormalizationConfig {
    /// Adds seed hashtags, lowercased and `#`-prefixed.
    pub fn with_seed_hashtags<I, S>(mut self, seeds: I) -> Self
    where
        I: IntoIterator<Item = S>,
        S: AsRef<str>,
    {
        self.seed_hashtags
            .extend(seeds.into_iter().filter_map(|s| canonical_hashtag(s.as_ref())));
        self
    }

    /// Checks the replacement tokens. A token that could itself be masked
    /// again would break idempotence, so `@`, URL prefixes and emoji are
    /// rejected along with whitespace.
    pub fn validate(&self) -> Result<(), NormalizeError> {
        for (name, token) in [("user_token", &self.user_token), ("url_token", &self.url_token)] {
            if token.is_empty() {
                return Err(NormalizeError::InvalidConfig(format!("{name} is empty")));
            }
            if token.chars().any(char::is_whitespace) {
                return Err(NormalizeError::InvalidConfig(format!("{name} contains whitespace")));
            }
            let lower = token.to_lowercase();
            if token.contains('@') || lower.contains("://") || lower.contains("www.") {
                return Err(NormalizeError::InvalidConfig(format!(
                    "{name} {token:?} would be re-masked"
                )));
            }
            if count_emoji(token) > 0 {
                return Err(NormalizeError::InvalidConfig(format!("{name} contains emoji")));
            }
        }
        for seed in &self.seed_hashtags {
            if canonical_hashtag(seed).as_deref() != Some(seed.as_str()) {
                return Err(NormalizeError::InvalidConfig(format!(
                    "seed hashtag {seed:?} must be lowercase with a leading '#'"
                )));
            }
        }
        Ok(())
    }
}

/// Lowercases and prefixes `#`; `None` for empty or whitespace-bearing input.
pub fn canonical_hashtag(raw: &str) -> Option<String> {
    let trimmed = raw.trim();
    let body = trimmed.strip_prefix('#').unwrap_or(trimmed);
    if body.is_empty() || body.chars().any(char::is_whitespace) {
        return None;
    }
    Some(format!("#{}", body.to_lowercase()))
}

fn url_pattern() -> &'static Regex {
    static URL: OnceLock<Regex> = OnceLock::new();
    URL.get_or_init(|| Regex::new(r"(?i)https?://\S+|www\.\S+").expect("valid URL pattern"))
}

fn is_handle_char(c: char) -> bool {
    c.is_ascii_alphanumeric() || c == '_'
}

pub(crate) const MAX_HANDLE_LEN: usize = 15;

/// Byte ranges of mentions: `@` plus 1..=15 handle characters, not preceded
/// by a handle character or another `@`, and not followed by a handle
/// character.
pub(crate) fn mention_spans(text: &str) -> Vec<(usize, usize)> {
    let bytes = text.as_bytes();
    let mut spans = Vec::new();
    let mut prev: Option<char> = None;
    for (i, c) in text.char_indices() {
        if c == '@' && !prev.is_some_and(|p| is_handle_char(p) || p == '@') {
            let run = bytes[i + 1..]
                .iter()
                .take_while(|&&b| is_handle_char(b as char))
                .count();
            if (1..=MAX_HANDLE_LEN).contains(&run) {
                spans.push((i, i + 1 + run));
            }
        }
        prev = Some(c);
    }
    spans
}

fn replace_spans(text: &str, spans: &[(usize, usize)], token: &str) -> String {
    let mut out = String::with_capacity(text.len());
    let mut last = 0;
    for &(from, to) in spans {
        out.push_str(&text[last..from]);
        out.push_str(token);
        last = to;
    }
    out.push_str(&text[last..]);
    out
}

/// Replaces every mention with `cfg.user_token`.
pub fn mask_mentions(text: &str, cfg: &NormalizationConfig) -> String {
    replace_spans(text, &mention_spans(text), &cfg.user_token)
}

/// Replaces every `http(s)://…` or `www.…` run with `cfg.url_token`.
pub fn mask_urls(text: &str, cfg: &NormalizationConfig) -> String {
    url_pattern()
        .replace_all(text, regex::NoExpand(&cfg.url_token))
        .into_owned()
}

/// Whether any URL pattern occurs in `text`.
pub fn contains_url(text: &str) -> bool {
    url_pattern().is_match(text)
}

/// Whether any mention pattern occurs in `text`.
pub fn contains_mention(text: &str) -> bool {
    !mention_spans(text).is_empty()
}

/// Deletes whole tokens whose lowercase form is a seed hashtag.
pub fn strip_seed_hashtags(text: &str, seeds: &BTreeSet<String>) -> String {
    if seeds.is_empty() {
        return text.to_string();
    }
    let is_seed = |tok: &str| seeds.contains(&tok.to_lowercase());
    if !text.split_whitespace().any(is_seed) {
        return text.to_string();
    }
    text.split_whitespace()
        .filter(|tok| !is_seed(tok))
        .collect::<Vec<_>>()
        .join(" ")
}

pub fn collapse_whitespace(text: &str) -> String {
    text.split_whitespace().collect::<Vec<_>>().join(" ")
}

/// Removes all emoji and collapses whitespace.
pub fn strip_emoji(text: &str) -> String {
    collapse_whitespace(&emoji::blank_emoji(text))
}

/// Normalizes the text of a record. Idempotent for a fixed config.
pub fn normalize_text(text: &str, cfg: &NormalizationConfig) -> String {
    let text = mask_urls(text, cfg);
    let text = mask_mentions(&text, cfg);
    let text = strip_seed_hashtags(&text, &cfg.seed_hashtags);
    let text = if cfg.strip_emoji {
        // Blanking can expose a seed glued to an emoji ("#not😂") or shorten
        // an overlong handle that ended in a keycap digit, so the mention and
        // seed passes run again to keep the function idempotent.
        let text = mask_mentions(&emoji::blank_emoji(&text), cfg);
        strip_seed_hashtags(&text, &cfg.seed_hashtags)
    } else {
        text
    };
    if cfg.collapse_whitespace {
        collapse_whitespace(&text)
    } else {
        text
    }
}

pub fn normalize_tweet(
    record: &TweetRecord,
    cfg: &NormalizationConfig,
) -> Result<TweetRecord, NormalizeError> {
    let text = normalize_text(&record.text, cfg);
    if text.trim().is_empty() {
        return Err(NormalizeError::EmptyAfterNormalization {
            id: record.id.clone(),
        });
    }
    Ok(TweetRecord {
        text,
        ..record.clone()
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cfg() -> NormalizationConfig {
        NormalizationConfig::default()
    }

    fn seeds(list: &[&str]) -> BTreeSet<String> {
        list.iter().map(|s| s.to_string()).collect()
    }

    #[test]
    fn mentions() {
        assert_eq!(mask_mentions("@john hi", &cfg()), "USER hi");
        assert_eq!(mask_mentions("no mentions here", &cfg()), "no mentions here");
        assert_eq!(mask_mentions("@a @b hi @a", &cfg()), "USER USER hi USER");
    }

    #[test]
    fn mention_boundaries() {
        assert_eq!(mask_mentions("mail a@b.com", &cfg()), "mail a@b.com");
        assert_eq!(mask_mentions("(@bob)", &cfg()), "(USER)");
        assert_eq!(mask_mentions("RT @bob: hi", &cfg()), "RT USER: hi");
        // 16 handle characters is not a handle.
        assert_eq!(mask_mentions("@abcdefghijklmnop", &cfg()), "@abcdefghijklmnop");
        assert_eq!(mask_mentions("@abcdefghijklmno", &cfg()), "USER");
        assert_eq!(mask_mentions("@@bob", &cfg()), "@@bob");
        assert_eq!(mask_mentions("@", &cfg()), "@");
    }

    #[test]
    fn urls() {
        assert_eq!(mask_urls("see https://t.co/xyz now", &cfg()), "see URL now");
        assert_eq!(mask_urls("no links", &cfg()), "no links");
        assert_eq!(mask_urls("http://a.com and https://b.org", &cfg()), "URL and URL");
        assert_eq!(mask_urls("go www.example.com", &cfg()), "go URL");
        assert_eq!(mask_urls("HTTPS://X.CO", &cfg()), "URL");
    }

    #[test]
    fn custom_tokens_are_literal() {
        let c = NormalizationConfig {
            url_token: "$0<url>".into(),
            ..cfg()
        };
        assert_eq!(mask_urls("x http://y", &c), "x $0<url>");
    }

    #[test]
    fn seed_hashtags() {
        let s = seeds(&["#sarcasm"]);
        assert_eq!(strip_seed_hashtags("I love waiting #sarcasm", &s), "I love waiting");
        assert_eq!(strip_seed_hashtags("plain text", &s), "plain text");
        assert_eq!(strip_seed_hashtags("#Sarcasm mid #sarcasm end", &s), "mid end");
        assert_eq!(strip_seed_hashtags("#sarcasm. kept", &s), "#sarcasm. kept");
        assert_eq!(strip_seed_hashtags("#sarcastic kept", &s), "#sarcastic kept");
    }

    #[test]
    fn full_normalization() {
        let c = cfg().with_seed_hashtags(["#irony"]);
        let r = TweetRecord {
            id: "1".into(),
            text: "@x see https://t.co/q #irony".into(),
            label: "ironic".into(),
            topic: None,
            dataset: "irony_hee_a".into(),
        };
        assert_eq!(normalize_tweet(&r, &c).unwrap().text, "USER see URL");
    }

    #[test]
    fn url_masked_before_mention() {
        assert_eq!(normalize_text("https://x.com/@bob hi", &cfg()), "URL hi");
    }

    #[test]
    fn degenerate_text_is_an_error() {
        let c = cfg().with_seed_hashtags(["sarcasm"]);
        let r = TweetRecord {
            id: "7".into(),
            text: "#sarcasm".into(),
            label: "sarcastic".into(),
            topic: None,
            dataset: String::new(),
        };
        assert_eq!(
            normalize_tweet(&r, &c),
            Err(NormalizeError::EmptyAfterNormalization { id: "7".into() })
        );
    }

    #[test]
    fn emoji_stripping() {
        assert_eq!(strip_emoji("hi 😀😀"), "hi");
        assert_eq!(strip_emoji("plain"), "plain");
        assert_eq!(strip_emoji("@😀bob"), "@ bob");
        let c = NormalizationConfig {
            strip_emoji: true,
            ..cfg()
        };
        // Blanking must not glue a mention back together.
        let once = normalize_text("@😀bob", &c);
        assert_eq!(normalize_text(&once, &c), once);
    }

    #[test]
    fn config_validation() {
        assert!(cfg().validate().is_ok());
        for bad in ["", "U SER", "@USER", "www.x", "😀"] {
            let c = NormalizationConfig {
                user_token: bad.into(),
                ..cfg()
            };
            assert!(c.validate().is_err(), "{bad:?} accepted");
        }
        let mut c = cfg();
        c.seed_hashtags.insert("Sarcasm".into());
        assert!(c.validate().is_err());
    }

    #[test]
    fn canonical_hashtags() {
        assert_eq!(canonical_hashtag("Sarcasm").as_deref(), Some("#sarcasm"));
        assert_eq!(canonical_hashtag("#NOT").as_deref(), Some("#not"));
        assert_eq!(canonical_hashtag("#"), None);
    }
}
