//! Corpus-level BLEU with one reference per hypothesis.
//!
//! Clipped n-gram matches and hypothesis n-gram totals are pooled over the
//! corpus for each order, then combined as a uniform geometric mean times
//! the brevity penalty. Orders for which the hypotheses contain no n-grams
//! at all are left out of the mean, so very short corpora still score.

use std::collections::HashMap;

use serde::{Deserialize, Serialize};

use super::MetricsError;

pub const BLEU_VARIANT: &str = "corpus-bleu-4/uniform/single-ref/whitespace";

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum Smoothing {
    /// Any zero precision makes the score 0.
    None,
    /// Zero match counts are replaced by epsilon before dividing.
    Epsilon(f64),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BleuScore {
    pub score: f64,
    pub precisions: Vec<f64>,
    pub matches: Vec<usize>,
    pub totals: Vec<usize>,
    pub brevity_penalty: f64,
    pub hypothesis_length: usize,
    pub reference_length: usize,
    pub variant: String,
}

fn ngram_counts<'a>(tokens: &'a [String], n: usize) -> HashMap<&'a [String], usize> {
    let mut counts = HashMap::new();
    if tokens.len() >= n {
        for w in tokens.windows(n) {
            *counts.entry(w).or_insert(0) += 1;
        }
    }
    counts
}

pub fn corpus_bleu(
    references: &[Vec<String>],
    hypotheses: &[Vec<String>],
    max_order: usize,
    smoothing: Smoothing,
) -> Result<BleuScore, MetricsError> {
    if references.len() != hypotheses.len() {
        return Err(MetricsError::LengthMismatch(references.len(), hypotheses.len()));
    }
    if hypotheses.is_empty() || max_order == 0 {
        return Err(MetricsError::EmptyInput);
    }
    let mut matches = vec![0usize; max_order];
    let mut totals = vec![0usize; max_order];
    let (mut hyp_len, mut ref_len) = (0, 0);
    for (r, h) in references.iter().zip(hypotheses) {
        hyp_len += h.len();
        ref_len += r.len();
        for n in 1..=max_order {
            let ref_counts = ngram_counts(r, n);
            for (gram, count) in ngram_counts(h, n) {
                matches[n - 1] += count.min(ref_counts.get(gram).copied().unwrap_or(0));
                totals[n - 1] += count;
            }
        }
    }
    let precisions: Vec<f64> = matches
        .iter()
        .zip(&totals)
        .map(|(&m, &t)| if t == 0 { 0.0 } else { m as f64 / t as f64 })
        .collect();
    let brevity_penalty = if hyp_len == 0 {
        0.0
    } else if hyp_len > ref_len {
        1.0
    } else {
        (1.0 - ref_len as f64 / hyp_len as f64).exp()
    };

    let mut log_sum = 0.0;
    let mut orders = 0usize;
    let mut zero = false;
    for (&m, &t) in matches.iter().zip(&totals) {
        if t == 0 {
            continue;
        }
        orders += 1;
        let num = match (m, smoothing) {
            (0, Smoothing::Epsilon(eps)) => eps,
            (0, Smoothing::None) => {
                zero = true;
                break;
            }
            (m, _) => m as f64,
        };
        log_sum += (num / t as f64).ln();
    }
    let score = if zero || orders == 0 {
        0.0
    } else {
        brevity_penalty * (log_sum / orders as f64).exp()
    };
    Ok(BleuScore {
        score: score.clamp(0.0, 1.0),
        precisions,
        matches,
        totals,
        brevity_penalty,
        hypothesis_length: hyp_len,
        reference_length: ref_len,
        variant: BLEU_VARIANT.to_string(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn toks(s: &str) -> Vec<String> {
        s.split_whitespace().map(str::to_string).collect()
    }

    #[test]
    fn identical_is_one() {
        let h = vec![toks("the quick brown fox jumps"), toks("hi")];
        let b = corpus_bleu(&h, &h, 4, Smoothing::None).unwrap();
        assert!((b.score - 1.0).abs() < 1e-12);
    }

    #[test]
    fn disjoint_is_zero() {
        let b = corpus_bleu(&[toks("a b c d")], &[toks("w x y z")], 4, Smoothing::None).unwrap();
        assert_eq!(b.score, 0.0);
    }

    #[test]
    fn clipped_counts() {
        let b = corpus_bleu(
            &[toks("the cat is on the mat")],
            &[toks("the cat the cat on the mat")],
            4,
            Smoothing::None,
        )
        .unwrap();
        assert_eq!(b.matches, [5, 3, 1, 0]);
        assert_eq!(b.totals, [7, 6, 5, 4]);
        assert_eq!(b.brevity_penalty, 1.0);
        assert_eq!(b.score, 0.0);
    }

    #[test]
    fn short_hypothesis_is_penalized() {
        let b = corpus_bleu(&[toks("a b c d e f")], &[toks("a b c")], 2, Smoothing::None).unwrap();
        assert!((b.brevity_penalty - (-1.0f64).exp()).abs() < 1e-12);
        assert!((b.score - (-1.0f64).exp()).abs() < 1e-12);
    }

    #[test]
    fn errors() {
        assert_eq!(
            corpus_bleu(&[toks("a")], &[], 4, Smoothing::None),
            Err(MetricsError::LengthMismatch(1, 0))
        );
        assert_eq!(corpus_bleu(&[], &[], 4, Smoothing::None), Err(MetricsError::EmptyInput));
    }
}
