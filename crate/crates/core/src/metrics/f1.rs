use std::collections::HashMap;

use super::MetricsError;

/// Per-class F1 in the order of `classes`. A class with no predicted and no
/// gold occurrences scores 0.
pub fn per_class_f1<S: AsRef<str>>(
    gold: &[S],
    predicted: &[S],
    classes: &[S],
) -> Result<Vec<f64>, MetricsError> {
    if gold.len() != predicted.len() {
        return Err(MetricsError::LengthMismatch(gold.len(), predicted.len()));
    }
    if gold.is_empty() || classes.is_empty() {
        return Err(MetricsError::EmptyInput);
    }
    let index: HashMap<&str, usize> = classes
        .iter()
        .enumerate()
        .map(|(i, c)| (c.as_ref(), i))
        .collect();
    let lookup = |label: &S| {
        index
            .get(label.as_ref())
            .copied()
            .ok_or_else(|| MetricsError::UnknownLabel(label.as_ref().to_string()))
    };
    let k = classes.len();
    let (mut tp, mut fp, mut fne) = (vec![0usize; k], vec![0usize; k], vec![0usize; k]);
    for (g, p) in gold.iter().zip(predicted) {
        let (g, p) = (lookup(g)?, lookup(p)?);
        if g == p {
            tp[g] += 1;
        } else {
            fp[p] += 1;
            fne[g] += 1;
        }
    }
    Ok((0..k)
        .map(|c| {
            let denom = 2 * tp[c] + fp[c] + fne[c];
            if tp[c] == 0 {
                0.0
            } else {
                2.0 * tp[c] as f64 / denom as f64
            }
        })
        .collect())
}

/// Unweighted mean of per-class F1 over the declared classes.
pub fn macro_f1<S: AsRef<str>>(
    gold: &[S],
    predicted: &[S],
    classes: &[S],
) -> Result<f64, MetricsError> {
    let scores = per_class_f1(gold, predicted, classes)?;
    Ok(scores.iter().sum::<f64>() / scores.len() as f64)
}
