//! Seeded train/dev/test partitioning.
//!
//! Indices are shuffled with a ChaCha8 stream seeded from the split seed,
//! then sliced contiguously: test first, then dev, the remainder is train.
//! Each part keeps the input order of its records.

use std::collections::BTreeMap;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::CorpusError;
use crate::normalize::TweetRecord;

/// Key used for stratified splitting.
pub trait Labeled {
    fn stratum(&self) -> &str;
}

impl Labeled for TweetRecord {
    fn stratum(&self) -> &str {
        &self.label
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct SplitSpec {
    pub train_fraction: f64,
    pub dev_fraction: f64,
    pub test_fraction: f64,
    pub seed: u64,
    pub stratify_by_label: bool,
}

impl Default for SplitSpec {
    fn default() -> Self {
        Self {
            train_fraction: 0.8,
            dev_fraction: 0.1,
            test_fraction: 0.1,
            seed: 0,
            stratify_by_label: false,
        }
    }
}

impl SplitSpec {
    pub fn with_seed(seed: u64) -> Self {
        Self {
            seed,
            ..Self::default()
        }
    }

    pub fn validate(&self) -> Result<(), CorpusError> {
        let fr = [self.train_fraction, self.dev_fraction, self.test_fraction];
        if fr.iter().any(|f| !(f.is_finite() && *f > 0.0)) {
            return Err(CorpusError::InvalidSplit("fractions must be positive".into()));
        }
        let sum: f64 = fr.iter().sum();
        if (sum - 1.0).abs() > 1e-9 {
            return Err(CorpusError::InvalidSplit(format!("fractions sum to {sum}, not 1")));
        }
        Ok(())
    }

    /// `(train, dev, test)` sizes for `n` records.
    pub fn sizes(&self, n: usize) -> (usize, usize, usize) {
        let test = round_half_up(self.test_fraction * n as f64);
        let dev = round_half_up(self.dev_fraction * n as f64);
        (n - dev - test, dev, test)
    }
}

pub(crate) fn round_half_up(x: f64) -> usize {
    (x + 0.5).floor() as usize
}

fn shuffled(n: usize, rng: &mut ChaCha8Rng) -> Vec<usize> {
    let mut idx: Vec<usize> = (0..n).collect();
    idx.shuffle(rng);
    idx
}

/// Splits `total` across groups proportionally by largest remainder; ties
/// go to the earlier group.
fn apportion(total: usize, groups: &[usize]) -> Vec<usize> {
    let pool: usize = groups.iter().sum();
    if pool == 0 || total == 0 {
        return vec![0; groups.len()];
    }
    let exact: Vec<f64> = groups
        .iter()
        .map(|&g| total as f64 * g as f64 / pool as f64)
        .collect();
    let mut quota: Vec<usize> = exact.iter().map(|e| e.floor() as usize).collect();
    let mut order: Vec<usize> = (0..groups.len()).collect();
    order.sort_by(|&a, &b| {
        let fa = exact[a] - exact[a].floor();
        let fb = exact[b] - exact[b].floor();
        fb.total_cmp(&fa).then(a.cmp(&b))
    });
    let mut left = total - quota.iter().sum::<usize>();
    for &g in order.iter().cycle() {
        if left == 0 {
            break;
        }
        if quota[g] < groups[g] {
            quota[g] += 1;
            left -= 1;
        }
    }
    quota
}

fn take_parts<T>(records: Vec<T>, assignment: &[u8]) -> (Vec<T>, Vec<T>, Vec<T>) {
    let (mut train, mut dev, mut test) = (Vec::new(), Vec::new(), Vec::new());
    for (rec, part) in records.into_iter().zip(assignment) {
        match part {
            0 => train.push(rec),
            1 => dev.push(rec),
            _ => test.push(rec),
        }
    }
    (train, dev, test)
}

/// Partitions records into `(train, dev, test)`.
pub fn split_dataset<T: Labeled>(
    records: Vec<T>,
    spec: &SplitSpec,
) -> Result<(Vec<T>, Vec<T>, Vec<T>), CorpusError> {
    spec.validate()?;
    let n = records.len();
    if n < 3 {
        return Err(CorpusError::TooFewRecords { needed: 3, got: n });
    }
    let (_, dev_n, test_n) = spec.sizes(n);
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    let mut assignment = vec![0u8; n];

    if spec.stratify_by_label {
        let mut strata: BTreeMap<&str, Vec<usize>> = BTreeMap::new();
        for (i, r) in records.iter().enumerate() {
            strata.entry(r.stratum()).or_default().push(i);
        }
        let mut groups: Vec<Vec<usize>> = strata.into_values().collect();
        for g in groups.iter_mut() {
            g.shuffle(&mut rng);
        }
        let sizes: Vec<usize> = groups.iter().map(Vec::len).collect();
        let test_q = apportion(test_n, &sizes);
        let rest: Vec<usize> = sizes.iter().zip(&test_q).map(|(s, t)| s - t).collect();
        let dev_q = apportion(dev_n, &rest);
        for (g, members) in groups.iter().enumerate() {
            for &i in &members[..test_q[g]] {
                assignment[i] = 2;
            }
            for &i in &members[test_q[g]..test_q[g] + dev_q[g]] {
                assignment[i] = 1;
            }
        }
    } else {
        let order = shuffled(n, &mut rng);
        for &i in &order[..test_n] {
            assignment[i] = 2;
        }
        for &i in &order[test_n..test_n + dev_n] {
            assignment[i] = 1;
        }
    }
    Ok(take_parts(records, &assignment))
}

/// Moves `round(fraction * |train|)` seeded-random records into a new dev set.
pub fn carve_dev<T>(
    train: Vec<T>,
    fraction: f64,
    seed: u64,
) -> Result<(Vec<T>, Vec<T>), CorpusError> {
    if !(0.0..1.0).contains(&fraction) {
        return Err(CorpusError::InvalidSplit(format!(
            "dev fraction {fraction} outside [0, 1)"
        )));
    }
    let n = train.len();
    if n < 2 {
        return Err(CorpusError::TooFewRecords { needed: 2, got: n });
    }
    let dev_n = round_half_up(fraction * n as f64);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let order = shuffled(n, &mut rng);
    let mut assignment = vec![0u8; n];
    for &i in &order[..dev_n] {
        assignment[i] = 1;
    }
    let (rest, dev, _) = take_parts(train, &assignment);
    Ok((rest, dev))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[derive(Debug, Clone, PartialEq)]
    struct Item(usize, &'static str);

    impl Labeled for Item {
        fn stratum(&self) -> &str {
            self.1
        }
    }

    fn items(n: usize) -> Vec<Item> {
        (0..n).map(|i| Item(i, if i % 4 == 0 { "a" } else { "b" })).collect()
    }

    #[test]
    fn sizes_follow_rounding() {
        let spec = SplitSpec::default();
        assert_eq!(spec.sizes(100), (80, 10, 10));
        assert_eq!(spec.sizes(17), (13, 2, 2));
        assert_eq!(spec.sizes(25), (19, 3, 3));
        assert_eq!(spec.sizes(3), (3, 0, 0));
    }

    #[test]
    fn partition_is_deterministic() {
        let spec = SplitSpec::with_seed(42);
        let a = split_dataset(items(1000), &spec).unwrap();
        let b = split_dataset(items(1000), &spec).unwrap();
        assert_eq!(a, b);
        let c = split_dataset(items(1000), &SplitSpec::with_seed(43)).unwrap();
        assert_ne!(a.1, c.1);
    }

    #[test]
    fn too_few_records() {
        assert!(matches!(
            split_dataset(items(2), &SplitSpec::default()),
            Err(CorpusError::TooFewRecords { needed: 3, got: 2 })
        ));
    }

    #[test]
    fn invalid_fractions() {
        let spec = SplitSpec {
            train_fraction: 0.7,
            ..SplitSpec::default()
        };
        assert!(split_dataset(items(10), &spec).is_err());
    }

    #[test]
    fn stratified_keeps_proportions() {
        let spec = SplitSpec {
            stratify_by_label: true,
            ..SplitSpec::with_seed(7)
        };
        let (train, dev, test) = split_dataset(items(400), &spec).unwrap();
        assert_eq!((train.len(), dev.len(), test.len()), (320, 40, 40));
        assert_eq!(test.iter().filter(|i| i.1 == "a").count(), 10);
        assert_eq!(dev.iter().filter(|i| i.1 == "a").count(), 10);
    }

    #[test]
    fn apportion_sums() {
        assert_eq!(apportion(3, &[1, 1, 1]), vec![1, 1, 1]);
        assert_eq!(apportion(2, &[5, 5, 5]), vec![1, 1, 0]);
        assert_eq!(apportion(0, &[5]), vec![0]);
    }

    #[test]
    fn carve() {
        let (train, dev) = carve_dev(items(1000), 0.1, 1).unwrap();
        assert_eq!((train.len(), dev.len()), (900, 100));
        let (train, dev) = carve_dev(items(10), 0.0, 1).unwrap();
        assert_eq!((train.len(), dev.len()), (10, 0));
        assert!(carve_dev(items(1), 0.1, 1).is_err());
    }
}
