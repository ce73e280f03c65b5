//! Seeded index partitions.

use rand::seq::SliceRandom;

use crate::error::{Error, Result};
use crate::qsim::stream_rng;

// Top of the stream space, clear of the pair streams used for Gram entries.
const SPLIT_STREAM: u64 = u64::MAX;
const FOLD_STREAM: u64 = u64::MAX - 1;

fn shuffled(n: usize, seed: u64, stream: u64) -> Vec<usize> {
    let mut idx: Vec<usize> = (0..n).collect();
    idx.shuffle(&mut stream_rng(seed, stream));
    idx
}

/// Random train/test partition with round(n · test_fraction) test indices, both
/// sides non-empty. Each side is returned sorted.
pub fn train_test_split(n: usize, test_fraction: f64, seed: u64) -> Result<(Vec<usize>, Vec<usize>)> {
    if n < 2 {
        return Err(Error::contract(format!("cannot split {n} samples")));
    }
    if !(test_fraction > 0.0 && test_fraction < 1.0) {
        return Err(Error::contract(format!(
            "test fraction must lie in (0, 1), got {test_fraction}"
        )));
    }
    let n_test = ((n as f64 * test_fraction).round() as usize).clamp(1, n - 1);
    let idx = shuffled(n, seed, SPLIT_STREAM);
    let mut test = idx[..n_test].to_vec();
    let mut train = idx[n_test..].to_vec();
    test.sort_unstable();
    train.sort_unstable();
    Ok((train, test))
}

/// Splits positions 0..n into `k` validation folds of near-equal size.
pub fn kfold(n: usize, k: usize, seed: u64) -> Result<Vec<Vec<usize>>> {
    if k < 2 {
        return Err(Error::contract(format!("need at least 2 folds, got {k}")));
    }
    if k > n {
        return Err(Error::contract(format!("{k} folds requested for {n} samples")));
    }
    let idx = shuffled(n, seed, FOLD_STREAM);
    let (base, extra) = (n / k, n % k);
    let mut folds = Vec::with_capacity(k);
    let mut start = 0;
    for f in 0..k {
        let len = base + usize::from(f < extra);
        let mut fold = idx[start..start + len].to_vec();
        fold.sort_unstable();
        folds.push(fold);
        start += len;
    }
    Ok(folds)
}
