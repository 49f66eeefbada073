use super::LabeledDataset;
use crate::error::{Error, Result};
use crate::rng::{permutation, seeded};

/// Stratified train/test split.
///
/// Each class contributes `round(fraction * n_c)` points to the training set
/// (at least one to each side when `0 < fraction < 1`). Both halves keep the
/// original column order.
pub fn split_dataset(
    data: &LabeledDataset,
    train_fraction: f64,
    seed: u64,
) -> Result<(LabeledDataset, LabeledDataset)> {
    if !(train_fraction > 0.0 && train_fraction <= 1.0) {
        return Err(Error::param(format!("train fraction {train_fraction} not in (0, 1]")));
    }
    let mut rng = seeded(seed);
    let mut in_train = vec![false; data.len()];
    for c in 0..data.num_classes() {
        let idx = data.class_indices(c);
        let n = idx.len();
        if n == 0 {
            continue;
        }
        let mut take = (train_fraction * n as f64).round() as usize;
        if train_fraction < 1.0 {
            if n < 2 {
                return Err(Error::param(format!(
                    "class {c} has {n} point(s); too small to stratify"
                )));
            }
            take = take.clamp(1, n - 1);
        }
        let order = permutation(n, &mut rng);
        for &k in &order[..take] {
            in_train[idx[k]] = true;
        }
    }
    let train: Vec<usize> = (0..data.len()).filter(|&i| in_train[i]).collect();
    let test: Vec<usize> = (0..data.len()).filter(|&i| !in_train[i]).collect();
    Ok((data.subset(&train), data.subset(&test)))
}
