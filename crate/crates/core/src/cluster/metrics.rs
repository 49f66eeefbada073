use pathfinding::kuhn_munkres::kuhn_munkres;
use pathfinding::matrix::Matrix as Weights;

use crate::error::{Error, Result};
use crate::linalg::{nuclear_norm, select_columns, svd, Matrix};

/// Relabel so that clusters are numbered in order of first appearance.
pub fn canonical_labels(labels: &[usize]) -> Vec<usize> {
    let mut map = std::collections::HashMap::new();
    labels
        .iter()
        .map(|&l| {
            let next = map.len();
            *map.entry(l).or_insert(next)
        })
        .collect()
}

/// Fraction of points misassigned under the best one-to-one matching of
/// predicted to true labels.
pub fn misclassification_rate(predicted: &[usize], truth: &[usize]) -> Result<f64> {
    if predicted.len() != truth.len() {
        return Err(Error::dim(format!(
            "{} predicted labels, {} true labels",
            predicted.len(),
            truth.len()
        )));
    }
    let n = predicted.len();
    if n == 0 {
        return Ok(0.0);
    }
    let kp = predicted.iter().max().map_or(0, |m| m + 1);
    let kt = truth.iter().max().map_or(0, |m| m + 1);
    // Square so that every row can be matched.
    let k = kp.max(kt);
    let mut counts = Weights::new(k, k, 0i64);
    for (&p, &t) in predicted.iter().zip(truth) {
        counts[(p, t)] += 1;
    }
    let (matched, _) = kuhn_munkres(&counts);
    Ok(1.0 - matched as f64 / n as f64)
}

/// Cluster indices `0..num_clusters` with their member columns.
pub(crate) fn members(assignments: &[usize], num_clusters: usize) -> Vec<Vec<usize>> {
    let mut out = vec![Vec::new(); num_clusters];
    for (i, &a) in assignments.iter().enumerate() {
        out[a].push(i);
    }
    out
}

/// `sum_c sum_{i in c} ||T y_i - P_c T y_i||^2 + lambda (sum_c ||T Y_c||_* - ||T Y||_*)`,
/// where `P_c` projects onto the span of `T Y_c` (numerical rank at
/// `1e-8 sigma_max`). Empty clusters contribute nothing.
pub fn lrsc_objective(t: &Matrix, assignments: &[usize], y: &Matrix, lambda: f64) -> Result<f64> {
    if t.ncols() != y.nrows() {
        return Err(Error::dim(format!(
            "transform has {} columns, data dimension is {}",
            t.ncols(),
            y.nrows()
        )));
    }
    if assignments.len() != y.ncols() {
        return Err(Error::dim(format!(
            "{} assignments for {} points",
            assignments.len(),
            y.ncols()
        )));
    }
    let ty = t * y;
    let num = assignments.iter().max().map_or(0, |m| m + 1);
    let mut residual = 0.0;
    let mut nuclear = 0.0;
    for idx in members(assignments, num) {
        if idx.is_empty() {
            continue;
        }
        let block = select_columns(&ty, &idx);
        let f = svd(&block)?;
        let r = f.rank(1e-8);
        let u = f.u.columns(0, r);
        let proj = &u * (u.transpose() * &block);
        residual += (&block - proj).norm_squared();
        nuclear += f.singular_values.iter().sum::<f64>();
    }
    Ok(residual + lambda * (nuclear - nuclear_norm(&ty)?))
}
