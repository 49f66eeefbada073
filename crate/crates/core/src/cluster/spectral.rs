use nalgebra::SymmetricEigen;

use super::affinity::AffinityMatrix;
use super::canonical_labels;
use super::kmeans::{kmeans, KMeansConfig};
use crate::error::{Error, Result};
use crate::linalg::Matrix;
use crate::rng::derive_seed;

/// Degree given to isolated vertices.
const ISOLATED_DEGREE: f64 = 1e-12;

/// Row-normalized spectral embedding (one column per point) from the `c`
/// eigenvectors of `I - D^{-1/2} W D^{-1/2}` with the smallest eigenvalues.
pub fn spectral_embedding(w: &AffinityMatrix, c: usize) -> Result<Matrix> {
    let a = w.matrix();
    let n = a.nrows();
    if c == 0 || c > n {
        return Err(Error::param(format!("cluster count {c} not in 1..={n}")));
    }
    let inv_sqrt: Vec<f64> = a
        .row_iter()
        .map(|r| {
            let d = r.sum();
            1.0 / if d > 0.0 { d } else { ISOLATED_DEGREE }.sqrt()
        })
        .collect();
    let m = Matrix::from_fn(n, n, |i, j| a[(i, j)] * inv_sqrt[i] * inv_sqrt[j]);
    let eig = SymmetricEigen::try_new(m, 1e-14, 100_000)
        .ok_or_else(|| Error::numerical("eigendecomposition of the normalized affinity failed"))?;
    let mut order: Vec<usize> = (0..n).collect();
    // Largest eigenvalues of the normalized affinity are the smallest of the Laplacian.
    order.sort_by(|&i, &j| eig.eigenvalues[j].total_cmp(&eig.eigenvalues[i]).then(i.cmp(&j)));
    let mut emb = Matrix::zeros(c, n);
    for (r, &k) in order.iter().take(c).enumerate() {
        for p in 0..n {
            emb[(r, p)] = eig.eigenvectors[(p, k)];
        }
    }
    for mut col in emb.column_iter_mut() {
        let norm = col.norm();
        if norm > 0.0 {
            col /= norm;
        }
    }
    Ok(emb)
}

/// Normalized spectral clustering. Labels are numbered in order of first
/// appearance. If k-means leaves a cluster empty it is rerun once with a
/// fresh seed.
pub fn spectral_cluster(w: &AffinityMatrix, c: usize, seed: u64) -> Result<Vec<usize>> {
    let n = w.len();
    if c == 0 || c > n {
        return Err(Error::param(format!("cluster count {c} not in 1..={n}")));
    }
    if c == 1 {
        return Ok(vec![0; n]);
    }
    let emb = spectral_embedding(w, c)?;
    let cfg = KMeansConfig::default();
    let mut labels = canonical_labels(&kmeans(&emb, c, &cfg, seed)?.labels);
    if labels.iter().max().map_or(0, |m| m + 1) < c {
        log::warn!("k-means left a cluster empty; re-seeding once");
        labels = canonical_labels(&kmeans(&emb, c, &cfg, derive_seed(seed, &[1]))?.labels);
    }
    Ok(labels)
}
