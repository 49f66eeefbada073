use rand::Rng;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::linalg::Matrix;
use crate::rng::{derive_seed, seeded, SeededRng};

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct KMeansConfig {
    pub restarts: usize,
    pub max_iter: usize,
}

impl Default for KMeansConfig {
    fn default() -> Self {
        Self {
            restarts: 20,
            max_iter: 300,
        }
    }
}

#[derive(Clone, Debug)]
pub struct KMeansResult {
    pub labels: Vec<usize>,
    /// Centroids as columns.
    pub centroids: Matrix,
    pub inertia: f64,
}

fn sq_dist(points: &Matrix, i: usize, centroids: &Matrix, c: usize) -> f64 {
    (points.column(i) - centroids.column(c)).norm_squared()
}

fn plus_plus_init(points: &Matrix, k: usize, rng: &mut SeededRng) -> Matrix {
    let n = points.ncols();
    let mut centroids = Matrix::zeros(points.nrows(), k);
    let first = rng.random_range(0..n);
    centroids.set_column(0, &points.column(first));
    let mut d2: Vec<f64> = (0..n).map(|i| sq_dist(points, i, &centroids, 0)).collect();
    for c in 1..k {
        let total: f64 = d2.iter().sum();
        let pick = if total > 0.0 {
            let mut target = rng.random::<f64>() * total;
            let mut chosen = n - 1;
            for (i, &w) in d2.iter().enumerate() {
                if target < w {
                    chosen = i;
                    break;
                }
                target -= w;
            }
            chosen
        } else {
            rng.random_range(0..n)
        };
        centroids.set_column(c, &points.column(pick));
        for (i, d) in d2.iter_mut().enumerate() {
            *d = d.min(sq_dist(points, i, &centroids, c));
        }
    }
    centroids
}

fn lloyd(points: &Matrix, mut centroids: Matrix, max_iter: usize) -> KMeansResult {
    let (n, k) = (points.ncols(), centroids.ncols());
    let mut labels = vec![usize::MAX; n];
    for _ in 0..max_iter {
        let mut changed = false;
        for (i, label) in labels.iter_mut().enumerate() {
            let mut best = (f64::INFINITY, 0);
            for c in 0..k {
                let d = sq_dist(points, i, &centroids, c);
                if d < best.0 {
                    best = (d, c);
                }
            }
            if *label != best.1 {
                *label = best.1;
                changed = true;
            }
        }
        if !changed {
            break;
        }
        let mut sums = Matrix::zeros(points.nrows(), k);
        let mut counts = vec![0usize; k];
        for (i, &l) in labels.iter().enumerate() {
            let mut col = sums.column_mut(l);
            col += points.column(i);
            counts[l] += 1;
        }
        for c in 0..k {
            // An empty cluster keeps its previous centroid.
            if counts[c] > 0 {
                centroids.set_column(c, &(sums.column(c) / counts[c] as f64));
            }
        }
    }
    let inertia = labels
        .iter()
        .enumerate()
        .map(|(i, &l)| sq_dist(points, i, &centroids, l))
        .sum();
    KMeansResult {
        labels,
        centroids,
        inertia,
    }
}

/// k-means on the columns of `points` with k-means++ seeding. The restart
/// with the lowest inertia wins (ties go to the earlier restart).
pub fn kmeans(points: &Matrix, k: usize, cfg: &KMeansConfig, seed: u64) -> Result<KMeansResult> {
    let n = points.ncols();
    if k == 0 || k > n {
        return Err(Error::param(format!("cluster count {k} not in 1..={n}")));
    }
    if cfg.restarts == 0 || cfg.max_iter == 0 {
        return Err(Error::param("k-means needs at least one restart and one iteration"));
    }
    let runs: Vec<KMeansResult> = (0..cfg.restarts)
        .into_par_iter()
        .map(|r| {
            let mut rng = seeded(derive_seed(seed, &[r as u64]));
            lloyd(points, plus_plus_init(points, k, &mut rng), cfg.max_iter)
        })
        .collect();
    let mut best = 0;
    for (r, run) in runs.iter().enumerate() {
        if run.inertia < runs[best].inertia {
            best = r;
        }
    }
    Ok(runs.into_iter().nth(best).expect("at least one restart"))
}
