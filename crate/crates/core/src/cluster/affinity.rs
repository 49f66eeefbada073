use nalgebra::{Cholesky, SymmetricEigen};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::decomp::{rpca, RpcaConfig};
use crate::error::{Error, Result};
use crate::linalg::{ensure_finite, Matrix, Vector};

const MAX_CONDITION: f64 = 1e10;
const REGULARIZATION: f64 = 1e-3;

/// Symmetric nonnegative affinity with an exactly zero diagonal.
#[derive(Clone, Debug, PartialEq)]
pub struct AffinityMatrix {
    w: Matrix,
}

impl AffinityMatrix {
    /// Validate an explicit affinity.
    pub fn new(w: Matrix) -> Result<Self> {
        ensure_finite(&w, "affinity")?;
        if !w.is_square() {
            return Err(Error::dim(format!("affinity is {}x{}", w.nrows(), w.ncols())));
        }
        if w.iter().any(|&v| v < 0.0) {
            return Err(Error::param("affinity has negative entries"));
        }
        if w != w.transpose() {
            return Err(Error::param("affinity is not symmetric"));
        }
        if (0..w.nrows()).any(|i| w[(i, i)] != 0.0) {
            return Err(Error::param("affinity diagonal is not zero"));
        }
        Ok(Self { w })
    }

    /// `W = |X| + |X'|` with the diagonal zeroed.
    pub fn from_coding(x: &Matrix) -> Result<Self> {
        if !x.is_square() {
            return Err(Error::dim(format!("coding matrix is {}x{}", x.nrows(), x.ncols())));
        }
        let a = x.abs();
        let mut w = &a + a.transpose();
        w.fill_diagonal(0.0);
        Ok(Self { w })
    }

    pub fn matrix(&self) -> &Matrix {
        &self.w
    }

    pub fn len(&self) -> usize {
        self.w.nrows()
    }

    pub fn is_empty(&self) -> bool {
        self.w.nrows() == 0
    }
}

/// Affine reconstruction weights of `point` from the columns of
/// `neighbors`: solve `(G + eps I) w = 1` with `G` the Gram matrix of the
/// neighbors centered at the point, then scale so that `sum(w) = 1`.
///
/// `eps = 1e-3 trace(G) / K` is added only when `G` is ill-conditioned.
pub fn lle_code(point: &Vector, neighbors: &Matrix) -> Result<Vector> {
    let k = neighbors.ncols();
    if k == 0 {
        return Err(Error::param("at least one neighbor is required"));
    }
    if neighbors.nrows() != point.len() {
        return Err(Error::dim(format!(
            "point has length {}, neighbors have length {}",
            point.len(),
            neighbors.nrows()
        )));
    }
    let mut centered = neighbors.clone();
    for mut col in centered.column_iter_mut() {
        col -= point;
    }
    let mut gram = centered.transpose() * &centered;

    let eig = SymmetricEigen::new(gram.clone());
    let lmax = eig.eigenvalues.max();
    let lmin = eig.eigenvalues.min();
    if !(lmin > 0.0) || lmax / lmin > MAX_CONDITION {
        let trace = gram.trace();
        // All neighbors coincide with the point: fall back to equal weights.
        let eps = if trace > 0.0 {
            REGULARIZATION * trace / k as f64
        } else {
            REGULARIZATION
        };
        for i in 0..k {
            gram[(i, i)] += eps;
        }
    }
    let chol =
        Cholesky::new(gram).ok_or_else(|| Error::Singular("neighbor Gram matrix is not positive definite".into()))?;
    let w = chol.solve(&Vector::from_element(k, 1.0));
    let total = w.sum();
    if total.abs() < 1e-12 || !total.is_finite() {
        return Err(Error::Degenerate(format!("reconstruction weights sum to {total:.3e}")));
    }
    Ok(w / total)
}

/// How R-SSC measures closeness when picking neighbors.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum NeighborMetric {
    /// Distance between the lines spanned by the points: points are scaled
    /// to unit length and neighbors are sign-aligned with the point, so
    /// scale and sign never matter.
    #[default]
    Angular,
    /// Plain Euclidean distance between the raw points.
    Euclidean,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RsscConfig {
    /// Nearest neighbors used to code each point.
    pub neighbors: usize,
    pub metric: NeighborMetric,
    /// A missing `beta` is filled in by [`RpcaConfig::for_point_set`].
    pub rpca: RpcaConfig,
}

impl Default for RsscConfig {
    fn default() -> Self {
        Self {
            neighbors: 6,
            metric: NeighborMetric::Angular,
            rpca: RpcaConfig::default(),
        }
    }
}

fn unit_columns(m: &Matrix) -> Matrix {
    let mut out = m.clone();
    for mut col in out.column_iter_mut() {
        let n = col.norm();
        if n > 0.0 {
            col /= n;
        }
    }
    out
}

/// The `k` nearest columns of `reference` to `point` (excluding column
/// `skip`), as a `d x k` neighbor matrix. Ties go to the lower index.
fn neighbors(
    reference: &Matrix,
    point: &Vector,
    k: usize,
    skip: usize,
    metric: NeighborMetric,
) -> (Vec<usize>, Matrix) {
    // (distance, index, sign applied to the neighbor)
    let mut d: Vec<(f64, usize, f64)> = reference
        .column_iter()
        .enumerate()
        .filter(|&(j, _)| j != skip)
        .map(|(j, c)| match metric {
            NeighborMetric::Euclidean => ((c - point).norm_squared(), j, 1.0),
            NeighborMetric::Angular => {
                let dot = c.dot(point);
                (1.0 - dot.abs(), j, if dot < 0.0 { -1.0 } else { 1.0 })
            }
        })
        .collect();
    d.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1)));
    d.truncate(k);
    let cols: Vec<Vector> = d.iter().map(|&(_, j, s)| reference.column(j) * s).collect();
    (d.iter().map(|t| t.1).collect(), Matrix::from_columns(&cols))
}

/// Sparse coding matrix `X`: row `i` holds the affine weights coding point
/// `i` by its nearest neighbors among the columns of the low-rank part of
/// `ty`.
pub fn rssc_coding(ty: &Matrix, cfg: &RsscConfig) -> Result<Matrix> {
    let n = ty.ncols();
    let k = cfg.neighbors;
    if k == 0 || k >= n {
        return Err(Error::param(format!(
            "neighbor count {k} must be in 1..{n} for {n} points"
        )));
    }
    let mut low = rpca(ty, &cfg.rpca.for_point_set(ty))?.low_rank;
    let mut points = ty.clone();
    if cfg.metric == NeighborMetric::Angular {
        low = unit_columns(&low);
        points = unit_columns(&points);
    }
    let rows: Vec<(Vec<usize>, Vector)> = (0..n)
        .into_par_iter()
        .map(|i| {
            let p: Vector = points.column(i).into_owned();
            let (idx, nb) = neighbors(&low, &p, k, i, cfg.metric);
            let w = lle_code(&p, &nb).map_err(|e| Error::Degenerate(format!("point {i}: {e}")))?;
            Ok((idx, w))
        })
        .collect::<Result<_>>()?;
    let mut x = Matrix::zeros(n, n);
    for (i, (idx, w)) in rows.iter().enumerate() {
        for (&j, &v) in idx.iter().zip(w.iter()) {
            x[(i, j)] = v;
        }
    }
    Ok(x)
}

/// R-SSC affinity: RPCA, nearest-neighbor affine coding, then
/// `W = |X| + |X'|`.
pub fn rssc_affinity(ty: &Matrix, cfg: &RsscConfig) -> Result<AffinityMatrix> {
    AffinityMatrix::from_coding(&rssc_coding(ty, cfg)?)
}
