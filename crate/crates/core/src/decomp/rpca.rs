use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{ensure_finite, frobenius_norm, spectral_norm, svd, Matrix};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RpcaConfig {
    /// Weight of the sparse term; `None` means `1 / sqrt(max(rows, cols))`.
    pub beta: Option<f64>,
    /// Stop once `||M - L - S||_F / ||M||_F <= tol`.
    pub tol: f64,
    pub max_iter: usize,
}

impl Default for RpcaConfig {
    fn default() -> Self {
        Self {
            beta: None,
            tol: 1e-7,
            max_iter: 500,
        }
    }
}

impl RpcaConfig {
    /// Fill in a missing `beta` with `1 / sqrt(min(rows, cols))`, the
    /// default used when decomposing point sets (points as columns). Such
    /// matrices are far from square, and `1 / sqrt(max(rows, cols))` lets the
    /// sparse part absorb clean data.
    pub fn for_point_set(&self, m: &Matrix) -> RpcaConfig {
        let short = m.nrows().min(m.ncols()).max(1) as f64;
        RpcaConfig {
            beta: Some(self.beta.unwrap_or(1.0 / short.sqrt())),
            ..self.clone()
        }
    }
}

const MU_GROWTH: f64 = 1.6;

#[derive(Clone, Debug)]
pub struct RpcaResult {
    pub low_rank: Matrix,
    pub sparse: Matrix,
    pub iterations_used: usize,
    /// Final `||M - L - S||_F / ||M||_F`.
    pub primal_residual: f64,
    pub converged: bool,
}

/// Shrink singular values by `tau`. Returns the result and its rank.
pub fn singular_value_threshold(a: &Matrix, tau: f64) -> Result<(Matrix, usize)> {
    let f = svd(a)?;
    let keep = f.singular_values.iter().take_while(|&&s| s > tau).count();
    let mut out = Matrix::zeros(a.nrows(), a.ncols());
    for j in 0..keep {
        let s = f.singular_values[j] - tau;
        out += f.u.column(j) * f.v.column(j).transpose() * s;
    }
    Ok((out, keep))
}

fn soft_threshold(a: &Matrix, tau: f64) -> Matrix {
    a.map(|v| v.signum() * (v.abs() - tau).max(0.0))
}

/// `min ||L||_* + beta ||S||_1  s.t.  M = L + S` by the inexact augmented
/// Lagrangian method. Running out of iterations is not an error; check
/// `converged` and `primal_residual`.
pub fn rpca(m: &Matrix, cfg: &RpcaConfig) -> Result<RpcaResult> {
    ensure_finite(m, "rpca input")?;
    let (rows, cols) = m.shape();
    let beta = cfg.beta.unwrap_or_else(|| 1.0 / (rows.max(cols).max(1) as f64).sqrt());
    if !(beta > 0.0) || !beta.is_finite() {
        return Err(Error::param(format!("rpca beta must be positive, got {beta}")));
    }
    if !(cfg.tol > 0.0) {
        return Err(Error::param(format!("rpca tol must be positive, got {}", cfg.tol)));
    }
    let norm_m = frobenius_norm(m);
    if norm_m == 0.0 {
        return Ok(RpcaResult {
            low_rank: Matrix::zeros(rows, cols),
            sparse: Matrix::zeros(rows, cols),
            iterations_used: 0,
            primal_residual: 0.0,
            converged: true,
        });
    }

    let spec = spectral_norm(m)?;
    let dual_scale = spec.max(m.amax() / beta);
    let mut y = m / dual_scale;
    let mut mu = 1.25 / spec;
    let mu_max = mu * 1e7;
    let mut low = Matrix::zeros(rows, cols);
    let mut sparse = Matrix::zeros(rows, cols);
    let mut residual = f64::INFINITY;

    for it in 1..=cfg.max_iter {
        sparse = soft_threshold(&(m - &low + &y / mu), beta / mu);
        low = singular_value_threshold(&(m - &sparse + &y / mu), 1.0 / mu)?.0;
        let z = m - &low - &sparse;
        residual = frobenius_norm(&z) / norm_m;
        if !residual.is_finite() {
            return Err(Error::numerical(format!("rpca iteration {it}: residual is {residual}")));
        }
        if residual <= cfg.tol {
            return Ok(RpcaResult {
                low_rank: low,
                sparse,
                iterations_used: it,
                primal_residual: residual,
                converged: true,
            });
        }
        y += z * mu;
        mu = (mu * MU_GROWTH).min(mu_max);
    }
    log::warn!(
        "rpca stopped after {} iterations with residual {residual:.3e}",
        cfg.max_iter
    );
    Ok(RpcaResult {
        low_rank: low,
        sparse,
        iterations_used: cfg.max_iter,
        primal_residual: residual,
        converged: false,
    })
}
