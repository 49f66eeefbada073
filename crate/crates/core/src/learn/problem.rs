use rayon::prelude::*;

use super::LearnConfig;
use crate::data::LabeledDataset;
use crate::error::{Error, Result};
use crate::linalg::{nuclear_norm, nuclear_subdifferential_rel, spectral_norm, Matrix};
use crate::rng::derive_seed;

/// A term `||T X||_*`, with `X'` cached for the subgradient product.
pub(crate) struct Term {
    x: Matrix,
    xt: Matrix,
}

impl Term {
    fn new(x: Matrix) -> Self {
        let xt = x.transpose();
        Self { x, xt }
    }

    fn nuclear(&self, t: &Matrix) -> Result<f64> {
        nuclear_norm(&(t * &self.x))
    }

    /// `d||T X|| X'`.
    fn subgradient(&self, t: &Matrix, delta_rel: f64, seed: u64) -> Result<Matrix> {
        let g = nuclear_subdifferential_rel(&(t * &self.x), delta_rel, seed)?;
        Ok(g * &self.xt)
    }
}

/// `sum_i ||T X_i||_* - weight * ||T Z||_*`.
pub(crate) struct DcProblem {
    convex: Vec<Term>,
    concave: Term,
    weight: f64,
}

impl DcProblem {
    pub(crate) fn global(data: &LabeledDataset) -> Self {
        Self {
            convex: (0..data.num_classes())
                .map(|c| Term::new(data.class_points(c)))
                .filter(|t| t.x.ncols() > 0)
                .collect(),
            concave: Term::new(data.points().clone()),
            weight: 1.0,
        }
    }

    pub(crate) fn one_vs_rest(data: &LabeledDataset, class: usize, lambda: f64) -> Self {
        Self {
            convex: vec![Term::new(data.class_points(class))],
            concave: Term::new(data.complement_points(class)),
            weight: lambda,
        }
    }

    fn convex_sum(&self, t: &Matrix) -> Result<f64> {
        let parts: Vec<f64> = self
            .convex
            .par_iter()
            .map(|term| term.nuclear(t))
            .collect::<Result<_>>()?;
        Ok(parts.iter().sum())
    }

    fn concave_value(&self, t: &Matrix) -> Result<f64> {
        if self.weight == 0.0 || self.concave.x.ncols() == 0 {
            return Ok(0.0);
        }
        Ok(self.weight * self.concave.nuclear(t)?)
    }

    pub(crate) fn objective(&self, t: &Matrix) -> Result<f64> {
        Ok(self.convex_sum(t)? - self.concave_value(t)?)
    }

    /// `weight * d||T Z|| Z'`, the linearization of the concave term.
    fn concave_linear(&self, t: &Matrix, delta_rel: f64, seed: u64) -> Result<Matrix> {
        if self.weight == 0.0 || self.concave.x.ncols() == 0 {
            return Ok(Matrix::zeros(t.nrows(), t.ncols()));
        }
        Ok(self.concave.subgradient(t, delta_rel, seed)? * self.weight)
    }

    /// Subgradient of the objective, or of its convex surrogate when the
    /// concave linearization is supplied.
    pub(crate) fn subgradient(&self, t: &Matrix, delta_rel: f64, seed: u64, frozen: Option<&Matrix>) -> Result<Matrix> {
        let parts: Vec<Matrix> = self
            .convex
            .par_iter()
            .map(|term| term.subgradient(t, delta_rel, seed))
            .collect::<Result<_>>()?;
        let mut g = Matrix::zeros(t.nrows(), t.ncols());
        for p in &parts {
            g += p;
        }
        match frozen {
            Some(lin) => g -= lin,
            None => g -= self.concave_linear(t, delta_rel, seed)?,
        }
        Ok(g)
    }
}

pub(crate) struct Run {
    pub transform: Matrix,
    pub trace: Vec<f64>,
    pub norms: Vec<f64>,
    pub outer: Vec<f64>,
}

/// Projected subgradient descent on the sum of `steps`, recording the
/// objective of `eval` after every step.
pub(crate) fn solve(steps: &[DcProblem], eval: &DcProblem, t0: Matrix, cfg: &LearnConfig, seed: u64) -> Result<Run> {
    let dc_mode = cfg.dc_outer_iterations > 1;
    let mut t = t0;
    let mut trace = vec![eval.objective(&t)?];
    let mut norms = vec![spectral_norm(&t)?];
    let mut outer = vec![trace[0]];

    for o in 0..cfg.dc_outer_iterations {
        let frozen: Option<Vec<Matrix>> = if dc_mode {
            let s = derive_seed(seed, &[o as u64, u64::MAX]);
            Some(
                steps
                    .iter()
                    .map(|p| p.concave_linear(&t, cfg.delta_rel, s))
                    .collect::<Result<_>>()?,
            )
        } else {
            None
        };
        let surrogate = |x: &Matrix| -> Result<f64> {
            let lin = frozen.as_ref().expect("dc mode");
            let mut v = 0.0;
            for (p, l) in steps.iter().zip(lin) {
                v += p.convex_sum(x)? - l.dot(x);
            }
            Ok(v)
        };
        let mut best = if dc_mode {
            Some((surrogate(&t)?, t.clone()))
        } else {
            None
        };

        for it in 0..cfg.iterations {
            let step_seed = derive_seed(seed, &[o as u64, it as u64]);
            let mut delta = Matrix::zeros(t.nrows(), t.ncols());
            for (b, p) in steps.iter().enumerate() {
                let lin = frozen.as_ref().map(|f| &f[b]);
                delta += p.subgradient(&t, cfg.delta_rel, step_seed, lin)?;
            }
            let index = o * cfg.iterations + it + 1;
            t -= delta * cfg.step_size;
            let norm = spectral_norm(&t).map_err(|e| Error::numerical(format!("iteration {index}: {e}")))?;
            if !(norm > 0.0) || !norm.is_finite() {
                return Err(Error::numerical(format!("iteration {index}: transform norm is {norm}")));
            }
            t *= cfg.gamma / norm;
            let obj = eval.objective(&t)?;
            if !obj.is_finite() {
                return Err(Error::numerical(format!("iteration {index}: objective is {obj}")));
            }
            trace.push(obj);
            norms.push(spectral_norm(&t)?);
            if let Some((best_val, best_t)) = best.as_mut() {
                let s = surrogate(&t)?;
                if s < *best_val {
                    *best_val = s;
                    *best_t = t.clone();
                }
            }
        }
        if let Some((_, best_t)) = best {
            t = best_t;
        }
        outer.push(eval.objective(&t)?);
    }
    Ok(Run {
        transform: t,
        trace,
        norms,
        outer,
    })
}
