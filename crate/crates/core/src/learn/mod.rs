//! Learning low-rank transforms by projected subgradient descent.
//!
//! The global objective is `sum_c ||T Y_c||_* - ||T Y||_*` subject to
//! `||T||_2 = gamma`; the per-class variant learns one `T_c` per class from
//! `||T_c Y_c||_* - lambda ||T_c Y_{not c}||_*`. Both are differences of
//! convex functions and share one solver: take the subgradient step
//! `T <- T - nu * dT`, then rescale `T <- gamma * T / ||T||_2`.
//!
//! With `dc_outer_iterations > 1` the subgradient of the concave term is
//! frozen at the start of each outer iteration, the inner loop minimizes the
//! resulting convex surrogate, and the best surrogate iterate becomes the
//! next outer iterate. That makes the true objective nonincreasing across
//! outer iterations. With the default of one outer iteration every step
//! re-evaluates the concave subgradient at the current iterate.

mod online;
mod problem;

pub use online::{learn_online, minibatch_partition};

use std::borrow::Cow;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::data::LabeledDataset;
use crate::error::{Error, Result};
use crate::linalg::{identity_rows, numerical_rank, spectral_norm, Matrix};
use problem::DcProblem;

/// How mini-batches are combined by [`learn_online`].
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum OnlineMode {
    /// Learn on each batch in turn, warm-starting from the previous batch.
    #[default]
    Sequential,
    /// One step per iteration using the sum of all batch subgradients.
    Summed,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct LearnConfig {
    /// Target spectral norm of the transform.
    pub gamma: f64,
    pub step_size: f64,
    /// Subgradient steps per outer iteration (per batch when online).
    pub iterations: usize,
    /// Rows of the transform; `None` keeps the ambient dimension.
    pub out_dim: Option<usize>,
    /// Weight of the other-classes term in per-class learning.
    pub lambda: f64,
    pub minibatches: usize,
    pub online_mode: OnlineMode,
    pub seed: u64,
    /// Singular values below `delta_rel * sigma_max` count as zero in the
    /// subdifferential.
    pub delta_rel: f64,
    pub dc_outer_iterations: usize,
    /// Learn on the data scaled to unit spectral norm. The step size is
    /// absolute, so without this the result depends on the scale of the
    /// input. Traces are reported at the input scale either way.
    pub normalize: bool,
}

impl Default for LearnConfig {
    fn default() -> Self {
        Self {
            gamma: 1.0,
            step_size: 0.02,
            iterations: 100,
            out_dim: None,
            lambda: 1.0,
            minibatches: 1,
            online_mode: OnlineMode::Sequential,
            seed: 42,
            delta_rel: 1e-6,
            dc_outer_iterations: 1,
            normalize: true,
        }
    }
}

impl LearnConfig {
    pub fn validate(&self) -> Result<()> {
        let positive = |v: f64, name: &str| {
            if v > 0.0 && v.is_finite() {
                Ok(())
            } else {
                Err(Error::param(format!("{name} must be positive and finite, got {v}")))
            }
        };
        positive(self.gamma, "gamma")?;
        positive(self.step_size, "step_size")?;
        positive(self.delta_rel, "delta_rel")?;
        if !(self.lambda >= 0.0) || !self.lambda.is_finite() {
            return Err(Error::param(format!("lambda must be >= 0, got {}", self.lambda)));
        }
        if self.out_dim == Some(0) {
            return Err(Error::param("out_dim must be >= 1"));
        }
        if self.minibatches == 0 {
            return Err(Error::param("minibatches must be >= 1"));
        }
        if self.dc_outer_iterations == 0 {
            return Err(Error::param("dc_outer_iterations must be >= 1"));
        }
        Ok(())
    }

    fn rows_for(&self, d: usize) -> Result<usize> {
        let r = self.out_dim.unwrap_or(d);
        if r == 0 || r > d {
            return Err(Error::param(format!("out_dim {r} not in 1..={d}")));
        }
        Ok(r)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TransformKind {
    Global,
    PerClass,
}

/// Learned transform(s) with their training record.
#[derive(Clone, Debug)]
pub struct TransformModel {
    pub kind: TransformKind,
    /// One matrix for a global model, one per class otherwise.
    pub transforms: Vec<Matrix>,
    /// Objective before the first step and after every step. Per-class
    /// models record the sum over classes.
    pub objective_trace: Vec<f64>,
    /// Spectral norm of the iterate at each trace entry (max over classes).
    pub norm_trace: Vec<f64>,
    /// Objective at the outer-iteration boundaries, starting with the
    /// initial value.
    pub outer_objectives: Vec<f64>,
    pub config: LearnConfig,
}

impl TransformModel {
    /// Identity model (no transform), useful as a raw-feature baseline.
    pub fn identity(d: usize) -> Self {
        Self {
            kind: TransformKind::Global,
            transforms: vec![Matrix::identity(d, d)],
            objective_trace: Vec::new(),
            norm_trace: Vec::new(),
            outer_objectives: Vec::new(),
            config: LearnConfig::default(),
        }
    }

    pub fn global(t: Matrix, config: LearnConfig) -> Self {
        Self {
            kind: TransformKind::Global,
            transforms: vec![t],
            objective_trace: Vec::new(),
            norm_trace: Vec::new(),
            outer_objectives: Vec::new(),
            config,
        }
    }

    /// Input dimension the model expects.
    pub fn input_dim(&self) -> usize {
        self.transforms[0].ncols()
    }

    pub fn output_dim(&self) -> usize {
        self.transforms[0].nrows()
    }

    /// The transform applied to points of `class` (the global one for global
    /// models).
    pub fn transform_for(&self, class: Option<usize>) -> Result<&Matrix> {
        match (self.kind, class) {
            (TransformKind::Global, _) => Ok(&self.transforms[0]),
            (TransformKind::PerClass, Some(c)) => self.transforms.get(c).ok_or_else(|| {
                Error::param(format!(
                    "class {c} out of range for {} per-class transforms",
                    self.transforms.len()
                ))
            }),
            (TransformKind::PerClass, None) => Err(Error::param("a class id is required for a per-class model")),
        }
    }
}

/// `T Y`, or `T_c Y` for a per-class model.
pub fn apply_transform(model: &TransformModel, y: &Matrix, class: Option<usize>) -> Result<Matrix> {
    let t = model.transform_for(class)?;
    if t.ncols() != y.nrows() {
        return Err(Error::dim(format!(
            "transform expects dimension {}, data has {}",
            t.ncols(),
            y.nrows()
        )));
    }
    Ok(t * y)
}

fn check_classes(t: &Matrix, data: &LabeledDataset) -> Result<()> {
    if t.ncols() != data.dim() {
        return Err(Error::dim(format!(
            "transform has {} columns, data dimension is {}",
            t.ncols(),
            data.dim()
        )));
    }
    if let Some(c) = data.class_sizes().iter().position(|&n| n == 0) {
        return Err(Error::param(format!("class {c} is empty")));
    }
    Ok(())
}

/// `sum_c ||T Y_c||_* - ||T Y||_*`; never below zero up to rounding.
pub fn objective_nuclear(t: &Matrix, data: &LabeledDataset) -> Result<f64> {
    check_classes(t, data)?;
    DcProblem::global(data).objective(t)
}

/// `sum_c rank(T Y_c) - rank(T Y)` with ranks counted above
/// `delta_rel * sigma_max`. Reporting only; it is not optimized.
pub fn objective_rank(t: &Matrix, data: &LabeledDataset, delta_rel: f64) -> Result<i64> {
    check_classes(t, data)?;
    let mut total = 0i64;
    for c in 0..data.num_classes() {
        total += numerical_rank(&(t * data.class_points(c)), delta_rel)? as i64;
    }
    Ok(total - numerical_rank(&(t * data.points()), delta_rel)? as i64)
}

/// `dT = sum_c d||T Y_c|| Y_c' - d||T Y|| Y'`, with every subdifferential
/// drawn from the same `seed`.
pub fn subgradient_step_matrix(t: &Matrix, data: &LabeledDataset, delta_rel: f64, seed: u64) -> Result<Matrix> {
    check_classes(t, data)?;
    DcProblem::global(data).subgradient(t, delta_rel, seed, None)
}

/// Starting transform: `gamma` times the leading rows of the identity, or the
/// warm start rescaled to spectral norm `gamma`.
fn initial_transform(d: usize, cfg: &LearnConfig, warm_start: Option<&Matrix>) -> Result<Matrix> {
    let r = cfg.rows_for(d)?;
    match warm_start {
        None => Ok(identity_rows(r, d) * cfg.gamma),
        Some(w) => {
            if w.ncols() != d {
                return Err(Error::dim(format!(
                    "warm start has {} columns, data dimension is {d}",
                    w.ncols()
                )));
            }
            let norm = spectral_norm(w)?;
            if !(norm > 0.0) {
                return Err(Error::param("warm start transform is zero"));
            }
            Ok(w * (cfg.gamma / norm))
        }
    }
}

/// The data the solver sees, and the factor that maps its objective values
/// back to the input scale.
fn working_data<'a>(data: &'a LabeledDataset, cfg: &LearnConfig) -> Result<(Cow<'a, LabeledDataset>, f64)> {
    if !cfg.normalize {
        return Ok((Cow::Borrowed(data), 1.0));
    }
    let s = spectral_norm(data.points())?;
    if !(s > 0.0) {
        return Ok((Cow::Borrowed(data), 1.0));
    }
    Ok((Cow::Owned(data.with_points(data.points() / s)?), s))
}

fn rescaled(values: Vec<f64>, scale: f64) -> Vec<f64> {
    values.into_iter().map(|v| v * scale).collect()
}

/// Learn one transform for all classes.
pub fn learn_global(data: &LabeledDataset, cfg: &LearnConfig, warm_start: Option<&Matrix>) -> Result<TransformModel> {
    cfg.validate()?;
    if data.num_classes() == 0 {
        return Err(Error::param("at least one class is required"));
    }
    let t0 = initial_transform(data.dim(), cfg, warm_start)?;
    check_classes(&t0, data)?;
    let (work, scale) = working_data(data, cfg)?;
    let problem = DcProblem::global(&work);
    let run = problem::solve(std::slice::from_ref(&problem), &problem, t0, cfg, cfg.seed)?;
    Ok(TransformModel {
        kind: TransformKind::Global,
        transforms: vec![run.transform],
        objective_trace: rescaled(run.trace, scale),
        norm_trace: run.norms,
        outer_objectives: rescaled(run.outer, scale),
        config: cfg.clone(),
    })
}

/// Learn one transform per class from
/// `||T_c Y_c||_* - lambda ||T_c Y_{not c}||_*`. Classes are trained
/// independently (in parallel) with the same seed.
pub fn learn_per_class(data: &LabeledDataset, cfg: &LearnConfig) -> Result<TransformModel> {
    cfg.validate()?;
    if data.num_classes() < 2 {
        return Err(Error::param("per-class learning needs at least two classes"));
    }
    let t0 = initial_transform(data.dim(), cfg, None)?;
    check_classes(&t0, data)?;
    let (work, scale) = working_data(data, cfg)?;
    let runs: Vec<problem::Run> = (0..data.num_classes())
        .into_par_iter()
        .map(|c| {
            let p = DcProblem::one_vs_rest(&work, c, cfg.lambda);
            problem::solve(std::slice::from_ref(&p), &p, t0.clone(), cfg, cfg.seed)
        })
        .collect::<Result<_>>()?;

    let len = runs[0].trace.len();
    let sum_at = |k: usize| runs.iter().map(|r| r.trace[k]).sum::<f64>() * scale;
    let max_norm_at = |k: usize| runs.iter().map(|r| r.norms[k]).fold(0.0, f64::max);
    let outer_len = runs[0].outer.len();
    Ok(TransformModel {
        kind: TransformKind::PerClass,
        objective_trace: (0..len).map(sum_at).collect(),
        norm_trace: (0..len).map(max_norm_at).collect(),
        outer_objectives: (0..outer_len)
            .map(|k| runs.iter().map(|r| r.outer[k]).sum::<f64>() * scale)
            .collect(),
        transforms: runs.into_iter().map(|r| r.transform).collect(),
        config: cfg.clone(),
    })
}

/// Per-class objectives `||T_c Y_c||_* - lambda ||T_c Y_{not c}||_*`.
pub fn per_class_objectives(model: &TransformModel, data: &LabeledDataset) -> Result<Vec<f64>> {
    (0..data.num_classes())
        .map(|c| {
            let t = model.transform_for(Some(c))?;
            DcProblem::one_vs_rest(data, c, model.config.lambda).objective(t)
        })
        .collect()
}
