//! Classification on learned features: nearest neighbor, or the class whose
//! low-rank training representation reconstructs the query best under OMP.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::data::LabeledDataset;
use crate::decomp::{omp, rpca, RpcaConfig};
use crate::error::{Error, Result};
use crate::learn::{TransformKind, TransformModel};
use crate::linalg::{Matrix, Vector};

pub const DEFAULT_SPARSITY: usize = 10;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ClassifierMode {
    /// Nearest transformed training point. With per-class transforms each
    /// class compares `T_c y` against its own gallery `T_c Y_c`.
    Nn,
    /// Smallest OMP reconstruction residual over the per-class low-rank
    /// representations `L_c`.
    Omp,
}

#[derive(Clone, Debug)]
pub struct ClassifierModel {
    pub transform: TransformModel,
    pub mode: ClassifierMode,
    pub sparsity: usize,
    /// Per class: the transformed training points (nn) or the low-rank part
    /// of them (omp).
    pub class_matrices: Vec<Matrix>,
}

impl ClassifierModel {
    pub fn num_classes(&self) -> usize {
        self.class_matrices.len()
    }

    fn transform_for(&self, class: usize) -> &Matrix {
        match self.transform.kind {
            TransformKind::Global => &self.transform.transforms[0],
            TransformKind::PerClass => &self.transform.transforms[class],
        }
    }
}

fn check_transform(transform: &TransformModel, dim: usize, classes: usize) -> Result<()> {
    if transform.input_dim() != dim {
        return Err(Error::dim(format!(
            "transform expects dimension {}, data has {dim}",
            transform.input_dim()
        )));
    }
    if transform.kind == TransformKind::PerClass && transform.transforms.len() != classes {
        return Err(Error::dim(format!(
            "{} per-class transforms for {classes} classes",
            transform.transforms.len()
        )));
    }
    Ok(())
}

/// Build the per-class galleries. In omp mode a missing `beta` is filled in
/// by [`RpcaConfig::for_point_set`].
pub fn train_classifier(
    train: &LabeledDataset,
    transform: &TransformModel,
    mode: ClassifierMode,
    sparsity: usize,
    rpca_cfg: &RpcaConfig,
) -> Result<ClassifierModel> {
    if sparsity == 0 {
        return Err(Error::param("OMP sparsity must be >= 1"));
    }
    let classes = train.num_classes();
    if classes == 0 {
        return Err(Error::param("training set has no classes"));
    }
    if let Some(c) = train.class_sizes().iter().position(|&n| n == 0) {
        return Err(Error::param(format!("training class {c} is empty")));
    }
    check_transform(transform, train.dim(), classes)?;
    let class_matrices = (0..classes)
        .into_par_iter()
        .map(|c| {
            let t = match transform.kind {
                TransformKind::Global => &transform.transforms[0],
                TransformKind::PerClass => &transform.transforms[c],
            };
            let ty = t * train.class_points(c);
            match mode {
                ClassifierMode::Nn => Ok(ty),
                ClassifierMode::Omp => Ok(rpca(&ty, &rpca_cfg.for_point_set(&ty))?.low_rank),
            }
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(ClassifierModel {
        transform: transform.clone(),
        mode,
        sparsity,
        class_matrices,
    })
}

/// Distance (nn) or reconstruction residual (omp) of `y` to class `c`.
fn class_score(model: &ClassifierModel, y: &Vector, c: usize) -> Result<f64> {
    let ty = model.transform_for(c) * y;
    let m = &model.class_matrices[c];
    match model.mode {
        ClassifierMode::Nn => Ok(m
            .column_iter()
            .map(|col| (col - &ty).norm())
            .fold(f64::INFINITY, f64::min)),
        ClassifierMode::Omp => {
            // A class whose low-rank part vanished reconstructs nothing.
            if m.iter().all(|&v| v == 0.0) {
                return Ok(ty.norm());
            }
            let s = model.sparsity.min(m.ncols());
            Ok(omp(&ty, m, s)?.residual_norm)
        }
    }
}

/// Predicted class and its score (distance or residual). Ties go to the
/// lower class id.
pub fn classify_point(model: &ClassifierModel, y: &Vector) -> Result<(usize, f64)> {
    if y.len() != model.transform.input_dim() {
        return Err(Error::dim(format!(
            "query has dimension {}, model expects {}",
            y.len(),
            model.transform.input_dim()
        )));
    }
    let scores = (0..model.num_classes())
        .into_par_iter()
        .map(|c| class_score(model, y, c))
        .collect::<Result<Vec<_>>>()?;
    let mut best = (0, scores[0]);
    for (c, &s) in scores.iter().enumerate().skip(1) {
        if s < best.1 {
            best = (c, s);
        }
    }
    Ok(best)
}

/// Predicted class of every column of `points`.
pub fn classify_points(model: &ClassifierModel, points: &Matrix) -> Result<Vec<usize>> {
    (0..points.ncols())
        .into_par_iter()
        .map(|j| classify_point(model, &points.column(j).into_owned()).map(|(c, _)| c))
        .collect()
}

/// Fraction of test points classified correctly.
pub fn evaluate_accuracy(model: &ClassifierModel, test: &LabeledDataset) -> Result<f64> {
    if test.is_empty() {
        return Err(Error::param("test set is empty"));
    }
    let predicted = classify_points(model, test.points())?;
    let correct = predicted.iter().zip(test.labels()).filter(|(p, t)| p == t).count();
    Ok(correct as f64 / test.len() as f64)
}
