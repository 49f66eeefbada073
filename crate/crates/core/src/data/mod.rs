//! Labeled point sets, file formats, synthetic generators and splits.
//!
//! Points are stored as matrix columns in memory and as rows on disk; the
//! loaders transpose at the boundary.

pub mod io;
mod split;
mod synth;

pub use split::split_dataset;
pub use synth::{generate_synthetic, Orientation, SyntheticData, SyntheticSpec};

use crate::error::{Error, Result};
use crate::linalg::{select_columns, Matrix};

/// Points as columns plus a class id per column.
#[derive(Clone, Debug, PartialEq)]
pub struct LabeledDataset {
    points: Matrix,
    labels: Vec<usize>,
    num_classes: usize,
}

impl LabeledDataset {
    /// Class ids must be contiguous from zero with every class present.
    pub fn new(points: Matrix, labels: Vec<usize>) -> Result<Self> {
        let num_classes = labels.iter().max().map_or(0, |&m| m + 1);
        let ds = Self::with_num_classes(points, labels, num_classes)?;
        if let Some(c) = ds.class_sizes().iter().position(|&n| n == 0) {
            return Err(Error::param(format!(
                "class ids must be contiguous from 0; class {c} has no points"
            )));
        }
        Ok(ds)
    }

    /// Like [`LabeledDataset::new`] but with an explicit class count, so some
    /// classes may be empty (e.g. the test half of a split).
    pub fn with_num_classes(points: Matrix, labels: Vec<usize>, num_classes: usize) -> Result<Self> {
        if labels.len() != points.ncols() {
            return Err(Error::dim(format!(
                "{} labels for {} points",
                labels.len(),
                points.ncols()
            )));
        }
        if let Some(&bad) = labels.iter().find(|&&l| l >= num_classes) {
            return Err(Error::param(format!(
                "label {bad} out of range for {num_classes} classes"
            )));
        }
        crate::linalg::ensure_finite(&points, "data set")?;
        Ok(Self {
            points,
            labels,
            num_classes,
        })
    }

    /// Assemble from arbitrary integer labels, remapping them to contiguous
    /// ids in sorted order. A warning is logged when remapping was needed.
    pub fn from_raw_labels(points: Matrix, raw: &[i64]) -> Result<Self> {
        let mut distinct: Vec<i64> = raw.to_vec();
        distinct.sort_unstable();
        distinct.dedup();
        let contiguous = distinct.iter().enumerate().all(|(i, &v)| v == i as i64);
        if !contiguous {
            log::warn!(
                "labels {:?} are not contiguous from 0; remapping to 0..{}",
                distinct,
                distinct.len()
            );
        }
        let labels = raw
            .iter()
            .map(|v| distinct.binary_search(v).expect("value present"))
            .collect();
        Self::new(points, labels)
    }

    pub fn points(&self) -> &Matrix {
        &self.points
    }

    pub fn labels(&self) -> &[usize] {
        &self.labels
    }

    pub fn num_classes(&self) -> usize {
        self.num_classes
    }

    /// Ambient dimension.
    pub fn dim(&self) -> usize {
        self.points.nrows()
    }

    pub fn len(&self) -> usize {
        self.points.ncols()
    }

    pub fn is_empty(&self) -> bool {
        self.points.ncols() == 0
    }

    pub fn class_sizes(&self) -> Vec<usize> {
        let mut sizes = vec![0; self.num_classes];
        for &l in &self.labels {
            sizes[l] += 1;
        }
        sizes
    }

    pub fn class_indices(&self, class: usize) -> Vec<usize> {
        self.labels
            .iter()
            .enumerate()
            .filter_map(|(i, &l)| (l == class).then_some(i))
            .collect()
    }

    pub fn class_points(&self, class: usize) -> Matrix {
        select_columns(&self.points, &self.class_indices(class))
    }

    /// Every point not in `class`.
    pub fn complement_points(&self, class: usize) -> Matrix {
        let idx: Vec<usize> = self
            .labels
            .iter()
            .enumerate()
            .filter_map(|(i, &l)| (l != class).then_some(i))
            .collect();
        select_columns(&self.points, &idx)
    }

    /// Subset of columns, keeping the class count.
    pub fn subset(&self, idx: &[usize]) -> Self {
        Self {
            points: select_columns(&self.points, idx),
            labels: idx.iter().map(|&i| self.labels[i]).collect(),
            num_classes: self.num_classes,
        }
    }

    pub fn with_points(&self, points: Matrix) -> Result<Self> {
        Self::with_num_classes(points, self.labels.clone(), self.num_classes)
    }
}
