//! Learned low-rank linear transforms for subspace clustering and
//! classification.
//!
//! A transform `T` is learned so that, after mapping, points from the same
//! subspace have small nuclear norm while the union of all subspaces keeps a
//! large one. Minimizing `sum_c ||T Y_c||_* - ||T Y||_*` under `||T||_2 = gamma`
//! collapses each class toward a low-rank set and pushes distinct subspaces
//! toward orthogonality. The crate provides the learner together with the
//! clustering (R-SSC, LRSC) and classification pipelines built on it.

pub mod classify;
pub mod cluster;
pub mod data;
pub mod decomp;
pub mod error;
pub mod learn;
pub mod linalg;
pub mod persist;
pub mod rng;

pub use data::LabeledDataset;
pub use error::{Error, Result};
pub use linalg::{Matrix, SubspaceBasis, SvdFactors, Vector};
