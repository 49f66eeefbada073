//! Subspace clustering: the R-SSC pipeline (RPCA, nearest-neighbor affine
//! coding, spectral clustering), the LRSC loop that alternates clustering
//! with transform learning, and clustering metrics.

mod affinity;
mod kmeans;
mod lrsc;
mod metrics;
mod spectral;

pub use affinity::{lle_code, rssc_affinity, rssc_coding, AffinityMatrix, NeighborMetric, RsscConfig};
pub use kmeans::{kmeans, KMeansConfig, KMeansResult};
pub use lrsc::{
    lrsc, rssc, Clusterer, ClustererRegistry, ClustererSpec, KMeansClusterer, LrscConfig, LrscIteration, LrscResult,
    RsscClusterer,
};
pub use metrics::{canonical_labels, lrsc_objective, misclassification_rate};
pub use spectral::{spectral_cluster, spectral_embedding};

use crate::error::{Error, Result};
use crate::linalg::{nuclear_norm, select_columns, Matrix};

#[derive(Clone, Debug, PartialEq)]
pub struct ClusteringResult {
    /// Cluster id of every point, in `0..num_clusters`.
    pub assignments: Vec<usize>,
    pub num_clusters: usize,
    /// LRSC objective per outer iteration, when produced by [`lrsc`].
    pub objective_trace: Option<Vec<f64>>,
    /// `||T Y_c||_*` of every cluster in the clustered representation.
    pub per_cluster_nuclear_norms: Vec<f64>,
    /// Clusters that received no points.
    pub empty_clusters: Vec<usize>,
}

impl ClusteringResult {
    /// Summarize `assignments` of the columns of `points`.
    pub fn new(points: &Matrix, assignments: Vec<usize>, num_clusters: usize) -> Result<Self> {
        if assignments.len() != points.ncols() {
            return Err(Error::dim(format!(
                "{} assignments for {} points",
                assignments.len(),
                points.ncols()
            )));
        }
        if let Some(&bad) = assignments.iter().find(|&&a| a >= num_clusters) {
            return Err(Error::param(format!(
                "assignment {bad} out of range for {num_clusters} clusters"
            )));
        }
        let groups = metrics::members(&assignments, num_clusters);
        let mut norms = Vec::with_capacity(num_clusters);
        let mut empty = Vec::new();
        for (c, idx) in groups.iter().enumerate() {
            if idx.is_empty() {
                empty.push(c);
                norms.push(0.0);
            } else {
                norms.push(nuclear_norm(&select_columns(points, idx))?);
            }
        }
        if !empty.is_empty() {
            log::warn!("clusters {empty:?} are empty");
        }
        Ok(Self {
            assignments,
            num_clusters,
            objective_trace: None,
            per_cluster_nuclear_norms: norms,
            empty_clusters: empty,
        })
    }
}
