use std::collections::BTreeMap;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use super::affinity::{rssc_affinity, NeighborMetric, RsscConfig};
use super::kmeans::{kmeans, KMeansConfig};
use super::metrics::{canonical_labels, lrsc_objective, misclassification_rate};
use super::spectral::spectral_cluster;
use super::ClusteringResult;
use crate::data::LabeledDataset;
use crate::decomp::RpcaConfig;
use crate::error::{Error, Result};
use crate::learn::{learn_global, LearnConfig, TransformModel};
use crate::linalg::{identity_rows, Matrix};

/// R-SSC on the columns of `ty`.
pub fn rssc(ty: &Matrix, c: usize, cfg: &RsscConfig, seed: u64) -> Result<ClusteringResult> {
    let n = ty.ncols();
    if c == 0 || c > n {
        return Err(Error::param(format!("cluster count {c} not in 1..={n}")));
    }
    let assignments = if c == 1 {
        vec![0; n]
    } else {
        spectral_cluster(&rssc_affinity(ty, cfg)?, c, seed)?
    };
    ClusteringResult::new(ty, assignments, c)
}

/// A subspace clustering method usable inside [`lrsc`].
pub trait Clusterer: Send + Sync {
    fn name(&self) -> &str;

    /// One label in `0..c` per column of `points`.
    fn cluster(&self, points: &Matrix, c: usize, seed: u64) -> Result<Vec<usize>>;
}

#[derive(Clone, Debug, Default)]
pub struct RsscClusterer(pub RsscConfig);

impl Clusterer for RsscClusterer {
    fn name(&self) -> &str {
        "rssc"
    }

    fn cluster(&self, points: &Matrix, c: usize, seed: u64) -> Result<Vec<usize>> {
        Ok(rssc(points, c, &self.0, seed)?.assignments)
    }
}

/// Plain k-means on the points; a weak baseline for comparison.
#[derive(Clone, Debug, Default)]
pub struct KMeansClusterer(pub KMeansConfig);

impl Clusterer for KMeansClusterer {
    fn name(&self) -> &str {
        "kmeans"
    }

    fn cluster(&self, points: &Matrix, c: usize, seed: u64) -> Result<Vec<usize>> {
        Ok(kmeans(points, c, &self.0, seed)?.labels)
    }
}

/// Named clusterers that a [`ClustererSpec::Plugin`] can refer to.
#[derive(Clone)]
pub struct ClustererRegistry {
    entries: BTreeMap<String, Arc<dyn Clusterer>>,
}

impl Default for ClustererRegistry {
    /// Registry holding the built-in `kmeans` clusterer.
    fn default() -> Self {
        let mut r = Self {
            entries: BTreeMap::new(),
        };
        r.register(Arc::new(KMeansClusterer::default()));
        r
    }
}

impl ClustererRegistry {
    pub fn register(&mut self, clusterer: Arc<dyn Clusterer>) {
        self.entries.insert(clusterer.name().to_string(), clusterer);
    }

    pub fn get(&self, name: &str) -> Option<Arc<dyn Clusterer>> {
        self.entries.get(name).cloned()
    }

    pub fn names(&self) -> Vec<&str> {
        self.entries.keys().map(String::as_str).collect()
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "method", rename_all = "snake_case", deny_unknown_fields)]
pub enum ClustererSpec {
    Rssc {
        #[serde(default = "default_neighbors")]
        neighbors: usize,
        #[serde(default)]
        metric: NeighborMetric,
        #[serde(default)]
        rpca: RpcaConfig,
    },
    /// A clusterer looked up by name in a [`ClustererRegistry`].
    Plugin { name: String },
}

fn default_neighbors() -> usize {
    RsscConfig::default().neighbors
}

impl Default for ClustererSpec {
    fn default() -> Self {
        let cfg = RsscConfig::default();
        ClustererSpec::Rssc {
            neighbors: cfg.neighbors,
            metric: cfg.metric,
            rpca: cfg.rpca,
        }
    }
}

impl ClustererSpec {
    pub fn build(&self, registry: &ClustererRegistry) -> Result<Arc<dyn Clusterer>> {
        match self {
            ClustererSpec::Rssc {
                neighbors,
                metric,
                rpca,
            } => {
                if *neighbors == 0 {
                    return Err(Error::param("neighbors must be >= 1"));
                }
                Ok(Arc::new(RsscClusterer(RsscConfig {
                    neighbors: *neighbors,
                    metric: *metric,
                    rpca: rpca.clone(),
                })))
            }
            ClustererSpec::Plugin { name } => registry.get(name).ok_or_else(|| {
                Error::param(format!(
                    "unknown clusterer {name:?}; registered: {:?}",
                    registry.names()
                ))
            }),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct LrscConfig {
    pub max_outer: usize,
    /// Continue learning from the current transform instead of restarting
    /// from the identity.
    pub warm_restart: bool,
    /// Weight of the nuclear-norm part of the reported objective.
    pub objective_lambda: f64,
}

impl Default for LrscConfig {
    fn default() -> Self {
        Self {
            max_outer: 20,
            warm_restart: false,
            objective_lambda: 1.0,
        }
    }
}

/// Record of one clustering pass.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct LrscIteration {
    pub assignments: Vec<usize>,
    /// Against the ground truth, when supplied.
    pub misclassification: Option<f64>,
    /// LRSC objective of these assignments under the transform used to
    /// compute them.
    pub objective: f64,
    /// The transform this pass clustered under.
    #[serde(skip)]
    pub transform: Matrix,
}

#[derive(Clone, Debug)]
pub struct LrscResult {
    /// Final assignments, summarized in the transformed space.
    pub clustering: ClusteringResult,
    /// The transform under which the final assignments were computed.
    pub model: TransformModel,
    pub iterations: Vec<LrscIteration>,
    /// Whether the loop stopped because assignments repeated.
    pub converged: bool,
}

/// Alternate between clustering `T Y` and relearning `T` from the clusters
/// until the assignments stop changing or `max_outer` passes have run.
///
/// The clusterer sees the same seed on every pass and its labels are
/// renumbered in order of first appearance, so "unchanged" means unchanged
/// up to relabeling.
pub fn lrsc(
    y: &Matrix,
    c: usize,
    clusterer: &dyn Clusterer,
    learn_cfg: &LearnConfig,
    cfg: &LrscConfig,
    seed: u64,
    truth: Option<&[usize]>,
) -> Result<LrscResult> {
    if cfg.max_outer == 0 {
        return Err(Error::param("max_outer must be >= 1"));
    }
    learn_cfg.validate()?;
    if let Some(t) = truth {
        if t.len() != y.ncols() {
            return Err(Error::dim(format!(
                "{} ground-truth labels for {} points",
                t.len(),
                y.ncols()
            )));
        }
    }
    let d = y.nrows();
    let r = learn_cfg.out_dim.unwrap_or(d);
    if r == 0 || r > d {
        return Err(Error::param(format!("out_dim {r} not in 1..={d}")));
    }
    let mut model = TransformModel::global(identity_rows(r, d) * learn_cfg.gamma, learn_cfg.clone());
    let mut iterations: Vec<LrscIteration> = Vec::new();
    let mut converged = false;

    for pass in 0..cfg.max_outer {
        let t = model.transforms[0].clone();
        let ty = &t * y;
        let raw = clusterer.cluster(&ty, c, seed)?;
        if raw.len() != y.ncols() || raw.iter().any(|&a| a >= c) {
            return Err(Error::param(format!(
                "clusterer {:?} returned invalid assignments",
                clusterer.name()
            )));
        }
        let assignments = canonical_labels(&raw);
        let misclassification = truth.map(|t| misclassification_rate(&assignments, t)).transpose()?;
        let objective = lrsc_objective(&t, &assignments, y, cfg.objective_lambda)?;
        log::info!(
            "lrsc pass {}: objective {objective:.6}{}",
            pass + 1,
            misclassification.map_or(String::new(), |m| format!(", error {m:.4}"))
        );
        let repeated = iterations.last().is_some_and(|prev| prev.assignments == assignments);
        iterations.push(LrscIteration {
            assignments: assignments.clone(),
            misclassification,
            objective,
            transform: t.clone(),
        });
        if repeated {
            converged = true;
            break;
        }
        if pass + 1 == cfg.max_outer {
            break;
        }
        // Canonical labels are contiguous, so every class is nonempty.
        let data = LabeledDataset::new(y.clone(), assignments)?;
        let warm = cfg.warm_restart.then_some(&t);
        model = learn_global(&data, learn_cfg, warm)?;
    }

    let last = iterations.last().expect("at least one pass");
    let ty = &model.transforms[0] * y;
    let mut clustering = ClusteringResult::new(&ty, last.assignments.clone(), c)?;
    clustering.objective_trace = Some(iterations.iter().map(|it| it.objective).collect());
    Ok(LrscResult {
        clustering,
        model,
        iterations,
        converged,
    })
}
