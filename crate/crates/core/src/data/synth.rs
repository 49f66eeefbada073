//! Union-of-subspaces generators.

use std::f64::consts::FRAC_PI_2;

use rand::Rng;
use serde::{Deserialize, Serialize};

use super::LabeledDataset;
use crate::error::{Error, Result};
use crate::linalg::{Matrix, SubspaceBasis, Vector};
use crate::rng::{gaussian_matrix, permutation, seeded};

/// How the subspace bases are oriented.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum Orientation {
    /// Independent Haar-random bases.
    Random,
    /// Two subspaces whose smallest principal angle is `angle` radians. The
    /// first spans the leading coordinate axes; the second is tilted off the
    /// first axis into the next free one.
    PairAngle { angle: f64 },
    /// Every subspace contains a direction tilted from a shared axis so that
    /// each pair meets at no more than `angle` radians.
    CommonAngle { angle: f64 },
    /// Explicit spanning vectors for each subspace, orthonormalized on use.
    Explicit { bases: Vec<Vec<Vec<f64>>> },
}

/// Parameters of a synthetic union-of-subspaces data set.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SyntheticSpec {
    pub ambient_dim: usize,
    pub subspace_dims: Vec<usize>,
    #[serde(default = "default_points")]
    pub points_per_subspace: usize,
    #[serde(default)]
    pub noise_sigma: f64,
    #[serde(default)]
    pub outlier_fraction: f64,
    #[serde(default = "default_orientation")]
    pub orientation: Orientation,
}

fn default_points() -> usize {
    200
}

fn default_orientation() -> Orientation {
    Orientation::Random
}

impl SyntheticSpec {
    /// Two lines in the plane meeting at `angle`.
    pub fn two_lines(angle: f64, points: usize, sigma: f64) -> Self {
        Self {
            ambient_dim: 2,
            subspace_dims: vec![1, 1],
            points_per_subspace: points,
            noise_sigma: sigma,
            outlier_fraction: 0.0,
            orientation: Orientation::PairAngle { angle },
        }
    }

    /// Three lines in R^3 along `e1`, `(e1+e2)/sqrt2` and `(e1+e3)/sqrt2`,
    /// with pairwise angles pi/4, pi/4 and pi/3.
    pub fn three_lines(points: usize, sigma: f64) -> Self {
        Self {
            ambient_dim: 3,
            subspace_dims: vec![1, 1, 1],
            points_per_subspace: points,
            noise_sigma: sigma,
            outlier_fraction: 0.0,
            orientation: Orientation::Explicit {
                bases: vec![
                    vec![vec![1.0, 0.0, 0.0]],
                    vec![vec![1.0, 1.0, 0.0]],
                    vec![vec![1.0, 0.0, 1.0]],
                ],
            },
        }
    }

    pub fn validate(&self) -> Result<()> {
        let d = self.ambient_dim;
        if d == 0 {
            return Err(Error::param("ambient dimension must be >= 1"));
        }
        if self.subspace_dims.is_empty() {
            return Err(Error::param("at least one subspace is required"));
        }
        if let Some(&k) = self.subspace_dims.iter().find(|&&k| k == 0 || k > d) {
            return Err(Error::param(format!("subspace dimension {k} not in 1..={d}")));
        }
        if self.points_per_subspace == 0 {
            return Err(Error::param("points per subspace must be >= 1"));
        }
        if !(self.noise_sigma >= 0.0) || !self.noise_sigma.is_finite() {
            return Err(Error::param(format!("invalid noise sigma {}", self.noise_sigma)));
        }
        if !(0.0..1.0).contains(&self.outlier_fraction) {
            return Err(Error::param(format!(
                "invalid outlier fraction {} (must be in [0, 1))",
                self.outlier_fraction
            )));
        }
        match &self.orientation {
            Orientation::Random => {}
            Orientation::PairAngle { angle } => {
                check_angle(*angle)?;
                if self.subspace_dims.len() != 2 {
                    return Err(Error::param("pair_angle orientation needs exactly two subspaces"));
                }
                let need = self.subspace_dims[0] + self.subspace_dims[1];
                if need > d {
                    return Err(Error::param(format!(
                        "infeasible angle specification: subspaces of dims {:?} need R^{need}, have R^{d}",
                        self.subspace_dims
                    )));
                }
            }
            Orientation::CommonAngle { angle } => {
                check_angle(*angle)?;
                let c = self.subspace_dims.len();
                let kmax = *self.subspace_dims.iter().max().expect("nonempty");
                if d < c + kmax {
                    return Err(Error::param(format!(
                        "infeasible angle specification: {c} subspaces of dim <= {kmax} need R^{}, have R^{d}",
                        c + kmax
                    )));
                }
            }
            Orientation::Explicit { bases } => {
                if bases.len() != self.subspace_dims.len() {
                    return Err(Error::param(format!(
                        "{} explicit bases for {} subspaces",
                        bases.len(),
                        self.subspace_dims.len()
                    )));
                }
                for (b, &k) in bases.iter().zip(&self.subspace_dims) {
                    if b.len() != k || b.iter().any(|v| v.len() != d) {
                        return Err(Error::param(format!(
                            "explicit basis must hold {k} vectors of length {d}"
                        )));
                    }
                }
            }
        }
        Ok(())
    }
}

fn check_angle(angle: f64) -> Result<()> {
    if !(0.0..=FRAC_PI_2).contains(&angle) {
        return Err(Error::param(format!(
            "infeasible angle specification: {angle} not in [0, pi/2]"
        )));
    }
    Ok(())
}

/// A generated data set with the ground-truth bases it was drawn from.
#[derive(Clone, Debug)]
pub struct SyntheticData {
    pub dataset: LabeledDataset,
    pub bases: Vec<SubspaceBasis>,
}

/// Sample `points_per_subspace` points from each subspace.
///
/// Coefficients are uniform in `[-1, 1]` on the subspace basis, isotropic
/// Gaussian noise of standard deviation `noise_sigma` is added, and a
/// fraction of each subspace's points is replaced by outliers drawn uniformly
/// from the ball of radius `sqrt(max k)`. Labels follow subspace order.
pub fn generate_synthetic(spec: &SyntheticSpec, seed: u64) -> Result<SyntheticData> {
    spec.validate()?;
    let mut rng = seeded(seed);
    let d = spec.ambient_dim;
    let bases = build_bases(spec, &mut rng)?;
    let n = spec.points_per_subspace;
    let total = n * bases.len();
    let mut points = Matrix::zeros(d, total);
    let mut labels = Vec::with_capacity(total);
    let kmax = *spec.subspace_dims.iter().max().expect("validated");
    let radius = (kmax as f64).sqrt();

    for (c, basis) in bases.iter().enumerate() {
        let k = basis.dim();
        let coef = Matrix::from_fn(k, n, |_, _| rng.random_range(-1.0..=1.0));
        let mut block = basis.matrix() * coef;
        if spec.noise_sigma > 0.0 {
            block += gaussian_matrix(d, n, &mut rng) * spec.noise_sigma;
        }
        let n_out = (spec.outlier_fraction * n as f64).round() as usize;
        if n_out > 0 {
            let order = permutation(n, &mut rng);
            for &j in &order[..n_out] {
                let dir = gaussian_matrix(d, 1, &mut rng);
                let norm = dir.norm().max(f64::MIN_POSITIVE);
                let r = radius * rng.random::<f64>().powf(1.0 / d as f64);
                block.set_column(j, &(dir.column(0) * (r / norm)));
            }
        }
        points.columns_mut(c * n, n).copy_from(&block);
        labels.extend(std::iter::repeat_n(c, n));
    }
    Ok(SyntheticData {
        dataset: LabeledDataset::new(points, labels)?,
        bases,
    })
}

fn axis(d: usize, i: usize) -> Vector {
    Vector::from_fn(d, |r, _| if r == i { 1.0 } else { 0.0 })
}

fn build_bases<R: Rng>(spec: &SyntheticSpec, rng: &mut R) -> Result<Vec<SubspaceBasis>> {
    let d = spec.ambient_dim;
    let dims = &spec.subspace_dims;
    match &spec.orientation {
        Orientation::Random => dims
            .iter()
            .map(|&k| SubspaceBasis::orthonormalize(&gaussian_matrix(d, k, rng)))
            .collect(),
        Orientation::PairAngle { angle } => {
            let (k1, k2) = (dims[0], dims[1]);
            let a = Matrix::from_fn(d, k1, |i, j| if i == j { 1.0 } else { 0.0 });
            let mut b = Matrix::zeros(d, k2);
            b.set_column(0, &(axis(d, 0) * angle.cos() + axis(d, k1) * angle.sin()));
            for j in 1..k2 {
                b.set_column(j, &axis(d, k1 + j));
            }
            Ok(vec![SubspaceBasis::new(a)?, SubspaceBasis::new(b)?])
        }
        Orientation::CommonAngle { angle } => {
            // u_c = cos(phi) e_0 + sin(phi) e_{c+1} gives <u_c, u_c'> = cos^2(phi)
            let c = dims.len();
            let phi = angle.cos().sqrt().acos();
            let free = d - 1 - c;
            dims.iter()
                .enumerate()
                .map(|(ci, &k)| {
                    let mut m = Matrix::zeros(d, k);
                    m.set_column(0, &(axis(d, 0) * phi.cos() + axis(d, ci + 1) * phi.sin()));
                    if k > 1 {
                        let extra = SubspaceBasis::orthonormalize(&gaussian_matrix(free, k - 1, rng))?;
                        m.view_mut((1 + c, 1), (free, k - 1)).copy_from(extra.matrix());
                    }
                    SubspaceBasis::new(m)
                })
                .collect()
        }
        Orientation::Explicit { bases } => bases
            .iter()
            .map(|vecs| {
                let m = Matrix::from_fn(d, vecs.len(), |i, j| vecs[j][i]);
                SubspaceBasis::orthonormalize(&m)
            })
            .collect(),
    }
}
