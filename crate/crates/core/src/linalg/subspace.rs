use super::{singular_values, svd, Matrix};
use crate::error::{Error, Result};

const ORTHONORMAL_TOL: f64 = 1e-10;

/// Column-orthonormal `d x k` basis of a linear subspace.
#[derive(Clone, Debug, PartialEq)]
pub struct SubspaceBasis {
    basis: Matrix,
}

impl SubspaceBasis {
    /// Wrap a matrix whose columns are already orthonormal.
    pub fn new(basis: Matrix) -> Result<Self> {
        let k = basis.ncols();
        if k == 0 || k > basis.nrows() {
            return Err(Error::param(format!(
                "subspace dimension {k} invalid in ambient dimension {}",
                basis.nrows()
            )));
        }
        let gram_err = (basis.transpose() * &basis - Matrix::identity(k, k)).amax();
        if gram_err > ORTHONORMAL_TOL {
            return Err(Error::param(format!(
                "basis columns are not orthonormal (max Gram error {gram_err:.3e})"
            )));
        }
        Ok(Self { basis })
    }

    /// Orthonormal basis for the column span of `spanning`, which must have
    /// full column rank.
    pub fn orthonormalize(spanning: &Matrix) -> Result<Self> {
        let k = spanning.ncols();
        let f = svd(spanning)?;
        let smax = f.singular_values.first().copied().unwrap_or(0.0);
        if k == 0
            || f.singular_values
                .iter()
                .any(|&s| s <= 1e-12 * smax.max(f64::MIN_POSITIVE))
        {
            return Err(Error::Singular("spanning vectors are linearly dependent".into()));
        }
        Self::new(f.u.columns(0, k).into_owned())
    }

    pub fn matrix(&self) -> &Matrix {
        &self.basis
    }

    pub fn into_matrix(self) -> Matrix {
        self.basis
    }

    pub fn ambient_dim(&self) -> usize {
        self.basis.nrows()
    }

    pub fn dim(&self) -> usize {
        self.basis.ncols()
    }

    /// Squared distance of each column of `points` from this subspace.
    pub fn residuals_sq(&self, points: &Matrix) -> Vec<f64> {
        let proj = &self.basis * (self.basis.transpose() * points);
        (points - proj).column_iter().map(|c| c.norm_squared()).collect()
    }
}

/// Cosines of all principal angles, i.e. singular values of `S1' S2`, clamped
/// to `[0, 1]` and sorted nonincreasing.
pub fn principal_cosines(s1: &SubspaceBasis, s2: &SubspaceBasis) -> Result<Vec<f64>> {
    if s1.ambient_dim() != s2.ambient_dim() {
        return Err(Error::dim(format!(
            "subspaces live in R^{} and R^{}",
            s1.ambient_dim(),
            s2.ambient_dim()
        )));
    }
    let cross = s1.matrix().transpose() * s2.matrix();
    Ok(singular_values(&cross)?
        .into_iter()
        .map(|c| c.clamp(0.0, 1.0))
        .collect())
}

/// Smallest principal angle in radians, in `[0, pi/2]`.
pub fn smallest_principal_angle(s1: &SubspaceBasis, s2: &SubspaceBasis) -> Result<f64> {
    let cos = principal_cosines(s1, s2)?;
    Ok(cos.first().copied().unwrap_or(0.0).clamp(-1.0, 1.0).acos())
}

pub fn mean_cosine_principal_angles(s1: &SubspaceBasis, s2: &SubspaceBasis) -> Result<f64> {
    let cos = principal_cosines(s1, s2)?;
    Ok(cos.iter().sum::<f64>() / cos.len() as f64)
}

/// Top-`k` left singular vectors of the points in `y` (columns).
pub fn fit_subspace_basis(y: &Matrix, k: usize) -> Result<SubspaceBasis> {
    let limit = y.nrows().min(y.ncols());
    if k == 0 || k > limit {
        return Err(Error::param(format!("subspace dimension {k} out of range 1..={limit}")));
    }
    let f = svd(y)?;
    SubspaceBasis::new(f.u.columns(0, k).into_owned())
}

/// Smallest `k >= 1` whose leading singular values carry at least `energy` of
/// the squared Frobenius mass of `y`.
pub fn estimate_subspace_dim(y: &Matrix, energy: f64) -> Result<usize> {
    let s = singular_values(y)?;
    let total: f64 = s.iter().map(|x| x * x).sum();
    if total <= 0.0 {
        return Ok(1);
    }
    let mut acc = 0.0;
    for (i, x) in s.iter().enumerate() {
        acc += x * x;
        if acc >= energy * total {
            return Ok(i + 1);
        }
    }
    Ok(s.len().max(1))
}
