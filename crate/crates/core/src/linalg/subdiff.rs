use super::{svd, Matrix};
use crate::error::{Error, Result};
use crate::rng::{gaussian_matrix, seeded};

/// Rank-cut threshold `delta_rel * sigma_max`, falling back to `delta_rel`
/// itself for the zero matrix so that every singular value is cut.
pub fn relative_threshold(sigma_max: f64, delta_rel: f64) -> f64 {
    if sigma_max > 0.0 {
        delta_rel * sigma_max
    } else {
        delta_rel
    }
}

/// One element of the subdifferential of the nuclear norm at `a`.
///
/// Singular values below `delta` are treated as zero. With the SVD split into
/// retained `(U1, V1)` and cut `(U2, V2)` parts the result is
/// `U1 V1' + U2 B V2'`, where `B` is a seeded Gaussian fill scaled to unit
/// spectral norm. `U2 B` is realized as a Gaussian block projected onto the
/// orthogonal complement of `U1` on the long side of the matrix, so the large
/// complement basis is never formed.
pub fn nuclear_subdifferential(a: &Matrix, delta: f64, seed: u64) -> Result<Matrix> {
    if !(delta > 0.0) || !delta.is_finite() {
        return Err(Error::param(format!(
            "subdifferential threshold must be > 0, got {delta}"
        )));
    }
    if a.nrows() < a.ncols() {
        return Ok(tall_subdifferential(&a.transpose(), delta, seed)?.transpose());
    }
    tall_subdifferential(a, delta, seed)
}

/// Same as [`nuclear_subdifferential`] with the threshold relative to the
/// largest singular value of `a`.
pub fn nuclear_subdifferential_rel(a: &Matrix, delta_rel: f64, seed: u64) -> Result<Matrix> {
    if !(delta_rel > 0.0) {
        return Err(Error::param(format!("relative threshold must be > 0, got {delta_rel}")));
    }
    let smax = super::spectral_norm(a)?;
    nuclear_subdifferential(a, relative_threshold(smax, delta_rel), seed)
}

fn tall_subdifferential(a: &Matrix, delta: f64, seed: u64) -> Result<Matrix> {
    let (p, q) = a.shape();
    if q == 0 {
        return Ok(Matrix::zeros(p, q));
    }
    let f = svd(a)?;
    let kept = f.singular_values.iter().take_while(|&&s| s >= delta).count();

    let u1 = f.u.columns(0, kept);
    let v1 = f.v.columns(0, kept);
    let mut g = u1 * v1.transpose();

    let cut = q - kept;
    if cut > 0 {
        let mut rng = seeded(seed);
        let z = gaussian_matrix(p, cut, &mut rng);
        let w = &z - u1 * (u1.transpose() * &z);
        let norm = super::spectral_norm(&w)?;
        if norm > f64::EPSILON {
            let v2 = f.v.columns(kept, cut);
            g += (w / norm) * v2.transpose();
        }
    }
    Ok(g)
}
