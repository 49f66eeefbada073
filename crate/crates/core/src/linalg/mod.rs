//! Dense linear-algebra primitives: SVD with canonical signs, matrix norms,
//! the nuclear-norm subdifferential, principal angles and closed-form
//! baseline transforms.

mod baseline;
mod subdiff;
mod subspace;

pub use baseline::{lda_transform, orthogonalizing_transform};
pub use subdiff::{nuclear_subdifferential, nuclear_subdifferential_rel, relative_threshold};
pub use subspace::{
    estimate_subspace_dim, fit_subspace_basis, mean_cosine_principal_angles, principal_cosines,
    smallest_principal_angle, SubspaceBasis,
};

use nalgebra::{DMatrix, DVector};

use crate::error::{Error, Result};

/// Dense real matrix. Data sets keep points as columns.
pub type Matrix = DMatrix<f64>;
pub type Vector = DVector<f64>;

const SVD_EPS: f64 = 1e-15;
const SVD_MAX_ITER: usize = 100_000;

/// Reject matrices carrying NaN or infinite entries.
pub fn ensure_finite(m: &Matrix, what: &str) -> Result<()> {
    match m.iter().position(|v| !v.is_finite()) {
        None => Ok(()),
        Some(k) => Err(Error::numerical(format!(
            "{what}: non-finite entry at ({}, {})",
            k % m.nrows().max(1),
            k / m.nrows().max(1)
        ))),
    }
}

/// Thin singular value decomposition `A = U diag(s) V'`.
///
/// Singular values are sorted nonincreasing and every column of `u` has its
/// largest-magnitude entry positive (the matching column of `v` is flipped
/// along with it).
#[derive(Clone, Debug)]
pub struct SvdFactors {
    pub u: Matrix,
    pub singular_values: Vec<f64>,
    pub v: Matrix,
}

impl SvdFactors {
    pub fn rank(&self, rel_tol: f64) -> usize {
        let smax = self.singular_values.first().copied().unwrap_or(0.0);
        if smax <= 0.0 {
            return 0;
        }
        self.singular_values.iter().filter(|&&s| s > rel_tol * smax).count()
    }

    pub fn reconstruct(&self) -> Matrix {
        let mut us = self.u.clone();
        for (j, &s) in self.singular_values.iter().enumerate() {
            us.column_mut(j).scale_mut(s);
        }
        us * self.v.transpose()
    }
}

pub fn svd(a: &Matrix) -> Result<SvdFactors> {
    ensure_finite(a, "svd input")?;
    let (m, n) = a.shape();
    let k = m.min(n);
    if k == 0 {
        return Ok(SvdFactors {
            u: Matrix::zeros(m, 0),
            singular_values: Vec::new(),
            v: Matrix::zeros(n, 0),
        });
    }
    let raw = a
        .clone()
        .try_svd(true, true, SVD_EPS, SVD_MAX_ITER)
        .ok_or_else(|| Error::numerical(format!("svd of {m}x{n} matrix did not converge")))?;
    let u_raw = raw.u.expect("u requested");
    let v_raw = raw.v_t.expect("v requested").transpose();

    let mut order: Vec<usize> = (0..k).collect();
    order.sort_by(|&i, &j| {
        raw.singular_values[j]
            .partial_cmp(&raw.singular_values[i])
            .expect("finite singular values")
            .then(i.cmp(&j))
    });

    let mut u = Matrix::zeros(m, k);
    let mut v = Matrix::zeros(n, k);
    let mut singular_values = Vec::with_capacity(k);
    for (dst, &src) in order.iter().enumerate() {
        let mut ucol = u_raw.column(src).clone_owned();
        let mut vcol = v_raw.column(src).clone_owned();
        let pivot = ucol
            .iter()
            .copied()
            .fold(0.0_f64, |best, x| if x.abs() > best.abs() { x } else { best });
        if pivot < 0.0 {
            ucol.neg_mut();
            vcol.neg_mut();
        }
        u.set_column(dst, &ucol);
        v.set_column(dst, &vcol);
        singular_values.push(raw.singular_values[src].max(0.0));
    }
    Ok(SvdFactors { u, singular_values, v })
}

pub fn singular_values(a: &Matrix) -> Result<Vec<f64>> {
    ensure_finite(a, "svd input")?;
    if a.nrows() == 0 || a.ncols() == 0 {
        return Ok(Vec::new());
    }
    let (m, n) = a.shape();
    let raw = a
        .clone()
        .try_svd(false, false, SVD_EPS, SVD_MAX_ITER)
        .ok_or_else(|| Error::numerical(format!("svd of {m}x{n} matrix did not converge")))?;
    let mut s: Vec<f64> = raw.singular_values.iter().map(|&x| x.max(0.0)).collect();
    s.sort_by(|a, b| b.partial_cmp(a).expect("finite singular values"));
    Ok(s)
}

/// Sum of singular values.
pub fn nuclear_norm(a: &Matrix) -> Result<f64> {
    Ok(singular_values(a)?.iter().sum())
}

/// Largest singular value (induced 2-norm).
pub fn spectral_norm(a: &Matrix) -> Result<f64> {
    Ok(singular_values(a)?.first().copied().unwrap_or(0.0))
}

pub fn frobenius_norm(a: &Matrix) -> f64 {
    a.norm()
}

/// Number of singular values above `rel_tol * sigma_max`.
pub fn numerical_rank(a: &Matrix, rel_tol: f64) -> Result<usize> {
    let s = singular_values(a)?;
    let smax = s.first().copied().unwrap_or(0.0);
    if smax <= 0.0 {
        return Ok(0);
    }
    Ok(s.iter().filter(|&&x| x > rel_tol * smax).count())
}

/// Horizontal concatenation `[A, B]`.
pub fn hcat(a: &Matrix, b: &Matrix) -> Result<Matrix> {
    if a.nrows() != b.nrows() {
        return Err(Error::dim(format!(
            "cannot concatenate {} rows with {} rows",
            a.nrows(),
            b.nrows()
        )));
    }
    let mut out = Matrix::zeros(a.nrows(), a.ncols() + b.ncols());
    out.columns_mut(0, a.ncols()).copy_from(a);
    out.columns_mut(a.ncols(), b.ncols()).copy_from(b);
    Ok(out)
}

/// Gather the listed columns into a new matrix, in the given order.
pub fn select_columns(a: &Matrix, idx: &[usize]) -> Matrix {
    Matrix::from_fn(a.nrows(), idx.len(), |i, j| a[(i, idx[j])])
}

/// The first `r` rows of the `d x d` identity.
pub fn identity_rows(r: usize, d: usize) -> Matrix {
    Matrix::from_fn(r, d, |i, j| if i == j { 1.0 } else { 0.0 })
}
