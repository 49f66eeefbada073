//! Closed-form transforms used as baselines for the learned transform.

use nalgebra::SymmetricEigen;

use super::{singular_values, Matrix, SubspaceBasis, Vector};
use crate::data::LabeledDataset;
use crate::error::{Error, Result};

const MAX_CONDITION: f64 = 1e12;

/// `T = (U'U)^{-1} U'` for the stacked bases `U = [U_1, ..., U_C]`.
///
/// Maps independent subspaces onto mutually orthogonal coordinate blocks.
pub fn orthogonalizing_transform(bases: &[SubspaceBasis]) -> Result<Matrix> {
    let first = bases
        .first()
        .ok_or_else(|| Error::param("at least one basis is required"))?;
    let d = first.ambient_dim();
    if let Some(b) = bases.iter().find(|b| b.ambient_dim() != d) {
        return Err(Error::dim(format!("bases live in R^{d} and R^{}", b.ambient_dim())));
    }
    let r: usize = bases.iter().map(SubspaceBasis::dim).sum();
    let mut u = Matrix::zeros(d, r);
    let mut at = 0;
    for b in bases {
        u.columns_mut(at, b.dim()).copy_from(b.matrix());
        at += b.dim();
    }
    if r > d {
        return Err(Error::Singular(format!(
            "{r} stacked basis vectors cannot be independent in R^{d}"
        )));
    }
    let s = singular_values(&u)?;
    let smin = *s.last().expect("nonempty");
    let cond = if smin > 0.0 { s[0] / smin } else { f64::INFINITY };
    if cond >= MAX_CONDITION {
        return Err(Error::Singular(format!(
            "stacked bases are dependent (condition number {cond:.3e})"
        )));
    }
    let gram = u.transpose() * &u;
    let chol = gram
        .cholesky()
        .ok_or_else(|| Error::Singular("U'U is not positive definite".into()))?;
    Ok(chol.solve(&u.transpose()))
}

/// Linear discriminant analysis with `out_dim` orthonormal rows.
///
/// Directions are the leading eigenvectors of `(S_w + eps I)^{-1} S_b` with
/// `eps = 1e-6 * trace(S_w) / d`, orthonormalized in eigenvalue order.
pub fn lda_transform(data: &LabeledDataset, out_dim: usize) -> Result<Matrix> {
    let d = data.dim();
    if out_dim == 0 || out_dim > d {
        return Err(Error::param(format!("LDA output dimension {out_dim} not in 1..={d}")));
    }
    if data.num_classes() < 2 {
        return Err(Error::param("LDA needs at least two classes"));
    }
    let y = data.points();
    let n = y.ncols() as f64;
    let mean: Vector = y.column_sum() / n;

    let mut sw = Matrix::zeros(d, d);
    let mut sb = Matrix::zeros(d, d);
    for c in 0..data.num_classes() {
        let yc = data.class_points(c);
        if yc.ncols() == 0 {
            continue;
        }
        let mc: Vector = yc.column_sum() / yc.ncols() as f64;
        for col in yc.column_iter() {
            let dev = col - &mc;
            sw += &dev * dev.transpose();
        }
        let dm = &mc - &mean;
        sb += (&dm * dm.transpose()) * yc.ncols() as f64;
    }
    let mut eps = 1e-6 * sw.trace() / d as f64;
    if !(eps > 0.0) {
        eps = 1e-12;
    }
    let reg = &sw + Matrix::identity(d, d) * eps;
    let chol = reg
        .cholesky()
        .ok_or_else(|| Error::Singular("regularized within-class scatter".into()))?;
    // whitened problem: L^{-1} S_b L^{-T} v = lambda v, w = L^{-T} v
    let l = chol.l();
    let linv_sb = l
        .solve_lower_triangular(&sb)
        .ok_or_else(|| Error::Singular("within-class factor".into()))?;
    let m = l
        .solve_lower_triangular(&linv_sb.transpose())
        .ok_or_else(|| Error::Singular("within-class factor".into()))?;
    let m = (&m + m.transpose()) * 0.5;
    let eig = SymmetricEigen::new(m);
    let mut order: Vec<usize> = (0..d).collect();
    order.sort_by(|&a, &b| {
        eig.eigenvalues[b]
            .partial_cmp(&eig.eigenvalues[a])
            .expect("finite eigenvalues")
            .then(a.cmp(&b))
    });
    let lt = l.transpose();
    let mut rows: Vec<Vector> = Vec::with_capacity(out_dim);
    for &k in &order {
        if rows.len() == out_dim {
            break;
        }
        let v = eig.eigenvectors.column(k).clone_owned();
        let Some(mut w) = lt.solve_upper_triangular(&v) else {
            continue;
        };
        for _ in 0..2 {
            for r in &rows {
                let proj = r.dot(&w);
                w -= r * proj;
            }
        }
        let norm = w.norm();
        if norm > 1e-12 {
            rows.push(w / norm);
        }
    }
    // eigenvectors of a full-rank whitening are independent, but guard anyway
    let mut k = 0;
    while rows.len() < out_dim && k < d {
        let mut w = Vector::from_fn(d, |i, _| if i == k { 1.0 } else { 0.0 });
        for r in &rows {
            let proj = r.dot(&w);
            w -= r * proj;
        }
        if w.norm() > 1e-8 {
            let n = w.norm();
            rows.push(w / n);
        }
        k += 1;
    }
    Ok(Matrix::from_fn(out_dim, d, |i, j| rows[i][j]))
}
