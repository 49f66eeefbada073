use crate::error::{Error, Result};
use crate::linalg::{Matrix, Vector};

/// Result of a sparse decomposition `y ~ D x`.
#[derive(Clone, Debug)]
pub struct SparseCode {
    /// One coefficient per atom, in the atoms' original scale.
    pub coefficients: Vector,
    /// Selected atoms in selection order.
    pub support: Vec<usize>,
    pub residual_norm: f64,
}

/// Orthogonal matching pursuit with at most `sparsity` atoms.
///
/// Atoms are compared after normalization to unit length; the coefficients
/// are a least-squares fit on the original atoms. Ties go to the lowest atom
/// index. Selection stops early once the residual is (numerically) zero or
/// orthogonal to every remaining atom.
pub fn omp(y: &Vector, dict: &Matrix, sparsity: usize) -> Result<SparseCode> {
    let (d, atoms) = dict.shape();
    if y.len() != d {
        return Err(Error::dim(format!(
            "signal has length {}, dictionary atoms have length {d}",
            y.len()
        )));
    }
    if sparsity == 0 || sparsity > atoms {
        return Err(Error::param(format!("sparsity {sparsity} not in 1..={atoms}")));
    }
    let norms: Vec<f64> = dict.column_iter().map(|c| c.norm()).collect();
    if norms.iter().all(|&n| n == 0.0) {
        return Err(Error::param("dictionary has no nonzero atoms"));
    }

    let y_norm = y.norm();
    let floor = 1e-12 * y_norm.max(f64::MIN_POSITIVE);
    let mut support: Vec<usize> = Vec::with_capacity(sparsity);
    let mut selected = vec![false; atoms];
    let mut coef = Vector::zeros(0);
    let mut residual = y.clone();
    let mut res_norm = y_norm;

    while support.len() < sparsity && res_norm > floor {
        let mut best: Option<(usize, f64)> = None;
        for j in 0..atoms {
            if selected[j] || norms[j] == 0.0 {
                continue;
            }
            let c = dict.column(j).dot(&residual).abs() / norms[j];
            if best.is_none_or(|(_, b)| c > b) {
                best = Some((j, c));
            }
        }
        let Some((j, corr)) = best else { break };
        if corr <= floor {
            break;
        }
        support.push(j);
        let sub = Matrix::from_columns(&support.iter().map(|&k| dict.column(k)).collect::<Vec<_>>());
        let fit = sub
            .clone()
            .svd(true, true)
            .solve(y, 1e-12)
            .map_err(|e| Error::numerical(format!("omp least squares: {e}")))?;
        let new_residual = y - &sub * &fit;
        let new_norm = new_residual.norm();
        if new_norm >= res_norm {
            // The atom is dependent on the current support.
            support.pop();
            break;
        }
        selected[j] = true;
        coef = fit;
        residual = new_residual;
        res_norm = new_norm;
    }

    let mut coefficients = Vector::zeros(atoms);
    for (k, &j) in support.iter().enumerate() {
        coefficients[j] = coef[k];
    }
    Ok(SparseCode {
        coefficients,
        support,
        residual_norm: res_norm,
    })
}
