//! CSV output and per-group subspace diagnostics.

use std::path::Path;

use lrt_core::data::io::write_atomic;
use lrt_core::linalg::{
    estimate_subspace_dim, fit_subspace_basis, mean_cosine_principal_angles, nuclear_norm, smallest_principal_angle,
};
use lrt_core::{Matrix, Result, SubspaceBasis};

/// Energy fraction used to pick a subspace dimension when none is given.
pub const SUBSPACE_ENERGY: f64 = 0.95;

/// A CSV table with one header row.
#[derive(Clone, Debug)]
pub struct Csv {
    header: Vec<String>,
    rows: Vec<Vec<String>>,
}

impl Csv {
    pub fn new<S: Into<String>>(header: impl IntoIterator<Item = S>) -> Self {
        Self {
            header: header.into_iter().map(Into::into).collect(),
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<String>) {
        debug_assert_eq!(row.len(), self.header.len());
        self.rows.push(row);
    }

    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    pub fn render(&self) -> String {
        let mut out = self.header.join(",");
        out.push('\n');
        for row in &self.rows {
            out.push_str(&row.join(","));
            out.push('\n');
        }
        out
    }

    pub fn write(&self, path: &Path) -> Result<()> {
        write_atomic(path, self.render().as_bytes())
    }
}

/// Shortest round-trip form; non-finite values become an empty field.
pub fn num(v: f64) -> String {
    if v.is_finite() {
        format!("{v:?}")
    } else {
        String::new()
    }
}

pub fn opt_num(v: Option<f64>) -> String {
    v.map_or(String::new(), num)
}

/// Fitted basis of a group of points, or `None` when the group carries no
/// energy. The dimension is `dim` when given, otherwise estimated, and
/// always capped by the group's size.
pub fn group_basis(points: &Matrix, dim: Option<usize>) -> Result<Option<SubspaceBasis>> {
    let limit = points.nrows().min(points.ncols());
    if limit == 0 || points.iter().all(|&v| v == 0.0) {
        return Ok(None);
    }
    let k = match dim {
        Some(k) => k,
        None => estimate_subspace_dim(points, SUBSPACE_ENERGY)?,
    };
    fit_subspace_basis(points, k.clamp(1, limit)).map(Some)
}

/// Pairwise comparison of two fitted groups.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PairStats {
    pub a: usize,
    pub b: usize,
    pub smallest_angle: f64,
    pub mean_cosine: f64,
}

/// Per-group nuclear norms and pairwise angle statistics. Pairs involving
/// an empty group get NaN.
pub fn group_stats(groups: &[Matrix], dim: Option<usize>) -> Result<(Vec<f64>, Vec<PairStats>)> {
    let norms = groups
        .iter()
        .map(|g| if g.ncols() == 0 { Ok(0.0) } else { nuclear_norm(g) })
        .collect::<Result<Vec<_>>>()?;
    let bases = groups.iter().map(|g| group_basis(g, dim)).collect::<Result<Vec<_>>>()?;
    let mut pairs = Vec::new();
    for a in 0..groups.len() {
        for b in a + 1..groups.len() {
            let (smallest_angle, mean_cosine) = match (&bases[a], &bases[b]) {
                (Some(x), Some(y)) => (smallest_principal_angle(x, y)?, mean_cosine_principal_angles(x, y)?),
                _ => (f64::NAN, f64::NAN),
            };
            pairs.push(PairStats {
                a,
                b,
                smallest_angle,
                mean_cosine,
            });
        }
    }
    Ok((norms, pairs))
}
