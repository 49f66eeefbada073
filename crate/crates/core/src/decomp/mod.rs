//! Low-rank plus sparse decomposition and sparse coding.

mod omp;
mod rpca;

pub use omp::{omp, SparseCode};
pub use rpca::{rpca, singular_value_threshold, RpcaConfig, RpcaResult};
