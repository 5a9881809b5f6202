//! Determinant engines: Dodgson condensation with zero-divisor repair, plus
//! the Leibniz and Bareiss oracles it is checked against.
//!
//! Condensation keeps one layer per minor size. Layer `k` holds every
//! contiguous `k x k` minor of the input, and layer `k + 1` is obtained from
//! layers `k` and `k - 1` by
//!
//! ```text
//! next[i][j] = (cur[i][j] * cur[i+1][j+1] - cur[i][j+1] * cur[i+1][j]) / prev[i+1][j+1]
//! ```
//!
//! with layer 0 taken as all ones. For integer input every division is exact.

mod det;
mod generate;
mod matrix;
mod symbolic;

use thiserror::Error;

use crate::scalars::ScalarError;

pub use det::{
    bareiss_det, condensation_det, condensation_step, determinant, leibniz_det,
    leibniz_det_with_limit, minor_det, rational_det, CondensationConfig, CondensationTrace,
    DetOutcome, Method, RowRepair, LEIBNIZ_MAX_N,
};
pub use generate::{gen_matrix, MatrixKind};
pub use matrix::DenseMatrix;
pub use symbolic::{det_poly, DET_POLY_MAX_N};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DetError {
    #[error("matrix is {rows}x{cols}, expected square")]
    NonSquare { rows: usize, cols: usize },
    #[error("{method} is limited to n <= {max}, got n = {n}")]
    SizeGuard {
        method: &'static str,
        n: usize,
        max: usize,
    },
    /// A condensation divisor vanished. `row`/`col` locate the zero entry in
    /// the previous layer, i.e. the minor whose top-left corner is there.
    #[error("zero divisor at ({row},{col}) of layer {layer}")]
    ZeroDivisor {
        layer: usize,
        row: usize,
        col: usize,
    },
    #[error("inexact division in exact context: {0}")]
    Inexact(ScalarError),
    #[error("rows have differing lengths")]
    Ragged,
    #[error("selection out of range for a {rows}x{cols} matrix")]
    Range { rows: usize, cols: usize },
    #[error("condensation layers have inconsistent shapes")]
    LayerShape,
    #[error("line {line}: cannot parse entry {token:?}")]
    Parse { line: usize, token: String },
    #[error("index sets must be distinct and of equal size")]
    IndexSet,
}
