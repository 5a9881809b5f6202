//! Exact determinant evaluation by Dodgson condensation, and a mechanised
//! bijective proof of the condensation identity
//!
//! ```text
//! det(M) * det(interior) = det(NW) * det(SE) - det(NE) * det(SW)
//! ```
//!
//! where the four corner minors each drop one boundary row and one boundary
//! column. [`bijection`] builds the weight-preserving map between the
//! matched pairs counted by each side and checks it exhaustively;
//! [`condensation`] turns the identity into a working determinant engine.
//!
//! The engines are generic over [`Scalar`]; the aliases below fix the exact
//! types used by the command-line tool.

pub mod bijection;
pub mod condensation;
pub mod matchings;
pub mod scalars;

pub use bijection::{
    chain_forward, classify, map_s, map_t, map_t_inverse, verify_alice_formal,
    verify_alice_numeric, BijectionError, Chain, Classification, MapOp, MapTrace,
};
pub use condensation::{
    bareiss_det, condensation_det, condensation_step, det_poly, gen_matrix, leibniz_det, minor_det,
    CondensationConfig, CondensationTrace, DenseMatrix, DetError, MatrixKind, Method,
};
pub use matchings::{
    enumerate_class, pairing_weight, validate_pairing, FormalWeight, Pairing, PairingClass,
    PairingError, Permutation, RawPairing, Sign,
};
pub use scalars::{exact_div, Cell, FormalPoly, Monomial, Scalar, ScalarError};

/// Exact rational matrix entry, always in lowest terms.
pub type ExactScalar = num_rational::BigRational;
/// Arbitrary-precision integer entry.
pub type Integer = num_bigint::BigInt;
/// Matrix over exact rationals, as read from the text format.
pub type Matrix = DenseMatrix<ExactScalar>;
/// Matrix over arbitrary-precision integers, the engines' working type.
pub type IntMatrix = DenseMatrix<Integer>;
