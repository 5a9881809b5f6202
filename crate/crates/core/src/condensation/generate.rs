use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::DenseMatrix;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MatrixKind {
    /// Entries uniform in `[-bound, bound]`.
    Random,
    /// Rows `[1, x, x^2, ...]` on nodes `x = 1..=n`; the bound is ignored.
    Vandermonde,
    /// Random, except that a central 2x2 block of the interior is rank one
    /// with a zero row or column, so both an interior entry and a contiguous
    /// interior 2x2 minor vanish.
    SingularInterior,
}

impl fmt::Display for MatrixKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            MatrixKind::Random => "random",
            MatrixKind::Vandermonde => "vandermonde",
            MatrixKind::SingularInterior => "singular-interior",
        })
    }
}

impl FromStr for MatrixKind {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "random" => Ok(MatrixKind::Random),
            "vandermonde" => Ok(MatrixKind::Vandermonde),
            "singular-interior" => Ok(MatrixKind::SingularInterior),
            other => Err(format!("unknown matrix kind {other:?}")),
        }
    }
}

/// Deterministic test and benchmark matrices.
pub fn gen_matrix(kind: MatrixKind, n: usize, bound: u64, seed: u64) -> DenseMatrix<BigInt> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let bound = i64::try_from(bound).unwrap_or(i64::MAX);
    let uniform = |rng: &mut ChaCha8Rng| BigInt::from(rng.gen_range(-bound..=bound));
    match kind {
        MatrixKind::Random => DenseMatrix::from_fn(n, n, |_, _| uniform(&mut rng)),
        MatrixKind::Vandermonde => {
            DenseMatrix::from_fn(n, n, |i, j| num_traits::pow(BigInt::from(i + 1), j))
        }
        MatrixKind::SingularInterior => {
            let mut m = DenseMatrix::from_fn(n, n, |_, _| uniform(&mut rng));
            if n == 3 {
                m.set(1, 1, BigInt::zero());
            } else if n >= 4 {
                let c = (n - 2) / 2;
                let nonzero = |rng: &mut ChaCha8Rng| {
                    let b = bound.max(1);
                    let v = rng.gen_range(1..=b);
                    BigInt::from(if rng.gen_bool(0.5) { v } else { -v })
                };
                let mut u = [nonzero(&mut rng), nonzero(&mut rng)];
                let mut v = [nonzero(&mut rng), nonzero(&mut rng)];
                match rng.gen_range(0..4) {
                    0 => u[0] = BigInt::zero(),
                    1 => u[1] = BigInt::zero(),
                    2 => v[0] = BigInt::zero(),
                    _ => v[1] = BigInt::zero(),
                }
                for (a, ua) in u.iter().enumerate() {
                    for (b, vb) in v.iter().enumerate() {
                        m.set(c + a, c + b, ua * vb);
                    }
                }
            }
            m
        }
    }
}

impl DenseMatrix<BigInt> {
    /// Independent closed form for [`MatrixKind::Vandermonde`]:
    /// the product of `x_j - x_i` over `i < j`.
    pub fn vandermonde_det(n: usize) -> BigInt {
        let mut acc = BigInt::one();
        for i in 1..=n {
            for j in i + 1..=n {
                acc *= BigInt::from(j - i);
            }
        }
        acc
    }
}
