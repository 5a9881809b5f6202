use itertools::Itertools;
use num_bigint::BigInt;

use super::DetError;
use crate::matchings::inversion_parity;
use crate::scalars::{Cell, FormalPoly, Monomial};

/// Factorial-cost guard for [`det_poly`].
pub const DET_POLY_MAX_N: usize = 7;

/// Symbolic determinant of the submatrix of indeterminates `a[i][j]` on the
/// given 1-based row and column sets.
///
/// Both sets are taken in increasing order, so a bijection between shifted
/// sets is signed by the parity of its order-isomorphic relabeling. Empty
/// sets give the constant 1.
pub fn det_poly(rows: &[u32], cols: &[u32]) -> Result<FormalPoly, DetError> {
    let rows = sorted_distinct(rows)?;
    let cols = sorted_distinct(cols)?;
    if rows.len() != cols.len() {
        return Err(DetError::IndexSet);
    }
    let k = rows.len();
    if k > DET_POLY_MAX_N {
        return Err(DetError::SizeGuard {
            method: "det_poly",
            n: k,
            max: DET_POLY_MAX_N,
        });
    }
    let mut p = FormalPoly::zero();
    for perm in (0..k).permutations(k) {
        let mono =
            Monomial::from_cells(rows.iter().zip(&perm).map(|(&r, &j)| Cell::new(r, cols[j])));
        let coeff = if inversion_parity(&perm) { -1 } else { 1 };
        p.add_term(mono, BigInt::from(coeff));
    }
    Ok(p)
}

fn sorted_distinct(set: &[u32]) -> Result<Vec<u32>, DetError> {
    let mut v = set.to_vec();
    v.sort_unstable();
    if v.windows(2).any(|w| w[0] == w[1]) || v.first() == Some(&0) {
        return Err(DetError::IndexSet);
    }
    Ok(v)
}
