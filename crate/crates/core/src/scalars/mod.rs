//! Exact arithmetic: the scalar trait shared by every determinant engine,
//! exact division, and formal polynomials over matrix-cell indeterminates.

mod poly;

use std::fmt::{Debug, Display};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{FromPrimitive, Signed, ToPrimitive, Zero};
use thiserror::Error;

pub use poly::{Cell, FormalPoly, Monomial, PolyOp};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ScalarError {
    #[error("division by zero")]
    ZeroDivisor,
    /// An integral-domain division left a remainder where the algorithm
    /// guarantees it cannot. Always indicates a bug upstream.
    #[error("inexact division {dividend} / {divisor} in an exact-division context")]
    Inexact { dividend: String, divisor: String },
    #[error("cell ({row},{col}) lies outside a {rows}x{cols} matrix")]
    Dimension {
        row: u32,
        col: u32,
        rows: usize,
        cols: usize,
    },
}

/// An exact ring element usable as a matrix entry.
///
/// Implementors are integral domains where `exact_div` succeeds whenever the
/// quotient exists in the ring. Bigint and rational types never round; the
/// machine-integer impls panic on overflow in debug builds, so only use them
/// when entries are known to stay small.
pub trait Scalar:
    Clone + Debug + Display + PartialEq + Signed + FromPrimitive + Send + Sync + 'static
{
    /// `self / rhs` when the quotient is exact, otherwise `Inexact`.
    fn exact_div(&self, rhs: &Self) -> Result<Self, ScalarError>;

    fn from_bigint(value: &BigInt) -> Option<Self>;
}

impl Scalar for BigInt {
    fn exact_div(&self, rhs: &Self) -> Result<Self, ScalarError> {
        if rhs.is_zero() {
            return Err(ScalarError::ZeroDivisor);
        }
        let (q, r) = self.div_rem(rhs);
        if r.is_zero() {
            Ok(q)
        } else {
            Err(inexact(self, rhs))
        }
    }

    fn from_bigint(value: &BigInt) -> Option<Self> {
        Some(value.clone())
    }
}

impl Scalar for BigRational {
    fn exact_div(&self, rhs: &Self) -> Result<Self, ScalarError> {
        if rhs.is_zero() {
            return Err(ScalarError::ZeroDivisor);
        }
        Ok(self / rhs)
    }

    fn from_bigint(value: &BigInt) -> Option<Self> {
        Some(BigRational::from_integer(value.clone()))
    }
}

macro_rules! machine_scalar {
    ($($t:ty),*) => {$(
        impl Scalar for $t {
            fn exact_div(&self, rhs: &Self) -> Result<Self, ScalarError> {
                if *rhs == 0 {
                    return Err(ScalarError::ZeroDivisor);
                }
                if self % rhs == 0 {
                    Ok(self / rhs)
                } else {
                    Err(inexact(self, rhs))
                }
            }

            fn from_bigint(value: &BigInt) -> Option<Self> {
                <$t as FromPrimitive>::from_i128(value.to_i128()?)
            }
        }
    )*};
}

machine_scalar!(i32, i64, i128);

fn inexact<T: Display>(a: &T, b: &T) -> ScalarError {
    ScalarError::Inexact {
        dividend: a.to_string(),
        divisor: b.to_string(),
    }
}

/// Exact quotient of two rationals. Fails only on a zero divisor.
pub fn exact_div(a: &BigRational, b: &BigRational) -> Result<BigRational, ScalarError> {
    a.exact_div(b)
}

/// Quotient of two integer-valued rationals that the caller knows must be an
/// integer (condensation and Bareiss steps). A fractional result is reported
/// as `Inexact` rather than silently kept.
pub fn exact_div_integral(a: &BigRational, b: &BigRational) -> Result<BigRational, ScalarError> {
    let q = a.exact_div(b)?;
    if a.is_integer() && b.is_integer() && !q.is_integer() {
        return Err(inexact(a, b));
    }
    Ok(q)
}
