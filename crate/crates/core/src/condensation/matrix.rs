use std::fmt;
use std::ops::Range;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Zero};

use super::DetError;
use crate::scalars::Scalar;

/// Dense row-major matrix.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct DenseMatrix<T> {
    rows: usize,
    cols: usize,
    entries: Vec<T>,
}

impl<T> DenseMatrix<T> {
    pub fn from_vec(rows: usize, cols: usize, entries: Vec<T>) -> Result<Self, DetError> {
        if entries.len() != rows * cols {
            return Err(DetError::Ragged);
        }
        Ok(DenseMatrix {
            rows,
            cols,
            entries,
        })
    }

    pub fn from_rows(rows: Vec<Vec<T>>) -> Result<Self, DetError> {
        let n_rows = rows.len();
        let n_cols = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|r| r.len() != n_cols) {
            return Err(DetError::Ragged);
        }
        Ok(DenseMatrix {
            rows: n_rows,
            cols: n_cols,
            entries: rows.into_iter().flatten().collect(),
        })
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> T) -> Self {
        let mut entries = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                entries.push(f(i, j));
            }
        }
        DenseMatrix {
            rows,
            cols,
            entries,
        }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    /// Entry at 0-based `(i, j)`. Panics when out of range.
    pub fn get(&self, i: usize, j: usize) -> &T {
        assert!(
            i < self.rows && j < self.cols,
            "index ({i},{j}) out of range"
        );
        &self.entries[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, value: T) {
        assert!(
            i < self.rows && j < self.cols,
            "index ({i},{j}) out of range"
        );
        self.entries[i * self.cols + j] = value;
    }

    pub fn row(&self, i: usize) -> &[T] {
        &self.entries[i * self.cols..(i + 1) * self.cols]
    }

    pub fn entries(&self) -> &[T] {
        &self.entries
    }

    pub fn map<U>(&self, f: impl FnMut(&T) -> U) -> DenseMatrix<U> {
        DenseMatrix {
            rows: self.rows,
            cols: self.cols,
            entries: self.entries.iter().map(f).collect(),
        }
    }

    pub(crate) fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.entries.swap(a * self.cols + j, b * self.cols + j);
        }
    }
}

impl<T: Clone> DenseMatrix<T> {
    /// Contiguous submatrix, 0-based half-open ranges.
    pub fn submatrix(&self, rows: Range<usize>, cols: Range<usize>) -> Result<Self, DetError> {
        if rows.start > rows.end
            || cols.start > cols.end
            || rows.end > self.rows
            || cols.end > self.cols
        {
            return Err(DetError::Range {
                rows: self.rows,
                cols: self.cols,
            });
        }
        Ok(DenseMatrix::from_fn(rows.len(), cols.len(), |i, j| {
            self.get(rows.start + i, cols.start + j).clone()
        }))
    }

    pub fn transpose(&self) -> Self {
        DenseMatrix::from_fn(self.cols, self.rows, |i, j| self.get(j, i).clone())
    }
}

impl<T: Scalar> DenseMatrix<T> {
    pub fn identity(n: usize) -> Self {
        Self::from_fn(n, n, |i, j| if i == j { T::one() } else { T::zero() })
    }

    pub fn filled(rows: usize, cols: usize, value: T) -> Self {
        Self::from_fn(rows, cols, |_, _| value.clone())
    }

    pub fn matmul(&self, rhs: &Self) -> Result<Self, DetError> {
        if self.cols != rhs.rows {
            return Err(DetError::Ragged);
        }
        Ok(Self::from_fn(self.rows, rhs.cols, |i, j| {
            (0..self.cols).fold(T::zero(), |acc, k| {
                acc + self.get(i, k).clone() * rhs.get(k, j).clone()
            })
        }))
    }

    /// `row[target] += factor * row[source]`.
    pub fn add_row_multiple(&mut self, target: usize, source: usize, factor: &T) {
        assert_ne!(target, source);
        for j in 0..self.cols {
            let v = self.get(target, j).clone() + factor.clone() * self.get(source, j).clone();
            self.set(target, j, v);
        }
    }
}

impl DenseMatrix<BigInt> {
    pub fn to_rational(&self) -> DenseMatrix<BigRational> {
        self.map(|v| BigRational::from_integer(v.clone()))
    }
}

impl DenseMatrix<BigRational> {
    /// Scales each row by the lcm of its denominators. Returns the integer
    /// matrix and the product of the scales, so that
    /// `det(self) = det(result) / scale`.
    pub fn clear_denominators(&self) -> (DenseMatrix<BigInt>, BigInt) {
        let mut scale = BigInt::one();
        let mut out = Vec::with_capacity(self.entries.len());
        for i in 0..self.rows {
            let lcm = self
                .row(i)
                .iter()
                .fold(BigInt::one(), |l, v| l.lcm(v.denom()));
            out.extend(self.row(i).iter().map(|v| v.numer() * (&lcm / v.denom())));
            scale *= lcm;
        }
        (
            DenseMatrix {
                rows: self.rows,
                cols: self.cols,
                entries: out,
            },
            scale,
        )
    }

    /// Parses the whitespace-separated text format: `#` comment lines, then
    /// one row per line, entries as signed integers or `p/q`.
    pub fn parse_text(text: &str) -> Result<Self, DetError> {
        let mut rows = Vec::new();
        for (lineno, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let row = line
                .split_whitespace()
                .map(|tok| {
                    parse_entry(tok).ok_or_else(|| DetError::Parse {
                        line: lineno + 1,
                        token: tok.to_string(),
                    })
                })
                .collect::<Result<Vec<_>, _>>()?;
            rows.push(row);
        }
        DenseMatrix::from_rows(rows)
    }
}

fn parse_entry(tok: &str) -> Option<BigRational> {
    match tok.split_once('/') {
        Some((p, q)) => {
            let q: BigInt = q.parse().ok()?;
            if q.is_zero() || q < BigInt::zero() {
                return None;
            }
            Some(BigRational::new(p.parse().ok()?, q))
        }
        None => Some(BigRational::from_integer(tok.parse().ok()?)),
    }
}

impl<T: fmt::Display> fmt::Display for DenseMatrix<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.rows {
            for j in 0..self.cols {
                if j > 0 {
                    f.write_str(" ")?;
                }
                write!(f, "{}", self.entries[i * self.cols + j])?;
            }
            writeln!(f)?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_text_format() {
        let m = DenseMatrix::parse_text("# a comment\n1 -2\n\n3/6 4\n").unwrap();
        assert_eq!(m.rows(), 2);
        assert_eq!(*m.get(1, 0), BigRational::new(1.into(), 2.into()));
        assert_eq!(*m.get(0, 1), BigRational::from_integer((-2).into()));
        let shown = m.to_string();
        assert_eq!(DenseMatrix::parse_text(&shown).unwrap(), m);
    }

    #[test]
    fn rejects_bad_text() {
        assert!(matches!(
            DenseMatrix::parse_text("1 2\n3 x\n"),
            Err(DetError::Parse { line: 2, .. })
        ));
        assert_eq!(DenseMatrix::parse_text("1 2\n3\n"), Err(DetError::Ragged));
        assert!(DenseMatrix::parse_text("1/0\n").is_err());
    }

    #[test]
    fn clears_denominators_per_row() {
        let m = DenseMatrix::parse_text("1/2 1/3\n2 5\n").unwrap();
        let (ints, scale) = m.clear_denominators();
        assert_eq!(scale, BigInt::from(6));
        assert_eq!(ints.row(0), &[BigInt::from(3), BigInt::from(2)]);
        assert_eq!(ints.row(1), &[BigInt::from(2), BigInt::from(5)]);
    }

    #[test]
    fn submatrix_bounds() {
        let m = DenseMatrix::from_fn(3, 3, |i, j| (3 * i + j) as i64);
        assert_eq!(m.submatrix(1..3, 0..2).unwrap().entries(), &[3, 4, 6, 7]);
        assert_eq!(m.submatrix(1..1, 1..1).unwrap().rows(), 0);
        assert!(m.submatrix(2..4, 0..2).is_err());
    }
}
