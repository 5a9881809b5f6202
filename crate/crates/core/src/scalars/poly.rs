use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_traits::{One, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::{Scalar, ScalarError};
use crate::condensation::DenseMatrix;

/// The indeterminate `a[row][col]`, 1-based.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Cell {
    pub row: u32,
    pub col: u32,
}

impl Cell {
    pub fn new(row: u32, col: u32) -> Self {
        Cell { row, col }
    }
}

impl fmt::Display for Cell {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "a{},{}", self.row, self.col)
    }
}

/// A multiset of cells kept sorted by `(row, col)`. Repeats are allowed.
#[derive(Debug, Clone, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Monomial(Vec<Cell>);

impl Monomial {
    pub fn one() -> Self {
        Monomial(Vec::new())
    }

    pub fn from_cells(cells: impl IntoIterator<Item = Cell>) -> Self {
        let mut cells: Vec<Cell> = cells.into_iter().collect();
        cells.sort_unstable();
        Monomial(cells)
    }

    pub fn cells(&self) -> &[Cell] {
        &self.0
    }

    /// Total degree, counting multiplicity.
    pub fn degree(&self) -> usize {
        self.0.len()
    }

    pub fn multiplicity(&self, cell: Cell) -> usize {
        self.0.iter().filter(|&&c| c == cell).count()
    }

    /// Multiset union.
    pub fn union(&self, other: &Monomial) -> Monomial {
        let mut merged = Vec::with_capacity(self.0.len() + other.0.len());
        let (mut i, mut j) = (0, 0);
        while i < self.0.len() && j < other.0.len() {
            if self.0[i] <= other.0[j] {
                merged.push(self.0[i]);
                i += 1;
            } else {
                merged.push(other.0[j]);
                j += 1;
            }
        }
        merged.extend_from_slice(&self.0[i..]);
        merged.extend_from_slice(&other.0[j..]);
        Monomial(merged)
    }

    pub fn eval<T: Scalar>(&self, m: &DenseMatrix<T>) -> Result<T, ScalarError> {
        let mut acc = T::one();
        for &cell in &self.0 {
            acc = acc * cell_value(m, cell)?.clone();
        }
        Ok(acc)
    }
}

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return f.write_str("1");
        }
        for (k, c) in self.0.iter().enumerate() {
            if k > 0 {
                f.write_str("*")?;
            }
            write!(f, "{c}")?;
        }
        Ok(())
    }
}

fn cell_value<T>(m: &DenseMatrix<T>, cell: Cell) -> Result<&T, ScalarError> {
    let (r, c) = (cell.row as usize, cell.col as usize);
    if r == 0 || c == 0 || r > m.rows() || c > m.cols() {
        return Err(ScalarError::Dimension {
            row: cell.row,
            col: cell.col,
            rows: m.rows(),
            cols: m.cols(),
        });
    }
    Ok(m.get(r - 1, c - 1))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PolyOp {
    Add,
    Subtract,
}

/// Integer-coefficient polynomial in the cell indeterminates.
///
/// Zero coefficients are never stored, so structural equality is polynomial
/// equality.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct FormalPoly {
    terms: BTreeMap<Monomial, BigInt>,
}

impl FormalPoly {
    pub fn zero() -> Self {
        FormalPoly::default()
    }

    pub fn one() -> Self {
        Self::monomial(Monomial::one(), BigInt::one())
    }

    pub fn monomial(m: Monomial, coeff: BigInt) -> Self {
        let mut p = FormalPoly::zero();
        p.add_term(m, coeff);
        p
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn coeff(&self, m: &Monomial) -> BigInt {
        self.terms.get(m).cloned().unwrap_or_default()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &BigInt)> {
        self.terms.iter()
    }

    pub fn add_term(&mut self, m: Monomial, coeff: BigInt) {
        if coeff.is_zero() {
            return;
        }
        match self.terms.entry(m) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(coeff);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                *o.get_mut() += coeff;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    pub fn combine(&self, other: &FormalPoly, op: PolyOp) -> FormalPoly {
        let mut out = self.clone();
        for (m, c) in &other.terms {
            let c = match op {
                PolyOp::Add => c.clone(),
                PolyOp::Subtract => -c,
            };
            out.add_term(m.clone(), c);
        }
        out
    }

    pub fn mul(&self, other: &FormalPoly) -> FormalPoly {
        let mut out = FormalPoly::zero();
        for (m1, c1) in &self.terms {
            for (m2, c2) in &other.terms {
                out.add_term(m1.union(m2), c1 * c2);
            }
        }
        out
    }

    /// Substitutes `a[i][j] := m[i][j]` and evaluates exactly.
    pub fn eval<T: Scalar>(&self, m: &DenseMatrix<T>) -> Result<T, ScalarError> {
        let mut acc = T::zero();
        for (mono, c) in &self.terms {
            let c = T::from_bigint(c).expect("coefficient does not fit the scalar type");
            acc = acc + c * mono.eval(m)?;
        }
        Ok(acc)
    }
}

impl Add for &FormalPoly {
    type Output = FormalPoly;
    fn add(self, rhs: &FormalPoly) -> FormalPoly {
        self.combine(rhs, PolyOp::Add)
    }
}

impl Sub for &FormalPoly {
    type Output = FormalPoly;
    fn sub(self, rhs: &FormalPoly) -> FormalPoly {
        self.combine(rhs, PolyOp::Subtract)
    }
}

impl Mul for &FormalPoly {
    type Output = FormalPoly;
    fn mul(self, rhs: &FormalPoly) -> FormalPoly {
        FormalPoly::mul(self, rhs)
    }
}

impl Neg for &FormalPoly {
    type Output = FormalPoly;
    fn neg(self) -> FormalPoly {
        FormalPoly {
            terms: self.terms.iter().map(|(m, c)| (m.clone(), -c)).collect(),
        }
    }
}

impl std::iter::Sum for FormalPoly {
    fn sum<I: Iterator<Item = FormalPoly>>(iter: I) -> Self {
        iter.fold(FormalPoly::zero(), |acc, p| &acc + &p)
    }
}

impl fmt::Display for FormalPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        for (k, (m, c)) in self.terms.iter().enumerate() {
            if k > 0 {
                f.write_str(" + ")?;
            }
            write!(f, "({c})*{m}")?;
        }
        Ok(())
    }
}

#[derive(Serialize, Deserialize)]
struct TermRepr {
    cells: Vec<[u32; 2]>,
    coeff: String,
}

impl Serialize for FormalPoly {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let repr: Vec<TermRepr> = self
            .terms
            .iter()
            .map(|(m, c)| TermRepr {
                cells: m.0.iter().map(|c| [c.row, c.col]).collect(),
                coeff: c.to_string(),
            })
            .collect();
        repr.serialize(s)
    }
}

impl<'de> Deserialize<'de> for FormalPoly {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let repr = Vec::<TermRepr>::deserialize(d)?;
        let mut p = FormalPoly::zero();
        for t in repr {
            let coeff: BigInt = t.coeff.parse().map_err(serde::de::Error::custom)?;
            p.add_term(
                Monomial::from_cells(t.cells.into_iter().map(|[r, c]| Cell::new(r, c))),
                coeff,
            );
        }
        Ok(p)
    }
}
