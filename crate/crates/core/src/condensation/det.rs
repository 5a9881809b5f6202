use std::fmt;
use std::ops::Range;
use std::str::FromStr;

use itertools::Itertools;
use num_bigint::BigInt;
use num_rational::BigRational;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use serde_json::{json, Value};

use super::{DenseMatrix, DetError};
use crate::matchings::inversion_parity;
use crate::scalars::{Scalar, ScalarError};

/// Default factorial-cost guard for [`leibniz_det`].
pub const LEIBNIZ_MAX_N: usize = 9;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Method {
    Condensation,
    Bareiss,
    Leibniz,
}

impl Method {
    pub fn name(self) -> &'static str {
        match self {
            Method::Condensation => "condensation",
            Method::Bareiss => "bareiss",
            Method::Leibniz => "leibniz",
        }
    }
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Method {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "condensation" => Ok(Method::Condensation),
            "bareiss" => Ok(Method::Bareiss),
            "leibniz" => Ok(Method::Leibniz),
            other => Err(format!("unknown method {other:?}")),
        }
    }
}

fn require_square<T>(m: &DenseMatrix<T>) -> Result<usize, DetError> {
    if m.is_square() {
        Ok(m.rows())
    } else {
        Err(DetError::NonSquare {
            rows: m.rows(),
            cols: m.cols(),
        })
    }
}

fn exact<T: Scalar>(a: &T, b: &T) -> Result<T, DetError> {
    a.exact_div(b).map_err(DetError::Inexact)
}

pub fn leibniz_det<T: Scalar>(m: &DenseMatrix<T>) -> Result<T, DetError> {
    leibniz_det_with_limit(m, LEIBNIZ_MAX_N)
}

/// Sum over all permutations of signed products.
pub fn leibniz_det_with_limit<T: Scalar>(m: &DenseMatrix<T>, max_n: usize) -> Result<T, DetError> {
    let n = require_square(m)?;
    if n > max_n {
        return Err(DetError::SizeGuard {
            method: "leibniz",
            n,
            max: max_n,
        });
    }
    let mut total = T::zero();
    for perm in (0..n).permutations(n) {
        let term = perm
            .iter()
            .enumerate()
            .fold(T::one(), |acc, (i, &j)| acc * m.get(i, j).clone());
        if inversion_parity(&perm) {
            total = total - term;
        } else {
            total = total + term;
        }
    }
    Ok(total)
}

/// Fraction-free elimination with row-swap pivoting.
pub fn bareiss_det<T: Scalar>(m: &DenseMatrix<T>) -> Result<T, DetError> {
    let n = require_square(m)?;
    if n == 0 {
        return Ok(T::one());
    }
    let mut a = m.clone();
    let mut negate = false;
    let mut prev_pivot = T::one();
    for k in 0..n - 1 {
        if a.get(k, k).is_zero() {
            match (k + 1..n).find(|&i| !a.get(i, k).is_zero()) {
                Some(i) => {
                    a.swap_rows(k, i);
                    negate = !negate;
                }
                None => return Ok(T::zero()),
            }
        }
        let pivot = a.get(k, k).clone();
        for i in k + 1..n {
            let lead = a.get(i, k).clone();
            for j in k + 1..n {
                let num = a.get(i, j).clone() * pivot.clone() - lead.clone() * a.get(k, j).clone();
                a.set(i, j, exact(&num, &prev_pivot)?);
            }
            a.set(i, k, T::zero());
        }
        prev_pivot = pivot;
    }
    let det = a.get(n - 1, n - 1).clone();
    Ok(if negate { -det } else { det })
}

/// One condensation step: from the current layer of `k x k` minors and the
/// previous layer of `(k-1) x (k-1)` minors, produce the `(k+1) x (k+1)`
/// minors.
///
/// A vanishing divisor is reported as `ZeroDivisor` with `layer = 0` and the
/// divisor's position in `previous`; [`condensation_det`] fills in the layer.
pub fn condensation_step<T: Scalar>(
    current: &DenseMatrix<T>,
    previous: &DenseMatrix<T>,
) -> Result<DenseMatrix<T>, DetError> {
    let s = current.rows();
    if !current.is_square() || s == 0 || previous.rows() != s + 1 || previous.cols() != s + 1 {
        return Err(DetError::LayerShape);
    }
    let mut entries = Vec::with_capacity((s - 1) * (s - 1));
    for i in 0..s - 1 {
        for j in 0..s - 1 {
            let divisor = previous.get(i + 1, j + 1);
            if divisor.is_zero() {
                return Err(DetError::ZeroDivisor {
                    layer: 0,
                    row: i + 1,
                    col: j + 1,
                });
            }
            let num = current.get(i, j).clone() * current.get(i + 1, j + 1).clone()
                - current.get(i, j + 1).clone() * current.get(i + 1, j).clone();
            entries.push(exact(&num, divisor)?);
        }
    }
    DenseMatrix::from_vec(s - 1, s - 1, entries)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CondensationConfig {
    /// Repair attempts before falling back to Bareiss.
    pub retries: usize,
    pub seed: u64,
}

impl Default for CondensationConfig {
    fn default() -> Self {
        CondensationConfig {
            retries: 10,
            seed: 0,
        }
    }
}

/// A determinant-preserving repair `row[target] += factor * row[source]`,
/// applied after attempt `attempt` hit a zero divisor.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct RowRepair {
    pub attempt: usize,
    pub target: usize,
    pub source: usize,
    pub factor: i64,
    /// Layer and position of the vanishing minor that triggered the repair.
    pub zero_layer: usize,
    pub zero_row: usize,
    pub zero_col: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct CondensationTrace<T> {
    /// `layers[k - 1]` holds the contiguous `k x k` minors of the (repaired)
    /// matrix. Empty when the fallback was used.
    pub layers: Vec<DenseMatrix<T>>,
    pub repairs: Vec<RowRepair>,
    pub fallback_used: bool,
}

impl<T: fmt::Display> CondensationTrace<T> {
    pub fn to_json(&self) -> Value {
        let layers: Vec<Value> = self
            .layers
            .iter()
            .map(|l| {
                Value::Array(
                    (0..l.rows())
                        .map(|i| {
                            l.row(i)
                                .iter()
                                .map(|v| Value::String(v.to_string()))
                                .collect()
                        })
                        .collect(),
                )
            })
            .collect();
        json!({
            "layers": layers,
            "repairs": self.repairs,
            "fallback_used": self.fallback_used,
        })
    }
}

fn condense_all<T: Scalar>(m: &DenseMatrix<T>) -> Result<Vec<DenseMatrix<T>>, DetError> {
    let n = m.rows();
    let mut layers = vec![m.clone()];
    let mut previous = DenseMatrix::filled(n + 1, n + 1, T::one());
    for layer in 1..n {
        let current = &layers[layer - 1];
        let next = condensation_step(current, &previous).map_err(|e| match e {
            DetError::ZeroDivisor { row, col, .. } => DetError::ZeroDivisor {
                layer: layer - 1,
                row,
                col,
            },
            other => other,
        })?;
        previous = current.clone();
        layers.push(next);
    }
    Ok(layers)
}

/// Dodgson condensation. Vanishing interior minors are repaired by seeded
/// random row additions; after `config.retries` failed repairs the Bareiss
/// result is returned and the trace is flagged.
pub fn condensation_det<T: Scalar>(
    m: &DenseMatrix<T>,
    config: &CondensationConfig,
) -> Result<(T, CondensationTrace<T>), DetError> {
    let n = require_square(m)?;
    let mut trace = CondensationTrace {
        layers: Vec::new(),
        repairs: Vec::new(),
        fallback_used: false,
    };
    if n == 0 {
        return Ok((T::one(), trace));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    let mut work = m.clone();
    for attempt in 0..=config.retries {
        match condense_all(&work) {
            Ok(layers) => {
                let det = layers[n - 1].get(0, 0).clone();
                trace.layers = layers;
                return Ok((det, trace));
            }
            Err(DetError::ZeroDivisor { layer, row, col }) => {
                if attempt == config.retries {
                    break;
                }
                // the zero is the layer-sized minor on rows row..row+layer
                let window = row..row + layer;
                let target = rng.gen_range(window.clone());
                let outside: Vec<usize> = (0..n).filter(|r| !window.contains(r)).collect();
                let source = outside[rng.gen_range(0..outside.len())];
                let magnitude = rng.gen_range(1..=3i64);
                let factor = if rng.gen_bool(0.5) {
                    magnitude
                } else {
                    -magnitude
                };
                let t = T::from_i64(factor).expect("small integer fits every scalar");
                work.add_row_multiple(target, source, &t);
                trace.repairs.push(RowRepair {
                    attempt,
                    target,
                    source,
                    factor,
                    zero_layer: layer,
                    zero_row: row,
                    zero_col: col,
                });
            }
            Err(other) => return Err(other),
        }
    }
    trace.fallback_used = true;
    Ok((bareiss_det(m)?, trace))
}

pub fn determinant<T: Scalar>(m: &DenseMatrix<T>, method: Method) -> Result<T, DetError> {
    match method {
        Method::Condensation => condensation_det(m, &CondensationConfig::default()).map(|(d, _)| d),
        Method::Bareiss => bareiss_det(m),
        Method::Leibniz => leibniz_det(m),
    }
}

/// Determinant of the contiguous submatrix on 0-based half-open ranges.
/// Empty ranges give the empty determinant 1.
pub fn minor_det<T: Scalar>(
    m: &DenseMatrix<T>,
    rows: Range<usize>,
    cols: Range<usize>,
    method: Method,
) -> Result<T, DetError> {
    if rows.len() != cols.len() {
        return Err(DetError::NonSquare {
            rows: rows.len(),
            cols: cols.len(),
        });
    }
    determinant(&m.submatrix(rows, cols)?, method)
}

#[derive(Debug, Clone)]
pub struct DetOutcome {
    pub value: BigRational,
    /// Present for the condensation method. Layers are over the
    /// denominator-cleared integer matrix.
    pub trace: Option<CondensationTrace<BigInt>>,
    /// Product of the per-row scale factors used to clear denominators.
    pub scale: BigInt,
}

/// Determinant of a rational matrix. Denominators are cleared row by row so
/// every engine runs over the integers.
pub fn rational_det(
    m: &DenseMatrix<BigRational>,
    method: Method,
    config: &CondensationConfig,
) -> Result<DetOutcome, DetError> {
    require_square(m)?;
    let (ints, scale) = m.clear_denominators();
    let (det, trace) = match method {
        Method::Condensation => {
            let (d, t) = condensation_det(&ints, config)?;
            (d, Some(t))
        }
        Method::Bareiss => (bareiss_det(&ints)?, None),
        Method::Leibniz => (leibniz_det(&ints)?, None),
    };
    Ok(DetOutcome {
        value: BigRational::new(det, scale.clone()),
        trace,
        scale,
    })
}

impl From<ScalarError> for DetError {
    fn from(e: ScalarError) -> Self {
        DetError::Inexact(e)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn int(rows: Vec<Vec<i64>>) -> DenseMatrix<BigInt> {
        DenseMatrix::from_rows(rows)
            .unwrap()
            .map(|&v| BigInt::from(v))
    }

    fn fixture() -> DenseMatrix<BigInt> {
        int(vec![vec![1, 2, 3], vec![4, 5, 6], vec![7, 8, 10]])
    }

    #[test]
    fn leibniz_small_cases() {
        assert_eq!(
            leibniz_det(&DenseMatrix::<BigInt>::identity(5)).unwrap(),
            1.into()
        );
        assert_eq!(
            leibniz_det(&int(vec![vec![1, 2], vec![3, 4]])).unwrap(),
            (-2).into()
        );
        assert_eq!(leibniz_det(&fixture()).unwrap(), (-3).into());
        assert!(matches!(
            leibniz_det(&DenseMatrix::<BigInt>::identity(10)),
            Err(DetError::SizeGuard { n: 10, .. })
        ));
    }

    #[test]
    fn bareiss_small_cases() {
        assert_eq!(
            bareiss_det(&DenseMatrix::<BigInt>::identity(20)).unwrap(),
            1.into()
        );
        assert_eq!(bareiss_det(&fixture()).unwrap(), (-3).into());
        let equal_rows = int(vec![vec![1, 2, 3], vec![1, 2, 3], vec![4, 0, 1]]);
        assert_eq!(bareiss_det(&equal_rows).unwrap(), 0.into());
        // pivot swap needed at the first column
        let swap = int(vec![vec![0, 1], vec![1, 0]]);
        assert_eq!(bareiss_det(&swap).unwrap(), (-1).into());
        assert!(matches!(
            bareiss_det(&int(vec![vec![1, 2]])),
            Err(DetError::NonSquare { .. })
        ));
    }

    #[test]
    fn condensation_steps_on_fixture() {
        let m = fixture();
        let ones = DenseMatrix::filled(4, 4, BigInt::from(1));
        let step1 = condensation_step(&m, &ones).unwrap();
        assert_eq!(step1, int(vec![vec![-3, -3], vec![-3, 2]]));
        let step2 = condensation_step(&step1, &m).unwrap();
        assert_eq!(step2, int(vec![vec![-3]]));
    }

    #[test]
    fn condensation_step_reports_zero_divisor() {
        let cur = int(vec![vec![1, 2], vec![3, 4]]);
        let prev = int(vec![vec![1, 1, 1], vec![1, 0, 1], vec![1, 1, 1]]);
        assert_eq!(
            condensation_step(&cur, &prev),
            Err(DetError::ZeroDivisor {
                layer: 0,
                row: 1,
                col: 1
            })
        );
        assert_eq!(condensation_step(&cur, &cur), Err(DetError::LayerShape));
    }

    #[test]
    fn condensation_without_repairs() {
        let (d, trace) = condensation_det(&fixture(), &CondensationConfig::default()).unwrap();
        assert_eq!(d, (-3).into());
        assert!(trace.repairs.is_empty());
        assert!(!trace.fallback_used);
        assert_eq!(trace.layers.len(), 3);
        let one = int(vec![vec![42]]);
        assert_eq!(
            condensation_det(&one, &Default::default()).unwrap().0,
            42.into()
        );
    }

    #[test]
    fn vanishing_central_minor_is_repaired() {
        let m = int(vec![
            vec![2, 3, 1, 5],
            vec![4, 1, 1, 7],
            vec![3, 1, 1, 2],
            vec![6, 2, 9, 1],
        ]);
        let expected = bareiss_det(&m).unwrap();
        let (d, trace) = condensation_det(&m, &CondensationConfig::default()).unwrap();
        assert_eq!(d, expected);
        assert!(!trace.repairs.is_empty() || trace.fallback_used);
    }

    #[test]
    fn zero_retries_fall_back() {
        let zeros = int(vec![vec![0; 4]; 4]);
        let (d, trace) = condensation_det(
            &zeros,
            &CondensationConfig {
                retries: 0,
                seed: 1,
            },
        )
        .unwrap();
        assert_eq!(d, 0.into());
        assert!(trace.fallback_used);
        assert!(trace.repairs.is_empty());
    }

    #[test]
    fn minors() {
        let m = fixture();
        let two = int(vec![vec![1, 2], vec![3, 4]]);
        assert_eq!(
            minor_det(&two, 1..1, 1..1, Method::Bareiss).unwrap(),
            1.into()
        );
        assert_eq!(
            minor_det(&m, 0..2, 0..2, Method::Leibniz).unwrap(),
            (-3).into()
        );
        assert_eq!(
            minor_det(&m, 0..3, 0..3, Method::Condensation).unwrap(),
            bareiss_det(&m).unwrap()
        );
        assert!(minor_det(&m, 0..2, 0..3, Method::Bareiss).is_err());
        assert!(minor_det(&m, 2..4, 0..2, Method::Bareiss).is_err());
    }

    #[test]
    fn rational_matrices() {
        let m = DenseMatrix::parse_text("1/2 1/3\n1 1\n").unwrap();
        for method in [Method::Condensation, Method::Bareiss, Method::Leibniz] {
            let out = rational_det(&m, method, &CondensationConfig::default()).unwrap();
            assert_eq!(out.value, BigRational::new(1.into(), 6.into()));
        }
    }

    #[test]
    fn generic_over_machine_integers() {
        let m =
            DenseMatrix::from_rows(vec![vec![1i64, 2, 3], vec![4, 5, 6], vec![7, 8, 10]]).unwrap();
        assert_eq!(bareiss_det(&m).unwrap(), -3);
        assert_eq!(condensation_det(&m, &Default::default()).unwrap().0, -3);
        assert_eq!(leibniz_det(&m).unwrap(), -3);
    }

    #[test]
    fn trace_json_uses_decimal_strings() {
        let (_, trace) = condensation_det(&fixture(), &Default::default()).unwrap();
        let v = trace.to_json();
        assert_eq!(v["layers"][2], json!([["-3"]]));
        assert_eq!(v["layers"][1][1], json!(["-3", "2"]));
        assert_eq!(v["fallback_used"], json!(false));
    }
}
