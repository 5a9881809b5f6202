//! The weight-preserving map `T: A(n) -> B(n) ∪ C(n)`, its inverse on the
//! image, and the sign-reversing involution `S` on members outside the image.
//!
//! `T` follows the chain that starts at man `n`: his wife, her lover, his
//! wife, and so on, until it reaches woman `1` or woman `n` (neither has a
//! lover). Every marriage on the chain becomes an affair and every affair on
//! it becomes a marriage. Ending at woman `n` lands in class `B`, ending at
//! woman `1` lands in class `C`.
//!
//! The inverse walks the same alternation backwards from the lovers-less
//! woman of the target class (woman `n` for `B`, woman `1` for `C`): her
//! lover, his wife, her lover, and so on. If that walk reaches man `n`, who
//! has no wife in `B` or `C`, the member is in the image ("good"). Otherwise
//! it dead-ends at the other lovers-less woman ("bad"), and toggling that
//! dead-end chain swaps the member into the opposite class with the same
//! cells and the opposite sign, which is `S`.

use std::fmt;
use std::sync::OnceLock;

use serde::Serialize;
use thiserror::Error;

use crate::condensation::{det_poly, minor_det, DenseMatrix, DetError, Method};
use crate::matchings::{
    class_size, class_weight_sum, enumerate_class, pairing_weight, FormalWeight, Pairing,
    PairingClass, PairingError, Permutation,
};
use crate::scalars::{FormalPoly, Scalar};

/// Largest `n` accepted by [`verify_alice_formal`] unless overridden.
pub const DEFAULT_FORMAL_BOUND: u32 = 7;
/// Largest `n` for which [`verify_alice_numeric`] also evaluates the
/// enumerated weight sums.
pub const NUMERIC_ENUM_MAX_N: usize = 5;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum BijectionError {
    #[error("expected a class {expected} pairing, got class {got}")]
    WrongClass {
        expected: &'static str,
        got: PairingClass,
    },
    #[error("pairing is bad: it is not in the image of T")]
    NotInImage,
    #[error("pairing is good: S is only defined on bad members")]
    NotBad,
    #[error("n = {n} outside the supported range 2..={max}")]
    Size { n: u32, max: u32 },
    #[error(transparent)]
    Pairing(#[from] PairingError),
    #[error(transparent)]
    Det(#[from] DetError),
    /// A broken internal invariant (chain revisit, invalid toggle result).
    #[error("internal consistency failure: {0}")]
    Internal(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Direction {
    Forward,
    Reverse,
}

/// An alternating man/woman walk.
///
/// Forward chains list `m_1 = n, ..., m_r` and `w_1, ..., w_r` with
/// `w_i = wife(m_i)` and `m_{i+1} = lover(w_i)`; `terminal` is `w_r`.
/// Reverse chains list the women in walk order starting from the class's
/// lovers-less woman, and `men[i]` is the lover of `women[i]`. `terminal`
/// is the starting woman, i.e. where the matching forward chain ended.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Chain {
    pub men: Vec<u32>,
    pub women: Vec<u32>,
    pub terminal: u32,
    pub direction: Direction,
}

impl Chain {
    pub fn len(&self) -> usize {
        self.men.len()
    }

    pub fn is_empty(&self) -> bool {
        self.men.is_empty()
    }
}

impl fmt::Display for Chain {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "men {:?} women {:?} terminal {}",
            self.men, self.women, self.terminal
        )
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Classification {
    Good(Chain),
    Bad(Chain),
}

impl Classification {
    pub fn is_good(&self) -> bool {
        matches!(self, Classification::Good(_))
    }

    pub fn chain(&self) -> &Chain {
        match self {
            Classification::Good(c) | Classification::Bad(c) => c,
        }
    }
}

fn revisit(who: &str, idx: u32) -> BijectionError {
    BijectionError::Internal(format!("chain revisits {who} {idx}"))
}

pub fn chain_forward(p: &Pairing) -> Result<Chain, BijectionError> {
    if p.class() != PairingClass::A {
        return Err(BijectionError::WrongClass {
            expected: "A",
            got: p.class(),
        });
    }
    let n = p.n();
    let mut men = vec![n];
    let mut women = Vec::new();
    let mut man = n;
    loop {
        let wife = p
            .wife(man)
            .ok_or_else(|| BijectionError::Internal(format!("man {man} has no wife")))?;
        if women.contains(&wife) {
            return Err(revisit("woman", wife));
        }
        women.push(wife);
        if wife == 1 || wife == n {
            return Ok(Chain {
                men,
                women,
                terminal: wife,
                direction: Direction::Forward,
            });
        }
        let lover = p
            .lover(wife)
            .ok_or_else(|| BijectionError::Internal(format!("woman {wife} has no lover")))?;
        if men.contains(&lover) {
            return Err(revisit("man", lover));
        }
        men.push(lover);
        man = lover;
    }
}

fn require_b_or_c(p: &Pairing) -> Result<(), BijectionError> {
    match p.class() {
        PairingClass::B | PairingClass::C => Ok(()),
        got => Err(BijectionError::WrongClass {
            expected: "B or C",
            got,
        }),
    }
}

pub fn classify(p: &Pairing) -> Result<Classification, BijectionError> {
    require_b_or_c(p)?;
    let n = p.n();
    let (start, dead_end) = match p.class() {
        PairingClass::B => (n, 1),
        _ => (1, n),
    };
    let mut men = Vec::new();
    let mut women = vec![start];
    let mut woman = start;
    loop {
        let Some(lover) = p.lover(woman) else {
            if woman != dead_end {
                return Err(BijectionError::Internal(format!(
                    "reverse chain stopped at woman {woman}"
                )));
            }
            return Ok(Classification::Bad(Chain {
                men,
                women,
                terminal: start,
                direction: Direction::Reverse,
            }));
        };
        if men.contains(&lover) {
            return Err(revisit("man", lover));
        }
        men.push(lover);
        if lover == n {
            return Ok(Classification::Good(Chain {
                men,
                women,
                terminal: start,
                direction: Direction::Reverse,
            }));
        }
        let wife = p
            .wife(lover)
            .ok_or_else(|| BijectionError::Internal(format!("man {lover} has no wife")))?;
        if women.contains(&wife) {
            return Err(revisit("woman", wife));
        }
        women.push(wife);
        woman = wife;
    }
}

fn rebuild(
    p: &Pairing,
    class: PairingClass,
    marriages: Permutation,
    affairs: Permutation,
) -> Result<Pairing, BijectionError> {
    Pairing::from_parts(p.n(), class, marriages, affairs)
        .map_err(|e| BijectionError::Internal(format!("toggle produced an invalid pairing: {e}")))
}

/// Applies `T`, returning the image and the chain that was toggled.
pub fn map_t(p: &Pairing) -> Result<(Pairing, Chain), BijectionError> {
    let chain = chain_forward(p)?;
    let mut marriages = p.marriages().clone();
    let mut affairs = p.affairs().clone();
    for (i, (&man, &woman)) in chain.men.iter().zip(&chain.women).enumerate() {
        affairs.insert(man, woman);
        if i == 0 {
            marriages.remove(man);
        } else {
            marriages.insert(man, chain.women[i - 1]);
        }
    }
    let class = if chain.terminal == 1 {
        PairingClass::C
    } else {
        PairingClass::B
    };
    Ok((rebuild(p, class, marriages, affairs)?, chain))
}

/// Toggles a reverse chain: each listed man marries the woman he was the
/// lover of, and becomes the lover of his former wife (if he had one).
fn toggle_reverse(
    p: &Pairing,
    chain: &Chain,
    class: PairingClass,
) -> Result<Pairing, BijectionError> {
    let mut marriages = p.marriages().clone();
    let mut affairs = p.affairs().clone();
    for (j, &man) in chain.men.iter().enumerate() {
        marriages.insert(man, chain.women[j]);
        match chain.women.get(j + 1) {
            Some(&former_wife) => affairs.insert(man, former_wife),
            None => {
                affairs.remove(man);
            }
        }
    }
    rebuild(p, class, marriages, affairs)
}

/// Inverse of `T` on good members of `B(n) ∪ C(n)`.
pub fn map_t_inverse(p: &Pairing) -> Result<(Pairing, Chain), BijectionError> {
    match classify(p)? {
        Classification::Good(chain) => Ok((toggle_reverse(p, &chain, PairingClass::A)?, chain)),
        Classification::Bad(_) => Err(BijectionError::NotInImage),
    }
}

/// The involution `S` on bad members, swapping classes `B` and `C`.
pub fn map_s(p: &Pairing) -> Result<(Pairing, Chain), BijectionError> {
    match classify(p)? {
        Classification::Bad(chain) => {
            let target = match p.class() {
                PairingClass::B => PairingClass::C,
                _ => PairingClass::B,
            };
            Ok((toggle_reverse(p, &chain, target)?, chain))
        }
        Classification::Good(_) => Err(BijectionError::NotBad),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MapOp {
    T,
    TInverse,
    S,
}

impl std::str::FromStr for MapOp {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "T" => Ok(MapOp::T),
            "Tinv" => Ok(MapOp::TInverse),
            "S" => Ok(MapOp::S),
            other => Err(format!("unknown map {other:?}, expected T, Tinv or S")),
        }
    }
}

/// Record of one map application, serialised as the trace JSON.
#[derive(Debug, Clone, Serialize)]
pub struct MapTrace {
    pub input: Pairing,
    pub chain: Chain,
    pub output: Pairing,
    pub weight_in: FormalWeight,
    pub weight_out: FormalWeight,
}

impl MapOp {
    pub fn apply(self, p: &Pairing) -> Result<MapTrace, BijectionError> {
        let (output, chain) = match self {
            MapOp::T => map_t(p)?,
            MapOp::TInverse => map_t_inverse(p)?,
            MapOp::S => map_s(p)?,
        };
        Ok(MapTrace {
            weight_in: pairing_weight(p),
            weight_out: pairing_weight(&output),
            input: p.clone(),
            chain,
            output,
        })
    }
}

fn range(a: u32, b: u32) -> Vec<u32> {
    (a..=b).collect()
}

/// Both sides of the identity as products of symbolic determinants.
pub fn alice_sides_det(n: u32) -> Result<(FormalPoly, FormalPoly), BijectionError> {
    let lhs =
        det_poly(&range(1, n), &range(1, n))?.mul(&det_poly(&range(2, n - 1), &range(2, n - 1))?);
    let nw_se =
        det_poly(&range(1, n - 1), &range(1, n - 1))?.mul(&det_poly(&range(2, n), &range(2, n))?);
    let ne_sw =
        det_poly(&range(1, n - 1), &range(2, n))?.mul(&det_poly(&range(2, n), &range(1, n - 1))?);
    Ok((lhs, &nw_se - &ne_sw))
}

/// Both sides of the identity as weight sums over `A(n)` and `B(n) ∪ C(n)`.
pub fn alice_sides_enum(n: u32) -> Result<(FormalPoly, FormalPoly), BijectionError> {
    let lhs = class_weight_sum(n, PairingClass::A)?;
    let rhs = &class_weight_sum(n, PairingClass::B)? + &class_weight_sum(n, PairingClass::C)?;
    Ok((lhs, rhs))
}

pub fn count_bad(n: u32, class: PairingClass) -> Result<usize, BijectionError> {
    let mut bad = 0;
    for p in enumerate_class(n, class)? {
        if !classify(&p)?.is_good() {
            bad += 1;
        }
    }
    Ok(bad)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct AliceFormalReport {
    pub n: u32,
    pub size_a: u128,
    pub size_b: u128,
    pub size_c: u128,
    pub bad_b: usize,
    pub bad_c: usize,
    pub lhs_terms: usize,
    pub rhs_terms: usize,
    /// Enumerated weight sum equals the determinant product, left side.
    pub lhs_routes_agree: bool,
    /// Same for the right side.
    pub rhs_routes_agree: bool,
    pub passed: bool,
}

impl fmt::Display for AliceFormalReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "n={} |A|={} |B|={} |C|={} bad={}+{} lhs_terms={} rhs_terms={} {}",
            self.n,
            self.size_a,
            self.size_b,
            self.size_c,
            self.bad_b,
            self.bad_c,
            self.lhs_terms,
            self.rhs_terms,
            if self.passed { "PASS" } else { "FAIL" }
        )
    }
}

/// Checks the identity as an exact polynomial equality, by enumeration and
/// by symbolic determinants, and counts bad members of each class.
pub fn verify_alice_formal(n: u32, max_n: u32) -> Result<AliceFormalReport, BijectionError> {
    if n < 2 || n > max_n {
        return Err(BijectionError::Size { n, max: max_n });
    }
    let (lhs_enum, rhs_enum) = alice_sides_enum(n)?;
    let (lhs_det, rhs_det) = alice_sides_det(n)?;
    let lhs_routes_agree = lhs_enum == lhs_det;
    let rhs_routes_agree = rhs_enum == rhs_det;
    Ok(AliceFormalReport {
        n,
        size_a: class_size(n, PairingClass::A),
        size_b: class_size(n, PairingClass::B),
        size_c: class_size(n, PairingClass::C),
        bad_b: count_bad(n, PairingClass::B)?,
        bad_c: count_bad(n, PairingClass::C)?,
        lhs_terms: lhs_enum.num_terms(),
        rhs_terms: rhs_enum.num_terms(),
        lhs_routes_agree,
        rhs_routes_agree,
        passed: lhs_routes_agree && rhs_routes_agree && lhs_det == rhs_det && lhs_enum == rhs_enum,
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct AliceNumericReport<T> {
    pub lhs: T,
    pub rhs: T,
    /// Enumerated weight sums evaluated at the matrix, for small `n`.
    pub enumerated: Option<(T, T)>,
    pub passed: bool,
}

fn enumerated_sides(n: usize) -> &'static (FormalPoly, FormalPoly) {
    static CACHE: OnceLock<Vec<(FormalPoly, FormalPoly)>> = OnceLock::new();
    let sides = CACHE.get_or_init(|| {
        (2..=NUMERIC_ENUM_MAX_N as u32)
            .map(|k| alice_sides_enum(k).expect("small n enumerates"))
            .collect()
    });
    &sides[n - 2]
}

/// Evaluates both sides of the identity at a concrete matrix with the
/// Bareiss oracle and, for `n <= 5`, the enumerated weight sums too.
pub fn verify_alice_numeric<T: Scalar>(
    m: &DenseMatrix<T>,
) -> Result<AliceNumericReport<T>, BijectionError> {
    if !m.is_square() {
        return Err(DetError::NonSquare {
            rows: m.rows(),
            cols: m.cols(),
        }
        .into());
    }
    let n = m.rows();
    if n < 2 {
        return Err(BijectionError::Size {
            n: n as u32,
            max: u32::MAX,
        });
    }
    let det =
        |r: std::ops::Range<usize>, c: std::ops::Range<usize>| minor_det(m, r, c, Method::Bareiss);
    let lhs = det(0..n, 0..n)? * det(1..n - 1, 1..n - 1)?;
    let rhs =
        det(0..n - 1, 0..n - 1)? * det(1..n, 1..n)? - det(0..n - 1, 1..n)? * det(1..n, 0..n - 1)?;
    let mut passed = lhs == rhs;
    let enumerated = if n <= NUMERIC_ENUM_MAX_N {
        let (lp, rp) = enumerated_sides(n);
        let le = lp.eval(m).map_err(DetError::from)?;
        let re = rp.eval(m).map_err(DetError::from)?;
        passed &= le == lhs && re == rhs;
        Some((le, re))
    } else {
        None
    };
    Ok(AliceNumericReport {
        lhs,
        rhs,
        enumerated,
        passed,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_bigint::BigInt;

    fn a3(pi: &[(u32, u32)]) -> Pairing {
        Pairing::new(3, PairingClass::A, pi, &[(2, 2)]).unwrap()
    }

    #[test]
    fn forward_chains() {
        let c = chain_forward(&a3(&[(1, 2), (2, 3), (3, 1)])).unwrap();
        assert_eq!(
            (c.men.clone(), c.women.clone(), c.terminal),
            (vec![3], vec![1], 1)
        );
        let c = chain_forward(&a3(&[(1, 1), (2, 2), (3, 3)])).unwrap();
        assert_eq!(
            (c.men.clone(), c.women.clone(), c.terminal),
            (vec![3], vec![3], 3)
        );
        let c = chain_forward(&a3(&[(1, 1), (2, 3), (3, 2)])).unwrap();
        assert_eq!(
            (c.men.clone(), c.women.clone(), c.terminal),
            (vec![3, 2], vec![2, 3], 3)
        );
        let b = Pairing::new(3, PairingClass::B, &[(1, 1), (2, 2)], &[(2, 2), (3, 3)]).unwrap();
        assert!(matches!(
            chain_forward(&b),
            Err(BijectionError::WrongClass { .. })
        ));
    }

    #[test]
    fn t_images() {
        let (out, _) = map_t(&a3(&[(1, 2), (2, 3), (3, 1)])).unwrap();
        assert_eq!(
            out,
            Pairing::new(3, PairingClass::C, &[(1, 2), (2, 3)], &[(2, 2), (3, 1)]).unwrap()
        );
        let (out, _) = map_t(&a3(&[(1, 1), (2, 2), (3, 3)])).unwrap();
        assert_eq!(
            out,
            Pairing::new(3, PairingClass::B, &[(1, 1), (2, 2)], &[(2, 2), (3, 3)]).unwrap()
        );
        let (out, _) = map_t(&a3(&[(1, 1), (2, 3), (3, 2)])).unwrap();
        assert_eq!(
            out,
            Pairing::new(3, PairingClass::B, &[(1, 1), (2, 2)], &[(2, 3), (3, 2)]).unwrap()
        );
    }

    #[test]
    fn classification() {
        let good = Pairing::new(3, PairingClass::B, &[(1, 1), (2, 2)], &[(2, 2), (3, 3)]).unwrap();
        assert!(classify(&good).unwrap().is_good());
        let bad_b = Pairing::new(3, PairingClass::B, &[(1, 2), (2, 1)], &[(2, 3), (3, 2)]).unwrap();
        let Classification::Bad(chain) = classify(&bad_b).unwrap() else {
            panic!()
        };
        assert_eq!((chain.women, chain.men), (vec![3, 1], vec![2]));
        let bad_c = Pairing::new(3, PairingClass::C, &[(1, 2), (2, 3)], &[(2, 1), (3, 2)]).unwrap();
        assert!(!classify(&bad_c).unwrap().is_good());
        assert!(matches!(
            classify(&a3(&[(1, 1), (2, 2), (3, 3)])),
            Err(BijectionError::WrongClass { .. })
        ));
    }

    #[test]
    fn inverse_and_s() {
        let good_b =
            Pairing::new(3, PairingClass::B, &[(1, 1), (2, 2)], &[(2, 2), (3, 3)]).unwrap();
        assert_eq!(
            map_t_inverse(&good_b).unwrap().0,
            a3(&[(1, 1), (2, 2), (3, 3)])
        );
        let good_c =
            Pairing::new(3, PairingClass::C, &[(1, 2), (2, 3)], &[(2, 2), (3, 1)]).unwrap();
        assert_eq!(
            map_t_inverse(&good_c).unwrap().0,
            a3(&[(1, 2), (2, 3), (3, 1)])
        );

        let bad_b = Pairing::new(3, PairingClass::B, &[(1, 2), (2, 1)], &[(2, 3), (3, 2)]).unwrap();
        let bad_c = Pairing::new(3, PairingClass::C, &[(1, 2), (2, 3)], &[(2, 1), (3, 2)]).unwrap();
        assert_eq!(map_t_inverse(&bad_b), Err(BijectionError::NotInImage));
        assert_eq!(map_s(&bad_b).unwrap().0, bad_c);
        assert_eq!(map_s(&bad_c).unwrap().0, bad_b);
        assert_eq!(map_s(&good_b), Err(BijectionError::NotBad));

        let (wb, wc) = (pairing_weight(&bad_b), pairing_weight(&bad_c));
        assert_eq!(wb.cells, wc.cells);
        assert_eq!(wb.sign, -wc.sign);
        assert!((&wb.to_poly() + &wc.to_poly()).is_zero());
    }

    #[test]
    fn wife_equal_to_mistress_still_toggles() {
        // man 2 has woman 2 as wife and mistress
        let p = Pairing::new(
            4,
            PairingClass::A,
            &[(1, 3), (2, 2), (3, 1), (4, 4)],
            &[(2, 2), (3, 3)],
        )
        .unwrap();
        let (out, chain) = map_t(&p).unwrap();
        assert_eq!(chain.men, vec![4]);
        assert_eq!(pairing_weight(&out), pairing_weight(&p));
        assert_eq!(map_t_inverse(&out).unwrap().0, p);

        let p = Pairing::new(
            4,
            PairingClass::A,
            &[(1, 4), (2, 2), (3, 3), (4, 1)],
            &[(2, 2), (3, 3)],
        )
        .unwrap();
        let (out, chain) = map_t(&p).unwrap();
        assert_eq!(chain.terminal, 1);
        assert_eq!(out.class(), PairingClass::C);
        assert_eq!(pairing_weight(&out), pairing_weight(&p));

        // chain of length two passing a couple that overlaps elsewhere
        let p = Pairing::new(
            4,
            PairingClass::A,
            &[(1, 1), (2, 2), (3, 4), (4, 3)],
            &[(2, 2), (3, 3)],
        )
        .unwrap();
        let (out, chain) = map_t(&p).unwrap();
        assert_eq!(
            (chain.men.clone(), chain.women.clone()),
            (vec![4, 3], vec![3, 4])
        );
        assert_eq!(out.class(), PairingClass::B);
        assert_eq!(pairing_weight(&out), pairing_weight(&p));
        assert_eq!(map_t_inverse(&out).unwrap().0, p);
    }

    #[test]
    fn formal_small() {
        let r2 = verify_alice_formal(2, DEFAULT_FORMAL_BOUND).unwrap();
        assert!(r2.passed);
        assert_eq!((r2.bad_b, r2.bad_c), (0, 0));
        let r3 = verify_alice_formal(3, DEFAULT_FORMAL_BOUND).unwrap();
        assert!(r3.passed);
        assert_eq!(
            (r3.size_a, r3.size_b, r3.size_c, r3.bad_b, r3.bad_c),
            (6, 4, 4, 1, 1)
        );
        let r4 = verify_alice_formal(4, DEFAULT_FORMAL_BOUND).unwrap();
        assert!(r4.passed);
        assert_eq!((r4.bad_b, r4.bad_c), (12, 12));
        assert!(matches!(
            verify_alice_formal(1, 7),
            Err(BijectionError::Size { .. })
        ));
        assert!(matches!(
            verify_alice_formal(8, 7),
            Err(BijectionError::Size { .. })
        ));
    }

    #[test]
    fn numeric_fixture() {
        let m = DenseMatrix::from_rows(vec![vec![1, 2, 3], vec![4, 5, 6], vec![7, 8, 10]])
            .unwrap()
            .map(|&v: &i64| BigInt::from(v));
        let r = verify_alice_numeric(&m).unwrap();
        assert_eq!(r.lhs, BigInt::from(-15));
        assert_eq!(r.rhs, BigInt::from(-15));
        assert_eq!(r.enumerated, Some((BigInt::from(-15), BigInt::from(-15))));
        assert!(r.passed);

        let id = DenseMatrix::<BigInt>::identity(4);
        let r = verify_alice_numeric(&id).unwrap();
        assert!(r.passed && r.lhs == BigInt::from(1));

        let twin = DenseMatrix::from_rows(vec![vec![1, 2, 3], vec![1, 2, 3], vec![5, 0, 4]])
            .unwrap()
            .map(|&v: &i64| BigInt::from(v));
        let r = verify_alice_numeric(&twin).unwrap();
        assert!(r.passed && r.lhs == BigInt::from(0));

        assert!(verify_alice_numeric(&DenseMatrix::<BigInt>::identity(1)).is_err());
    }
}
