//! Signed perfect matchings and the three pairing classes.
//!
//! A pairing couples a matching of men to wives (the marriages) with a
//! matching of men to mistresses (the affairs). Class `A` pairs a full
//! `n`-matching with one on the interior `{2..n-1}`, class `B` pairs the
//! north-west and south-east corner blocks, and class `C` the north-east and
//! south-west blocks. All indices are 1-based.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Mul, Neg, RangeInclusive};

use itertools::Itertools;
use num_bigint::BigInt;
use serde::{Deserialize, Serialize, Serializer};
use thiserror::Error;

use crate::scalars::{Cell, FormalPoly, Monomial};

/// `true` when `seq` has an odd number of inversions.
pub fn inversion_parity<T: Ord>(seq: &[T]) -> bool {
    let mut odd = false;
    for i in 0..seq.len() {
        for j in i + 1..seq.len() {
            if seq[i] > seq[j] {
                odd = !odd;
            }
        }
    }
    odd
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Sign {
    Plus,
    Minus,
}

impl Sign {
    pub fn from_parity(odd: bool) -> Self {
        if odd {
            Sign::Minus
        } else {
            Sign::Plus
        }
    }

    pub fn as_i32(self) -> i32 {
        match self {
            Sign::Plus => 1,
            Sign::Minus => -1,
        }
    }
}

impl Mul for Sign {
    type Output = Sign;
    fn mul(self, rhs: Sign) -> Sign {
        Sign::from_parity(self != rhs)
    }
}

impl Neg for Sign {
    type Output = Sign;
    fn neg(self) -> Sign {
        self * Sign::Minus
    }
}

impl fmt::Display for Sign {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Sign::Plus => "+",
            Sign::Minus => "-",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PairingError {
    #[error("n must be >= 2, got {0}")]
    Size(u32),
    #[error("invalid pairing: {}", .0.join("; "))]
    Invalid(Vec<String>),
}

/// A bijection between two finite sets of indices.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Permutation {
    map: BTreeMap<u32, u32>,
}

impl Permutation {
    /// Fails when two sources share a target or a source repeats.
    pub fn from_pairs(pairs: impl IntoIterator<Item = (u32, u32)>) -> Option<Self> {
        let mut map = BTreeMap::new();
        for (a, b) in pairs {
            if map.insert(a, b).is_some() {
                return None;
            }
        }
        let p = Permutation { map };
        p.is_injective().then_some(p)
    }

    fn is_injective(&self) -> bool {
        self.map.values().all_unique()
    }

    pub fn len(&self) -> usize {
        self.map.len()
    }

    pub fn is_empty(&self) -> bool {
        self.map.is_empty()
    }

    pub fn domain(&self) -> Vec<u32> {
        self.map.keys().copied().collect()
    }

    pub fn codomain(&self) -> Vec<u32> {
        let mut v: Vec<u32> = self.map.values().copied().collect();
        v.sort_unstable();
        v
    }

    pub fn image(&self, x: u32) -> Option<u32> {
        self.map.get(&x).copied()
    }

    pub fn preimage(&self, y: u32) -> Option<u32> {
        self.map.iter().find(|(_, &v)| v == y).map(|(&k, _)| k)
    }

    pub fn pairs(&self) -> impl Iterator<Item = (u32, u32)> + '_ {
        self.map.iter().map(|(&a, &b)| (a, b))
    }

    pub fn as_map(&self) -> &BTreeMap<u32, u32> {
        &self.map
    }

    /// Parity of the order-isomorphic relabeling of both sides to `{1..k}`.
    /// Since the domain is iterated in increasing order, this is the parity
    /// of the image sequence.
    pub fn sign(&self) -> Sign {
        let images: Vec<u32> = self.map.values().copied().collect();
        Sign::from_parity(inversion_parity(&images))
    }

    /// `self ∘ other`, defined when `other`'s codomain is `self`'s domain.
    pub fn compose(&self, other: &Permutation) -> Option<Permutation> {
        let map = other
            .map
            .iter()
            .map(|(&a, b)| self.map.get(b).map(|&c| (a, c)))
            .collect::<Option<BTreeMap<_, _>>>()?;
        Some(Permutation { map })
    }

    pub(crate) fn remove(&mut self, x: u32) -> Option<u32> {
        self.map.remove(&x)
    }

    pub(crate) fn insert(&mut self, x: u32, y: u32) {
        self.map.insert(x, y);
    }
}

impl fmt::Display for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        for (k, (a, b)) in self.pairs().enumerate() {
            if k > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{a}->{b}")?;
        }
        f.write_str("}")
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum PairingClass {
    A,
    B,
    C,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Span {
    Full,
    Interior,
    DropLast,
    DropFirst,
}

impl Span {
    fn range(self, n: u32) -> RangeInclusive<u32> {
        match self {
            Span::Full => 1..=n,
            Span::Interior => 2..=n - 1,
            Span::DropLast => 1..=n - 1,
            Span::DropFirst => 2..=n,
        }
    }

    fn label(self) -> &'static str {
        match self {
            Span::Full => "{1..n}",
            Span::Interior => "{2..n-1}",
            Span::DropLast => "{1..n-1}",
            Span::DropFirst => "{2..n}",
        }
    }
}

/// Required (domain, codomain) of marriages then affairs.
fn class_spans(class: PairingClass) -> [(Span, Span); 2] {
    match class {
        PairingClass::A => [(Span::Full, Span::Full), (Span::Interior, Span::Interior)],
        PairingClass::B => [
            (Span::DropLast, Span::DropLast),
            (Span::DropFirst, Span::DropFirst),
        ],
        PairingClass::C => [
            (Span::DropLast, Span::DropFirst),
            (Span::DropFirst, Span::DropLast),
        ],
    }
}

impl PairingClass {
    /// Index sets `(marriage domain, marriage codomain, affair domain, affair codomain)`.
    pub fn index_sets(self, n: u32) -> [Vec<u32>; 4] {
        let [(md, mc), (ad, ac)] = class_spans(self);
        [md, mc, ad, ac].map(|s| s.range(n).collect())
    }
}

impl fmt::Display for PairingClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self:?}")
    }
}

/// Wire form of a pairing: `{"n", "class", "marriages": {man: woman}, "affairs": {...}}`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RawPairing {
    pub n: u32,
    pub class: PairingClass,
    pub marriages: BTreeMap<u32, u32>,
    pub affairs: BTreeMap<u32, u32>,
}

/// A validated `[marriages, affairs]` pair of a known class.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Deserialize)]
#[serde(try_from = "RawPairing")]
pub struct Pairing {
    n: u32,
    class: PairingClass,
    marriages: Permutation,
    affairs: Permutation,
}

impl Pairing {
    pub fn new(
        n: u32,
        class: PairingClass,
        marriages: &[(u32, u32)],
        affairs: &[(u32, u32)],
    ) -> Result<Pairing, PairingError> {
        let mut violations = Vec::new();
        let mut collect = |pairs: &[(u32, u32)], what: &str| {
            let mut map = BTreeMap::new();
            for &(a, b) in pairs {
                if map.insert(a, b).is_some() {
                    violations.push(format!("{what}: man {a} listed twice"));
                }
            }
            map
        };
        let raw = RawPairing {
            n,
            class,
            marriages: collect(marriages, "marriages"),
            affairs: collect(affairs, "affairs"),
        };
        if !violations.is_empty() {
            return Err(PairingError::Invalid(violations));
        }
        validate_pairing(&raw)
    }

    pub(crate) fn from_parts(
        n: u32,
        class: PairingClass,
        marriages: Permutation,
        affairs: Permutation,
    ) -> Result<Pairing, PairingError> {
        validate_pairing(&RawPairing {
            n,
            class,
            marriages: marriages.map,
            affairs: affairs.map,
        })
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn class(&self) -> PairingClass {
        self.class
    }

    pub fn marriages(&self) -> &Permutation {
        &self.marriages
    }

    pub fn affairs(&self) -> &Permutation {
        &self.affairs
    }

    pub fn wife(&self, man: u32) -> Option<u32> {
        self.marriages.image(man)
    }

    pub fn husband(&self, woman: u32) -> Option<u32> {
        self.marriages.preimage(woman)
    }

    pub fn mistress(&self, man: u32) -> Option<u32> {
        self.affairs.image(man)
    }

    pub fn lover(&self, woman: u32) -> Option<u32> {
        self.affairs.preimage(woman)
    }

    pub fn to_raw(&self) -> RawPairing {
        RawPairing {
            n: self.n,
            class: self.class,
            marriages: self.marriages.map.clone(),
            affairs: self.affairs.map.clone(),
        }
    }

    pub fn weight(&self) -> FormalWeight {
        pairing_weight(self)
    }
}

impl fmt::Display for Pairing {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{}({}) pi={} sigma={}",
            self.class, self.n, self.marriages, self.affairs
        )
    }
}

impl TryFrom<RawPairing> for Pairing {
    type Error = PairingError;
    fn try_from(raw: RawPairing) -> Result<Self, PairingError> {
        validate_pairing(&raw)
    }
}

impl Serialize for Pairing {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        self.to_raw().serialize(s)
    }
}

/// Checks class index sets and injectivity, collecting every violation.
pub fn validate_pairing(raw: &RawPairing) -> Result<Pairing, PairingError> {
    if raw.n < 2 {
        return Err(PairingError::Size(raw.n));
    }
    let n = raw.n;
    let mut violations = Vec::new();
    let [(md, mc), (ad, ac)] = class_spans(raw.class);
    for (what, map, dom, cod) in [
        ("marriage", &raw.marriages, md, mc),
        ("affair", &raw.affairs, ad, ac),
    ] {
        if !map.keys().copied().eq(dom.range(n)) {
            violations.push(format!("{what} domain must be {}", dom.label()));
        }
        let mut images: Vec<u32> = map.values().copied().collect();
        images.sort_unstable();
        if !images.iter().all_unique() {
            violations.push(format!("{what}s not injective"));
        }
        if !images.iter().copied().eq(cod.range(n)) {
            violations.push(format!("{what} codomain must be {}", cod.label()));
        }
    }
    if !violations.is_empty() {
        return Err(PairingError::Invalid(violations));
    }
    Ok(Pairing {
        n,
        class: raw.class,
        marriages: Permutation {
            map: raw.marriages.clone(),
        },
        affairs: Permutation {
            map: raw.affairs.clone(),
        },
    })
}

/// Signed cell monomial of a pairing.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FormalWeight {
    pub sign: Sign,
    pub cells: Monomial,
}

impl FormalWeight {
    pub fn to_poly(&self) -> FormalPoly {
        FormalPoly::monomial(self.cells.clone(), BigInt::from(self.sign.as_i32()))
    }
}

impl Neg for FormalWeight {
    type Output = FormalWeight;
    fn neg(self) -> FormalWeight {
        FormalWeight {
            sign: -self.sign,
            cells: self.cells,
        }
    }
}

impl fmt::Display for FormalWeight {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}{}", self.sign, self.cells)
    }
}

impl Serialize for FormalWeight {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        #[derive(Serialize)]
        struct Repr {
            sign: i32,
            cells: Vec<[u32; 2]>,
        }
        Repr {
            sign: self.sign.as_i32(),
            cells: self.cells.cells().iter().map(|c| [c.row, c.col]).collect(),
        }
        .serialize(s)
    }
}

/// `sign(pi) * sign(sigma)` times the union of marriage and affair cells,
/// negated once more for class `C`.
pub fn pairing_weight(p: &Pairing) -> FormalWeight {
    let mut sign = p.marriages.sign() * p.affairs.sign();
    if p.class == PairingClass::C {
        sign = -sign;
    }
    let cells = Monomial::from_cells(
        p.marriages
            .pairs()
            .chain(p.affairs.pairs())
            .map(|(i, j)| Cell::new(i, j)),
    );
    FormalWeight { sign, cells }
}

fn matchings(domain: Vec<u32>, codomain: Vec<u32>) -> Vec<Permutation> {
    let k = codomain.len();
    codomain
        .into_iter()
        .permutations(k)
        .map(|images| Permutation {
            map: domain.iter().copied().zip(images).collect(),
        })
        .collect()
}

/// Every pairing of the class, lexicographic by marriage images then affair
/// images.
pub fn enumerate_class(
    n: u32,
    class: PairingClass,
) -> Result<impl Iterator<Item = Pairing>, PairingError> {
    if n < 2 {
        return Err(PairingError::Size(n));
    }
    let [md, mc, ad, ac] = class.index_sets(n);
    let affairs = matchings(ad, ac);
    let marriages = matchings(md, mc);
    Ok(marriages.into_iter().flat_map(move |pi| {
        affairs.clone().into_iter().map(move |sigma| Pairing {
            n,
            class,
            marriages: pi.clone(),
            affairs: sigma,
        })
    }))
}

/// Size of a class, by formula.
pub fn class_size(n: u32, class: PairingClass) -> u128 {
    let fact = |k: u32| (1..=k as u128).product::<u128>();
    match class {
        PairingClass::A => fact(n) * fact(n - 2),
        PairingClass::B | PairingClass::C => fact(n - 1) * fact(n - 1),
    }
}

/// Sum of the formal weights of every member of the class.
pub fn class_weight_sum(n: u32, class: PairingClass) -> Result<FormalPoly, PairingError> {
    let mut total = FormalPoly::zero();
    for p in enumerate_class(n, class)? {
        let w = pairing_weight(&p);
        total.add_term(w.cells, BigInt::from(w.sign.as_i32()));
    }
    Ok(total)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn perm(pairs: &[(u32, u32)]) -> Permutation {
        Permutation::from_pairs(pairs.iter().copied()).unwrap()
    }

    #[test]
    fn signs() {
        assert_eq!(perm(&[(1, 1), (2, 2), (3, 3)]).sign(), Sign::Plus);
        assert_eq!(Permutation::default().sign(), Sign::Plus);
        assert_eq!(perm(&[(1, 3), (2, 2)]).sign(), Sign::Minus);
        assert_eq!(perm(&[(1, 2), (2, 3), (3, 1)]).sign(), Sign::Plus);
    }

    #[test]
    fn class_counts() {
        assert_eq!(enumerate_class(3, PairingClass::A).unwrap().count(), 6);
        assert_eq!(enumerate_class(3, PairingClass::B).unwrap().count(), 4);
        let a2: Vec<_> = enumerate_class(2, PairingClass::A).unwrap().collect();
        assert_eq!(a2.len(), 2);
        assert!(a2.iter().all(|p| p.affairs().is_empty()));
        assert!(matches!(
            enumerate_class(1, PairingClass::A),
            Err(PairingError::Size(1))
        ));
    }

    #[test]
    fn enumeration_order_is_lexicographic() {
        let all: Vec<_> = enumerate_class(4, PairingClass::C).unwrap().collect();
        let keys: Vec<_> = all
            .iter()
            .map(|p| {
                (
                    p.marriages().as_map().values().copied().collect::<Vec<_>>(),
                    p.affairs().as_map().values().copied().collect::<Vec<_>>(),
                )
            })
            .collect();
        assert!(keys.windows(2).all(|w| w[0] < w[1]));
    }

    #[test]
    fn weights() {
        let p = Pairing::new(3, PairingClass::A, &[(1, 1), (2, 2), (3, 3)], &[(2, 2)]).unwrap();
        let w = pairing_weight(&p);
        assert_eq!(w.sign, Sign::Plus);
        assert_eq!(w.cells.degree(), 4);
        assert_eq!(w.cells.multiplicity(Cell::new(2, 2)), 2);

        let c = Pairing::new(3, PairingClass::C, &[(1, 2), (2, 3)], &[(2, 1), (3, 2)]).unwrap();
        let w = pairing_weight(&c);
        assert_eq!(w.sign, Sign::Minus);
        assert_eq!(
            w.cells,
            Monomial::from_cells([(1, 2), (2, 3), (2, 1), (3, 2)].map(|(r, c)| Cell::new(r, c)))
        );

        let b = Pairing::new(2, PairingClass::B, &[(1, 1)], &[(2, 2)]).unwrap();
        assert_eq!(pairing_weight(&b).sign, Sign::Plus);
        assert_eq!(pairing_weight(&b).cells.degree(), 2);
    }

    #[test]
    fn validation_messages() {
        let err =
            Pairing::new(3, PairingClass::A, &[(1, 1), (2, 2), (3, 3)], &[(2, 3)]).unwrap_err();
        let PairingError::Invalid(v) = err else {
            panic!()
        };
        assert!(v.contains(&"affair codomain must be {2..n-1}".to_string()));

        assert!(Pairing::new(3, PairingClass::B, &[(1, 2), (2, 1)], &[(2, 3), (3, 2)]).is_ok());

        let err = Pairing::new(
            4,
            PairingClass::C,
            &[(1, 3), (2, 3), (3, 4)],
            &[(2, 1), (3, 2), (4, 3)],
        )
        .unwrap_err();
        let PairingError::Invalid(v) = err else {
            panic!()
        };
        assert!(v.contains(&"marriages not injective".to_string()));

        assert_eq!(
            Pairing::new(1, PairingClass::A, &[(1, 1)], &[]),
            Err(PairingError::Size(1))
        );
    }

    #[test]
    fn json_shape() {
        let p = Pairing::new(3, PairingClass::A, &[(1, 2), (2, 3), (3, 1)], &[(2, 2)]).unwrap();
        let s = serde_json::to_string(&p).unwrap();
        assert_eq!(
            s,
            r#"{"n":3,"class":"A","marriages":{"1":2,"2":3,"3":1},"affairs":{"2":2}}"#
        );
        let back: Pairing = serde_json::from_str(&s).unwrap();
        assert_eq!(back, p);
        let bad = r#"{"n":3,"class":"B","marriages":{"1":2,"2":3,"3":1},"affairs":{"2":2}}"#;
        assert!(serde_json::from_str::<Pairing>(bad).is_err());
    }

    fn same_set_perm(k: usize) -> impl Strategy<Value = Permutation> {
        Just((1..=k as u32).collect::<Vec<_>>())
            .prop_shuffle()
            .prop_map(move |img| perm(&(1..=k as u32).zip(img).collect::<Vec<_>>()))
    }

    proptest! {
        #[test]
        fn sign_is_multiplicative(p in same_set_perm(6), q in same_set_perm(6)) {
            let pq = p.compose(&q).unwrap();
            prop_assert_eq!(pq.sign(), p.sign() * q.sign());
        }
    }
}
