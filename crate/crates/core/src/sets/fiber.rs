//! Finite-or-cofinite subsets of ℕ.

use num_bigint::BigUint;
use num_traits::ToPrimitive;
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use std::fmt;

/// A finite set of naturals. Sets whose members are all below 64 are kept
/// as a bit mask; larger ones as a sorted list whose last entry is ≥ 64.
#[derive(Clone, PartialEq, Eq, Hash)]
pub enum Elems {
    Mask(u64),
    List(Box<[u64]>),
}

impl Elems {
    const EMPTY: Elems = Elems::Mask(0);

    fn from_unsorted(mut raw: Vec<u64>) -> Self {
        raw.sort_unstable();
        raw.dedup();
        Self::from_sorted(raw)
    }

    fn from_sorted(raw: Vec<u64>) -> Self {
        match raw.last() {
            Some(&top) if top >= 64 => Elems::List(raw.into_boxed_slice()),
            _ => Elems::Mask(raw.iter().fold(0, |m, &v| m | 1 << v)),
        }
    }

    fn is_empty(&self) -> bool {
        matches!(self, Elems::Mask(0))
    }

    fn contains(&self, n: u64) -> bool {
        match self {
            Elems::Mask(m) => n < 64 && m >> n & 1 == 1,
            Elems::List(l) => l.binary_search(&n).is_ok(),
        }
    }

    fn to_vec(&self) -> Vec<u64> {
        match self {
            Elems::Mask(m) => {
                let mut out = Vec::with_capacity(m.count_ones() as usize);
                let mut m = *m;
                while m != 0 {
                    out.push(u64::from(m.trailing_zeros()));
                    m &= m - 1;
                }
                out
            }
            Elems::List(l) => l.to_vec(),
        }
    }

    fn first(&self) -> Option<u64> {
        match self {
            Elems::Mask(0) => None,
            Elems::Mask(m) => Some(u64::from(m.trailing_zeros())),
            Elems::List(l) => l.first().copied(),
        }
    }

    fn combine(&self, other: &Self, op: Op) -> Self {
        if let (Elems::Mask(x), Elems::Mask(y)) = (self, other) {
            return Elems::Mask(match op {
                Op::And => x & y,
                Op::Or => x | y,
                Op::Minus => x & !y,
            });
        }
        Self::from_sorted(merge(&self.to_vec(), &other.to_vec(), op))
    }
}

impl Serialize for Elems {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_seq(self.to_vec())
    }
}

impl<'de> Deserialize<'de> for Elems {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        Ok(Elems::from_unsorted(Vec::<u64>::deserialize(d)?))
    }
}

/// A subset of ℕ that is either finite or has a finite complement.
///
/// Both variants store a canonical finite set, so derived equality is set
/// equality.
#[derive(Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Fiber {
    #[serde(rename = "fin")]
    Finite(Elems),
    /// `ℕ ∖ elems`.
    #[serde(rename = "cofin")]
    Cofinite(Elems),
}

impl Fiber {
    pub fn finite(elems: impl IntoIterator<Item = u64>) -> Self {
        Fiber::Finite(Elems::from_unsorted(elems.into_iter().collect()))
    }

    pub fn cofinite(excluded: impl IntoIterator<Item = u64>) -> Self {
        Fiber::Cofinite(Elems::from_unsorted(excluded.into_iter().collect()))
    }

    pub fn empty() -> Self {
        Fiber::Finite(Elems::EMPTY)
    }

    /// All of ℕ.
    pub fn naturals() -> Self {
        Fiber::Cofinite(Elems::EMPTY)
    }

    /// The subset of `{0..63}` whose members are the set bits of `mask`.
    pub fn from_mask(mask: u64) -> Self {
        Fiber::Finite(Elems::Mask(mask))
    }

    pub fn is_empty(&self) -> bool {
        matches!(self, Fiber::Finite(e) if e.is_empty())
    }

    pub fn is_naturals(&self) -> bool {
        matches!(self, Fiber::Cofinite(e) if e.is_empty())
    }

    pub fn is_finite(&self) -> bool {
        matches!(self, Fiber::Finite(_))
    }

    /// Finite members in increasing order, or `None` for a cofinite fiber.
    pub fn finite_elems(&self) -> Option<Vec<u64>> {
        match self {
            Fiber::Finite(e) => Some(e.to_vec()),
            Fiber::Cofinite(_) => None,
        }
    }

    /// The finite set stored by either variant: the members of a finite
    /// fiber, the non-members of a cofinite one.
    pub fn listed(&self) -> Vec<u64> {
        match self {
            Fiber::Finite(e) | Fiber::Cofinite(e) => e.to_vec(),
        }
    }

    /// Members as a bit mask when the fiber is finite and inside `{0..63}`.
    pub fn as_mask(&self) -> Option<u64> {
        match self {
            Fiber::Finite(Elems::Mask(m)) => Some(*m),
            _ => None,
        }
    }

    pub fn contains(&self, n: u64) -> bool {
        match self {
            Fiber::Finite(e) => e.contains(n),
            Fiber::Cofinite(e) => !e.contains(n),
        }
    }

    pub fn contains_big(&self, n: &BigUint) -> bool {
        match n.to_u64() {
            Some(small) => self.contains(small),
            None => !self.is_finite(),
        }
    }

    pub fn complement(&self) -> Self {
        match self {
            Fiber::Finite(e) => Fiber::Cofinite(e.clone()),
            Fiber::Cofinite(e) => Fiber::Finite(e.clone()),
        }
    }

    pub fn intersect(&self, other: &Self) -> Self {
        use Fiber::*;
        match (self, other) {
            (Finite(a), Finite(b)) => Finite(a.combine(b, Op::And)),
            (Finite(a), Cofinite(b)) | (Cofinite(b), Finite(a)) => Finite(a.combine(b, Op::Minus)),
            (Cofinite(a), Cofinite(b)) => Cofinite(a.combine(b, Op::Or)),
        }
    }

    pub fn union(&self, other: &Self) -> Self {
        use Fiber::*;
        match (self, other) {
            (Finite(a), Finite(b)) => Finite(a.combine(b, Op::Or)),
            (Finite(a), Cofinite(b)) | (Cofinite(b), Finite(a)) => Cofinite(b.combine(a, Op::Minus)),
            (Cofinite(a), Cofinite(b)) => Cofinite(a.combine(b, Op::And)),
        }
    }

    pub fn is_subset(&self, other: &Self) -> bool {
        use Fiber::*;
        match (self, other) {
            (Finite(a), Finite(b)) => a.combine(b, Op::Minus).is_empty(),
            (Finite(a), Cofinite(b)) => a.combine(b, Op::And).is_empty(),
            (Cofinite(_), Finite(_)) => false,
            (Cofinite(a), Cofinite(b)) => b.combine(a, Op::Minus).is_empty(),
        }
    }

    pub fn intersects(&self, other: &Self) -> bool {
        !self.intersect(other).is_empty()
    }

    /// Smallest member, if any.
    pub fn smallest(&self) -> Option<u64> {
        match self {
            Fiber::Finite(e) => e.first(),
            Fiber::Cofinite(e) => (0..).find(|&n| !e.contains(n)),
        }
    }
}

#[derive(Clone, Copy)]
enum Op {
    And,
    Or,
    Minus,
}

fn merge(a: &[u64], b: &[u64], op: Op) -> Vec<u64> {
    use std::cmp::Ordering;
    let mut out = Vec::with_capacity(a.len() + b.len());
    let (mut i, mut j) = (0, 0);
    while i < a.len() && j < b.len() {
        match a[i].cmp(&b[j]) {
            Ordering::Less => {
                if !matches!(op, Op::And) {
                    out.push(a[i]);
                }
                i += 1;
            }
            Ordering::Greater => {
                if matches!(op, Op::Or) {
                    out.push(b[j]);
                }
                j += 1;
            }
            Ordering::Equal => {
                if !matches!(op, Op::Minus) {
                    out.push(a[i]);
                }
                i += 1;
                j += 1;
            }
        }
    }
    if !matches!(op, Op::And) {
        out.extend_from_slice(&a[i..]);
    }
    if matches!(op, Op::Or) {
        out.extend_from_slice(&b[j..]);
    }
    out
}

impl fmt::Debug for Fiber {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for Fiber {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let prefix = match self {
            Fiber::Finite(_) => "",
            Fiber::Cofinite(e) if e.is_empty() => return write!(f, "ℕ"),
            Fiber::Cofinite(_) => "ℕ∖",
        };
        write!(f, "{prefix}{{")?;
        for (i, x) in self.listed().iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{x}")?;
        }
        write!(f, "}}")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn fiber() -> impl Strategy<Value = Fiber> {
        (any::<bool>(), prop::collection::vec(prop_oneof![0u64..8, 60u64..70], 0..5)).prop_map(|(fin, e)| {
            if fin {
                Fiber::finite(e)
            } else {
                Fiber::cofinite(e)
            }
        })
    }

    proptest! {
        #[test]
        fn set_ops_agree_with_membership(a in fiber(), b in fiber()) {
            for n in (0..10u64).chain(58..72) {
                prop_assert_eq!(a.intersect(&b).contains(n), a.contains(n) && b.contains(n));
                prop_assert_eq!(a.union(&b).contains(n), a.contains(n) || b.contains(n));
                prop_assert_eq!(a.complement().contains(n), !a.contains(n));
            }
            let subset = (0..10u64).chain(58..72).all(|n| !a.contains(n) || b.contains(n))
                && !(matches!(a, Fiber::Cofinite(_)) && b.is_finite());
            prop_assert_eq!(a.is_subset(&b), subset);
        }
    }

    #[test]
    fn canonical_representation() {
        assert_eq!(Fiber::finite([2, 1, 2]), Fiber::finite([1, 2]));
        assert_eq!(Fiber::finite([1]).union(&Fiber::cofinite([1, 3])), Fiber::cofinite([3]));
        assert!(Fiber::naturals().complement().is_empty());
        assert_eq!(Fiber::cofinite([0, 1, 3]).smallest(), Some(2));
        assert!(Fiber::cofinite([]).contains_big(&(BigUint::from(u64::MAX) * 2u32)));
        assert!(!Fiber::finite([1]).contains_big(&(BigUint::from(u64::MAX) * 2u32)));
        assert_eq!(Fiber::finite([70, 3]).intersect(&Fiber::cofinite([70])), Fiber::from_mask(8));
        assert_eq!(Fiber::finite([64, 1]).union(&Fiber::finite([2])).finite_elems(), Some(vec![1, 2, 64]));
        assert!(Fiber::cofinite([100]).contains(99) && !Fiber::cofinite([100]).contains(100));
    }

    #[test]
    fn json_shape() {
        assert_eq!(serde_json::to_string(&Fiber::finite([1, 2])).unwrap(), r#"{"fin":[1,2]}"#);
        assert_eq!(serde_json::to_string(&Fiber::cofinite([5])).unwrap(), r#"{"cofin":[5]}"#);
        let f: Fiber = serde_json::from_str(r#"{"fin":[3,1,1]}"#).unwrap();
        assert_eq!(f, Fiber::finite([1, 3]));
    }
}
