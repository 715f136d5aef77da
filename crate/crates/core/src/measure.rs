//! Finite atomic measure algebras.
//!
//! A [`MeasureSpace`] has `k` atoms with strictly positive rational weights, so
//! the only null event is the empty one and "almost everywhere" means "at
//! every atom". Events are subsets of atoms stored as a bit set.

use crate::numio::{self, format_rational};
use num_rational::BigRational;
use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};
use std::fmt;
use std::ops::{BitAnd, BitOr, BitXor, Not, Sub};
use std::path::Path;
use thiserror::Error;

/// Largest supported number of atoms; events are 64-bit masks.
pub const MAX_ATOMS: usize = 64;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum MeasureError {
    #[error("measure space needs at least one atom")]
    EmptySpace,
    #[error("weight of atom {atom} is not positive: {weight}")]
    NonpositiveWeight { atom: usize, weight: String },
    #[error("at most {MAX_ATOMS} atoms are supported, got {0}")]
    TooManyAtoms(usize),
    #[error("events belong to different spaces ({left} vs {right} atoms)")]
    SpaceMismatch { left: usize, right: usize },
    #[error("atom {atom} out of range for a space of {atom_count} atoms")]
    AtomOutOfRange { atom: usize, atom_count: usize },
    #[error("partition pieces {first} and {second} overlap")]
    NotDisjoint { first: usize, second: usize },
    #[error("partition does not cover atoms {missing}")]
    NotExhaustive { missing: Event },
    #[error("bad space config: {0}")]
    Config(String),
}

/// A finite atomic measure space `(Ω, ℱ, μ)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MeasureSpace {
    weights: Vec<BigRational>,
}

impl MeasureSpace {
    pub fn new(weights: Vec<BigRational>) -> Result<Self, MeasureError> {
        if weights.is_empty() {
            return Err(MeasureError::EmptySpace);
        }
        if weights.len() > MAX_ATOMS {
            return Err(MeasureError::TooManyAtoms(weights.len()));
        }
        if let Some((atom, w)) = weights.iter().enumerate().find(|(_, w)| !w.is_positive()) {
            return Err(MeasureError::NonpositiveWeight { atom, weight: format_rational(w) });
        }
        Ok(Self { weights })
    }

    /// `k` atoms of weight `1/k`.
    pub fn uniform(atom_count: usize) -> Result<Self, MeasureError> {
        let w = BigRational::new(1.into(), atom_count.max(1).into());
        Self::new(vec![w; atom_count])
    }

    pub fn atom_count(&self) -> usize {
        self.weights.len()
    }

    pub fn weights(&self) -> &[BigRational] {
        &self.weights
    }

    pub fn empty(&self) -> Event {
        Event::empty(self.atom_count())
    }

    pub fn full(&self) -> Event {
        Event::full(self.atom_count())
    }

    /// The event consisting of the listed atoms.
    pub fn event(&self, atoms: &[usize]) -> Result<Event, MeasureError> {
        Event::from_atoms(self.atom_count(), atoms.iter().copied())
    }

    pub fn atom(&self, atom: usize) -> Result<Event, MeasureError> {
        self.event(&[atom])
    }

    pub fn measure(&self, event: &Event) -> Result<BigRational, MeasureError> {
        self.check(event)?;
        Ok(event.atoms().fold(BigRational::zero(), |acc, a| acc + &self.weights[a]))
    }

    /// All `2^k` events, in increasing mask order.
    pub fn events(&self) -> impl Iterator<Item = Event> + '_ {
        let k = self.atom_count();
        let top: u128 = 1u128 << k;
        (0..top).map(move |bits| Event { bits: bits as u64, atom_count: k as u8 })
    }

    pub fn validate_partition(&self, pieces: Vec<Event>) -> Result<Partition, MeasureError> {
        let mut covered = self.empty();
        for (i, piece) in pieces.iter().enumerate() {
            self.check(piece)?;
            if !(covered & *piece).is_empty() {
                let first = pieces[..i].iter().position(|p| !(*p & *piece).is_empty()).unwrap_or(0);
                return Err(MeasureError::NotDisjoint { first, second: i });
            }
            covered = covered | *piece;
        }
        if !covered.is_full() {
            return Err(MeasureError::NotExhaustive { missing: !covered });
        }
        Ok(Partition { pieces })
    }

    /// The one-piece partition `[Ω]`.
    pub fn trivial_partition(&self) -> Partition {
        Partition { pieces: vec![self.full()] }
    }

    /// The partition into singleton atoms.
    pub fn atom_partition(&self) -> Partition {
        Partition { pieces: (0..self.atom_count()).map(|a| Event::from_bits(self.atom_count(), 1 << a)).collect() }
    }

    fn check(&self, event: &Event) -> Result<(), MeasureError> {
        if event.atom_count() != self.atom_count() {
            return Err(MeasureError::SpaceMismatch { left: self.atom_count(), right: event.atom_count() });
        }
        Ok(())
    }

    pub fn from_config(config: &SpaceConfig) -> Result<Self, MeasureError> {
        let weights = config
            .weights
            .iter()
            .map(|w| {
                numio::parse_rational(w).ok_or_else(|| MeasureError::Config(format!("weight `{w}` is not a rational")))
            })
            .collect::<Result<Vec<_>, _>>()?;
        Self::new(weights)
    }

    pub fn from_json(text: &str) -> Result<Self, MeasureError> {
        let config: SpaceConfig = serde_json::from_str(text).map_err(|e| MeasureError::Config(e.to_string()))?;
        Self::from_config(&config)
    }

    pub fn load(path: &Path) -> Result<Self, MeasureError> {
        let text =
            std::fs::read_to_string(path).map_err(|e| MeasureError::Config(format!("{}: {e}", path.display())))?;
        Self::from_json(&text)
    }

    pub fn to_config(&self) -> SpaceConfig {
        SpaceConfig { weights: self.weights.iter().map(format_rational).collect() }
    }
}

/// On-disk form of a space: `{"weights": ["1/2","1/2"]}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SpaceConfig {
    pub weights: Vec<String>,
}

/// An element of the Boolean algebra of a [`MeasureSpace`].
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Event {
    bits: u64,
    atom_count: u8,
}

impl Event {
    pub fn empty(atom_count: usize) -> Self {
        debug_assert!(atom_count <= MAX_ATOMS);
        Self { bits: 0, atom_count: atom_count as u8 }
    }

    pub fn full(atom_count: usize) -> Self {
        Self { bits: full_mask(atom_count), atom_count: atom_count as u8 }
    }

    pub fn from_atoms(atom_count: usize, atoms: impl IntoIterator<Item = usize>) -> Result<Self, MeasureError> {
        let mut bits = 0u64;
        for atom in atoms {
            if atom >= atom_count {
                return Err(MeasureError::AtomOutOfRange { atom, atom_count });
            }
            bits |= 1 << atom;
        }
        Ok(Self { bits, atom_count: atom_count as u8 })
    }

    /// Builds an event from a mask; bits at or above `atom_count` are dropped.
    pub fn from_bits(atom_count: usize, bits: u64) -> Self {
        Self { bits: bits & full_mask(atom_count), atom_count: atom_count as u8 }
    }

    /// The event `{a : pred(a)}`.
    pub fn from_fn(atom_count: usize, mut pred: impl FnMut(usize) -> bool) -> Self {
        let bits = (0..atom_count).filter(|&a| pred(a)).fold(0u64, |b, a| b | 1 << a);
        Self { bits, atom_count: atom_count as u8 }
    }

    pub fn bits(&self) -> u64 {
        self.bits
    }

    pub fn atom_count(&self) -> usize {
        self.atom_count as usize
    }

    pub fn contains(&self, atom: usize) -> bool {
        atom < self.atom_count() && self.bits >> atom & 1 == 1
    }

    pub fn is_empty(&self) -> bool {
        self.bits == 0
    }

    pub fn is_full(&self) -> bool {
        self.bits == full_mask(self.atom_count())
    }

    pub fn len(&self) -> usize {
        self.bits.count_ones() as usize
    }

    pub fn atoms(&self) -> impl Iterator<Item = usize> + '_ {
        (0..self.atom_count()).filter(move |&a| self.contains(a))
    }

    pub fn is_subset(&self, other: &Event) -> bool {
        self.bits & !other.bits == 0
    }

    fn same_space(&self, other: &Event) -> Result<(), MeasureError> {
        if self.atom_count != other.atom_count {
            return Err(MeasureError::SpaceMismatch { left: self.atom_count(), right: other.atom_count() });
        }
        Ok(())
    }

    pub fn meet(&self, other: &Event) -> Result<Event, MeasureError> {
        self.same_space(other)?;
        Ok(Event { bits: self.bits & other.bits, ..*self })
    }

    pub fn join(&self, other: &Event) -> Result<Event, MeasureError> {
        self.same_space(other)?;
        Ok(Event { bits: self.bits | other.bits, ..*self })
    }

    pub fn difference(&self, other: &Event) -> Result<Event, MeasureError> {
        self.same_space(other)?;
        Ok(Event { bits: self.bits & !other.bits, ..*self })
    }

    pub fn symmetric_difference(&self, other: &Event) -> Result<Event, MeasureError> {
        self.same_space(other)?;
        Ok(Event { bits: self.bits ^ other.bits, ..*self })
    }

    pub fn complement(&self) -> Event {
        Event { bits: !self.bits & full_mask(self.atom_count()), ..*self }
    }

    /// Join of a family; the empty family joins to `∅`.
    pub fn union_all<'a>(atom_count: usize, events: impl IntoIterator<Item = &'a Event>) -> Event {
        events.into_iter().fold(Event::empty(atom_count), |acc, e| acc | *e)
    }
}

fn full_mask(atom_count: usize) -> u64 {
    if atom_count >= 64 {
        u64::MAX
    } else {
        (1u64 << atom_count) - 1
    }
}

fn assert_same(a: &Event, b: &Event) {
    assert_eq!(a.atom_count, b.atom_count, "events over different spaces");
}

impl BitAnd for Event {
    type Output = Event;
    fn bitand(self, rhs: Event) -> Event {
        assert_same(&self, &rhs);
        Event { bits: self.bits & rhs.bits, ..self }
    }
}

impl BitOr for Event {
    type Output = Event;
    fn bitor(self, rhs: Event) -> Event {
        assert_same(&self, &rhs);
        Event { bits: self.bits | rhs.bits, ..self }
    }
}

impl BitXor for Event {
    type Output = Event;
    fn bitxor(self, rhs: Event) -> Event {
        assert_same(&self, &rhs);
        Event { bits: self.bits ^ rhs.bits, ..self }
    }
}

impl Sub for Event {
    type Output = Event;
    fn sub(self, rhs: Event) -> Event {
        assert_same(&self, &rhs);
        Event { bits: self.bits & !rhs.bits, ..self }
    }
}

impl Not for Event {
    type Output = Event;
    fn not(self) -> Event {
        self.complement()
    }
}

impl fmt::Debug for Event {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for Event {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_full() {
            return write!(f, "Ω");
        }
        if self.is_empty() {
            return write!(f, "∅");
        }
        write!(f, "{{")?;
        for (i, a) in self.atoms().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{a}")?;
        }
        write!(f, "}}")
    }
}

impl Serialize for Event {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_seq(self.atoms())
    }
}

/// A finite measurable partition of `Ω`. Pieces may be empty.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Partition {
    pieces: Vec<Event>,
}

impl Partition {
    pub fn pieces(&self) -> &[Event] {
        &self.pieces
    }

    pub fn len(&self) -> usize {
        self.pieces.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pieces.is_empty()
    }

    pub fn atom_count(&self) -> usize {
        self.pieces.first().map_or(0, Event::atom_count)
    }

    /// Index of the piece containing `atom`.
    pub fn piece_of(&self, atom: usize) -> Option<usize> {
        self.pieces.iter().position(|p| p.contains(atom))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    fn s2() -> MeasureSpace {
        MeasureSpace::new(vec![q(1, 2), q(1, 2)]).unwrap()
    }

    #[test]
    fn make_space_examples() {
        let s = s2();
        assert_eq!(s.measure(&s.full()).unwrap(), q(1, 1));

        let one = MeasureSpace::new(vec![q(1, 1)]).unwrap();
        assert_eq!(one.events().collect::<Vec<_>>(), vec![one.empty(), one.full()]);

        let three = MeasureSpace::new(vec![q(1, 4), q(1, 4), q(1, 2)]).unwrap();
        assert_eq!(three.events().count(), 8);
    }

    #[test]
    fn make_space_errors() {
        assert_eq!(MeasureSpace::new(vec![]), Err(MeasureError::EmptySpace));
        assert!(matches!(
            MeasureSpace::new(vec![q(1, 2), q(0, 1)]),
            Err(MeasureError::NonpositiveWeight { atom: 1, .. })
        ));
        assert!(matches!(MeasureSpace::new(vec![q(-1, 2)]), Err(MeasureError::NonpositiveWeight { atom: 0, .. })));
        assert_eq!(MeasureSpace::uniform(65).unwrap_err(), MeasureError::TooManyAtoms(65));
    }

    #[test]
    fn bool_ops_examples() {
        let s = s2();
        let a = s.event(&[0]).unwrap();
        let b = s.event(&[1]).unwrap();
        assert_eq!(a.meet(&s.full()).unwrap(), a);
        assert_eq!(a.complement(), b);
        assert_eq!(a.join(&b).unwrap(), s.full());
        assert_eq!(s.full().difference(&a).unwrap(), b);
        assert_eq!(a.symmetric_difference(&s.full()).unwrap(), b);
    }

    #[test]
    fn bool_ops_space_mismatch() {
        let a = Event::full(2);
        let b = Event::full(3);
        assert_eq!(a.meet(&b), Err(MeasureError::SpaceMismatch { left: 2, right: 3 }));
        assert!(s2().measure(&b).is_err());
    }

    #[test]
    fn validate_partition_examples() {
        let s = s2();
        let a = s.event(&[0]).unwrap();
        let b = s.event(&[1]).unwrap();
        assert!(s.validate_partition(vec![a, b]).is_ok());
        assert_eq!(s.validate_partition(vec![a, s.full()]), Err(MeasureError::NotDisjoint { first: 0, second: 1 }));
        assert_eq!(s.validate_partition(vec![a, s.empty()]), Err(MeasureError::NotExhaustive { missing: b }));
        assert!(s.validate_partition(vec![s.empty(), s.full(), s.empty()]).is_ok());
    }

    #[test]
    fn boolean_laws_exhaustive_small() {
        for k in 1..=5 {
            let s = MeasureSpace::uniform(k).unwrap();
            let events: Vec<_> = s.events().collect();
            for &x in &events {
                assert_eq!(!!x, x);
                for &y in &events {
                    assert_eq!(!(x & y), !x | !y);
                    assert_eq!(!(x | y), !x & !y);
                    assert_eq!(x & y, y & x);
                    assert_eq!(x | (x & y), x);
                    if k <= 3 {
                        for &z in &events {
                            assert_eq!((x & y) & z, x & (y & z));
                            assert_eq!((x | y) | z, x | (y | z));
                            assert_eq!(x & (y | z), (x & y) | (x & z));
                            assert_eq!(x | (y & z), (x | y) & (x | z));
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn measure_is_additive_over_partitions() {
        let s = MeasureSpace::new(vec![q(1, 4), q(1, 3), q(5, 2)]).unwrap();
        let total: BigRational = s.weights().iter().cloned().sum();
        assert_eq!(s.measure(&s.full()).unwrap(), total);
        for e in s.events() {
            let p = s.validate_partition(vec![e, !e]).unwrap();
            let sum: BigRational = p.pieces().iter().map(|x| s.measure(x).unwrap()).sum();
            assert_eq!(sum, total);
        }
    }

    #[test]
    fn countable_chain_condition() {
        let s = MeasureSpace::uniform(4).unwrap();
        // greedy disjoint family of nonempty events never exceeds k members
        let mut used = s.empty();
        let mut family = 0;
        for e in s.events() {
            if !e.is_empty() && (e & used).is_empty() {
                used = used | e;
                family += 1;
            }
        }
        assert!(family <= s.atom_count());
    }

    #[test]
    fn config_round_trip() {
        let s = MeasureSpace::from_json(r#"{"weights": ["1/2","1/2"]}"#).unwrap();
        assert_eq!(s, s2());
        assert_eq!(MeasureSpace::from_config(&s.to_config()).unwrap(), s);
        assert!(matches!(MeasureSpace::from_json(r#"{"weights": ["x"]}"#), Err(MeasureError::Config(_))));
    }

    #[test]
    fn event_display() {
        let s = MeasureSpace::uniform(3).unwrap();
        assert_eq!(s.full().to_string(), "Ω");
        assert_eq!(s.empty().to_string(), "∅");
        assert_eq!(s.event(&[0, 2]).unwrap().to_string(), "{0,2}");
    }
}
