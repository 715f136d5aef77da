//! The conditional power set `𝒫` of `L⁰(ℕ)`.
//!
//! A stable set restricted to a carrier `A` is an atom-wise product: at each
//! atom of `A` it has a nonempty fiber `⊆ ℕ`, and off `A` it carries nothing.
//! `N|∅` is the bottom object `{*}`.
//!
//! The set operations compute the maximal carriers of the defining unions
//! directly atom by atom; in an atomic algebra the exhaustion arguments reduce
//! to this.

mod fiber;
pub mod pairing;

pub use fiber::Fiber;

use crate::measure::{Event, MeasureSpace, Partition};
use crate::values::CondNat;
use num_bigint::BigUint;
use serde::{Deserialize, Serialize};
use std::fmt;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SetError {
    #[error("sets or values live on different spaces ({left} vs {right} atoms)")]
    SpaceMismatch { left: usize, right: usize },
    #[error("{sets} sets glued along a partition of {pieces} pieces")]
    LengthMismatch { sets: usize, pieces: usize },
    #[error("fiber at carrier atom {0} is empty or missing")]
    EmptyFiber(usize),
    #[error("operation needs a nonempty list of sets")]
    EmptyList,
    #[error("fiber at atom {0} is cofinite; its pair encoding is not finite-or-cofinite")]
    UnboundedFiber(usize),
    #[error("pair encoding at atom {0} exceeds the 64-bit fiber range")]
    EncodingOverflow(usize),
    #[error("malformed conditional set: {0}")]
    Malformed(String),
}

/// An element `N|A` of the conditional power set.
type Fibers = Vec<Option<Fiber>>;

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct CondSet {
    carrier: Event,
    fibers: Fibers,
}

impl CondSet {
    /// Builds `N|A` from per-atom fibers; entries off the carrier are ignored.
    pub fn make_stable(per_atom: Vec<Option<Fiber>>, carrier: Event) -> Result<Self, SetError> {
        let k = carrier.atom_count();
        if per_atom.len() != k {
            return Err(SetError::SpaceMismatch { left: k, right: per_atom.len() });
        }
        let fibers = per_atom
            .into_iter()
            .enumerate()
            .map(|(a, f)| {
                if !carrier.contains(a) {
                    return Ok(None);
                }
                match f {
                    Some(f) if !f.is_empty() => Ok(Some(f)),
                    _ => Err(SetError::EmptyFiber(a)),
                }
            })
            .collect::<Result<Fibers, _>>()?;
        Ok(Self { carrier, fibers })
    }

    /// Builds a set whose carrier is the atoms with a nonempty fiber.
    pub fn from_fibers(per_atom: Vec<Fiber>) -> Self {
        let k = per_atom.len();
        let fibers: Fibers = per_atom.into_iter().map(|f| (!f.is_empty()).then_some(f)).collect();
        let carrier = Event::from_fn(k, |a| fibers[a].is_some());
        Self { carrier, fibers }
    }

    /// `{*}`.
    pub fn bottom(atom_count: usize) -> Self {
        Self { carrier: Event::empty(atom_count), fibers: vec![None; atom_count] }
    }

    /// `L⁰(ℕ)|Ω`.
    pub fn naturals(space: &MeasureSpace) -> Self {
        let k = space.atom_count();
        Self { carrier: Event::full(k), fibers: vec![Some(Fiber::naturals()); k] }
    }

    pub fn atom_count(&self) -> usize {
        self.fibers.len()
    }

    pub fn carrier(&self) -> Event {
        self.carrier
    }

    pub fn is_bottom(&self) -> bool {
        self.carrier.is_empty()
    }

    /// Fiber at `atom`, `None` off the carrier.
    pub fn fiber(&self, atom: usize) -> Option<&Fiber> {
        self.fibers.get(atom).and_then(Option::as_ref)
    }

    pub fn fibers(&self) -> &[Option<Fiber>] {
        &self.fibers
    }

    fn same_space(&self, k: usize) -> Result<(), SetError> {
        if self.atom_count() != k {
            return Err(SetError::SpaceMismatch { left: self.atom_count(), right: k });
        }
        Ok(())
    }

    /// `N|A ↦ N|(A ∩ B)`.
    pub fn restrict(&self, event: &Event) -> Self {
        assert_eq!(event.atom_count(), self.atom_count(), "events over different spaces");
        let carrier = self.carrier & *event;
        let fibers =
            self.fibers.iter().enumerate().map(|(a, f)| if carrier.contains(a) { f.clone() } else { None }).collect();
        Self { carrier, fibers }
    }

    /// `Σ_k (N_k|B_k)|A_k`: carrier `∪_k (A_k ∩ B_k)`, fiber of `N_k` on piece `k`.
    pub fn concat(sets: &[CondSet], partition: &Partition) -> Result<Self, SetError> {
        if sets.len() != partition.len() {
            return Err(SetError::LengthMismatch { sets: sets.len(), pieces: partition.len() });
        }
        let k = partition.atom_count();
        for s in sets {
            s.same_space(k)?;
        }
        let fibers: Fibers = (0..k)
            .map(|a| {
                let piece = partition.piece_of(a).expect("partition covers Ω");
                sets[piece].fibers[a].clone()
            })
            .collect();
        let carrier = Event::from_fn(k, |a| fibers[a].is_some());
        Ok(Self { carrier, fibers })
    }

    /// The conditional element relation `i(n, N|A)`: the largest `E ⊆ A` with
    /// `n|E ∈ N|E`.
    pub fn member(&self, n: &CondNat) -> Result<Event, SetError> {
        self.same_space(n.atom_count())?;
        Ok(Event::from_fn(self.atom_count(), |a| self.fibers[a].as_ref().is_some_and(|f| f.contains_big(n.at(a)))))
    }

    /// Membership of a single natural at one atom.
    pub fn contains_at(&self, atom: usize, n: &BigUint) -> bool {
        self.fiber(atom).is_some_and(|f| f.contains_big(n))
    }

    /// `N|A ⊓ M|B`.
    pub fn intersect(&self, other: &CondSet) -> Result<Self, SetError> {
        self.same_space(other.atom_count())?;
        Ok(Self::from_optional(
            self.fibers
                .iter()
                .zip(&other.fibers)
                .map(|(f, g)| match (f, g) {
                    (Some(f), Some(g)) => Some(f.intersect(g)),
                    _ => None,
                })
                .collect(),
        ))
    }

    /// `(N|A)^⊏`: carrier `Aᶜ ∪ {a ∈ A : N(a) ≠ ℕ}`, fiber `ℕ ∖ N(a)` on `A`
    /// and `ℕ` off it.
    pub fn complement(&self) -> Self {
        Self::from_optional(
            self.fibers
                .iter()
                .map(|f| match f {
                    None => Some(Fiber::naturals()),
                    Some(f) => Some(f.complement()),
                })
                .collect(),
        )
    }

    /// `⊓_k N_k|A_k`.
    pub fn intersect_all(sets: &[CondSet]) -> Result<Self, SetError> {
        let (first, rest) = sets.split_first().ok_or(SetError::EmptyList)?;
        rest.iter().try_fold(first.clone(), |acc, s| acc.intersect(s))
    }

    /// `⊔_k N_k|A_k`: carrier `∪_k A_k`, fiber the union of the fibers present
    /// at each atom.
    pub fn union_all(sets: &[CondSet]) -> Result<Self, SetError> {
        let (first, rest) = sets.split_first().ok_or(SetError::EmptyList)?;
        rest.iter().try_fold(first.clone(), |acc, s| acc.union(s))
    }

    pub fn union(&self, other: &CondSet) -> Result<Self, SetError> {
        self.same_space(other.atom_count())?;
        Ok(Self::from_optional(
            self.fibers
                .iter()
                .zip(&other.fibers)
                .map(|(f, g)| match (f, g) {
                    (Some(f), Some(g)) => Some(f.union(g)),
                    (Some(f), None) | (None, Some(f)) => Some(f.clone()),
                    (None, None) => None,
                })
                .collect(),
        ))
    }

    /// `N|A ⊑ M|B` iff `A ⊆ B` and `N|A ⊆ M|A`.
    pub fn includes(&self, other: &CondSet) -> Result<bool, SetError> {
        self.same_space(other.atom_count())?;
        Ok(self.fibers.iter().zip(&other.fibers).all(|(f, g)| match (f, g) {
            (None, _) => true,
            (Some(_), None) => false,
            (Some(f), Some(g)) => f.is_subset(g),
        }))
    }

    /// `N × M | A ∩ B`, with pairs encoded by `(i, j) ↦ (i + j)² + i`.
    pub fn product(&self, other: &CondSet) -> Result<Self, SetError> {
        self.same_space(other.atom_count())?;
        let mut fibers = Fibers::with_capacity(self.atom_count());
        for (a, (f, g)) in self.fibers.iter().zip(&other.fibers).enumerate() {
            let (Some(f), Some(g)) = (f, g) else {
                fibers.push(None);
                continue;
            };
            let (Some(fs), Some(gs)) = (f.finite_elems(), g.finite_elems()) else {
                return Err(SetError::UnboundedFiber(a));
            };
            let mut codes = Vec::with_capacity(fs.len() * gs.len());
            for &i in &fs {
                for &j in &gs {
                    codes.push(pairing::encode_u64(i, j).ok_or(SetError::EncodingOverflow(a))?);
                }
            }
            fibers.push(Some(Fiber::finite(codes)));
        }
        Ok(Self::from_optional(fibers))
    }

    /// Conditionally finite: every fiber on the carrier is a finite set.
    pub fn is_finite(&self) -> bool {
        self.fibers.iter().flatten().all(Fiber::is_finite)
    }

    /// A `k ∈ L⁰(ℕ)` with `n|A < k|A` for all members, equal to `max + 1` on
    /// the carrier and `0` off it.
    pub fn finite_bound(&self) -> Option<CondNat> {
        let mut bound = Vec::with_capacity(self.atom_count());
        for f in &self.fibers {
            match f {
                None => bound.push(0),
                Some(f) => bound.push(f.finite_elems()?.last().map_or(0, |m| m + 1)),
            }
        }
        Some(CondNat::from_u64s(&bound))
    }

    fn from_optional(mut fibers: Fibers) -> Self {
        for f in fibers.iter_mut() {
            if f.as_ref().is_some_and(Fiber::is_empty) {
                *f = None;
            }
        }
        let carrier = Event::from_fn(fibers.len(), |a| fibers[a].is_some());
        Self { carrier, fibers }
    }
}

impl fmt::Debug for CondSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for CondSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_bottom() {
            return write!(f, "{{*}}");
        }
        write!(f, "(")?;
        for (a, fib) in self.fibers.iter().enumerate() {
            if a > 0 {
                write!(f, ", ")?;
            }
            match fib {
                Some(fib) => write!(f, "{fib}")?,
                None => write!(f, "-")?,
            }
        }
        write!(f, ")|{}", self.carrier)
    }
}

#[derive(Serialize, Deserialize)]
struct RawCondSet {
    carrier: Vec<usize>,
    fibers: Vec<Option<Fiber>>,
}

impl Serialize for CondSet {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        RawCondSet { carrier: self.carrier.atoms().collect(), fibers: self.fibers.clone() }.serialize(s)
    }
}

impl<'de> Deserialize<'de> for CondSet {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        use serde::de::Error;
        let raw = RawCondSet::deserialize(d)?;
        let k = raw.fibers.len();
        let carrier = Event::from_atoms(k, raw.carrier).map_err(D::Error::custom)?;
        for (a, f) in raw.fibers.iter().enumerate() {
            if f.is_some() && !carrier.contains(a) {
                return Err(D::Error::custom(SetError::Malformed(format!(
                    "atom {a} has a fiber but is outside the carrier"
                ))));
            }
        }
        CondSet::make_stable(raw.fibers, carrier).map_err(D::Error::custom)
    }
}
