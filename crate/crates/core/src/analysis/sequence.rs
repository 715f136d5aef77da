use super::AnalysisError;
use crate::values::{CondNat, CondReal};
use num_bigint::BigUint;
use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive};
use std::fmt;
use std::sync::Arc;

type Generator<T> = Arc<dyn Fn(u64) -> T + Send + Sync>;

/// A conditional sequence: at each atom an ordinary sequence, realized on
/// demand. Indexing by a [`CondNat`] `m` takes the `m_a`-th term at atom `a`.
#[derive(Clone)]
pub struct CondSequence<T> {
    atoms: Vec<Generator<T>>,
}

impl<T> fmt::Debug for CondSequence<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "CondSequence({} atoms)", self.atoms.len())
    }
}

impl<T> CondSequence<T> {
    pub fn new(atoms: Vec<Generator<T>>) -> Self {
        Self { atoms }
    }

    pub fn from_fns<F>(fns: Vec<F>) -> Self
    where
        F: Fn(u64) -> T + Send + Sync + 'static,
    {
        Self { atoms: fns.into_iter().map(|f| Arc::new(f) as Generator<T>).collect() }
    }

    pub fn atom_count(&self) -> usize {
        self.atoms.len()
    }

    /// The `k`-th term at `atom`.
    pub fn term(&self, atom: usize, k: u64) -> T {
        (self.atoms[atom])(k)
    }

    /// `x_m`; indices beyond `u64` are rejected.
    pub fn index(&self, m: &CondNat) -> Option<Vec<T>> {
        if m.atom_count() != self.atom_count() {
            return None;
        }
        m.values().iter().enumerate().map(|(a, k)| k.to_u64().map(|k| self.term(a, k))).collect()
    }
}

impl CondSequence<BigRational> {
    /// The sequence that is constant `c` at every atom.
    pub fn constant(c: &CondReal) -> Self {
        Self::from_fns(c.values().iter().cloned().map(|v| move |_| v.clone()).collect())
    }
}

/// Closeness of a term to a target.
pub trait Within {
    fn within(&self, target: &Self, eps: &BigRational) -> bool;
}

impl Within for BigRational {
    fn within(&self, target: &Self, eps: &BigRational) -> bool {
        &(self - target).abs() <= eps
    }
}

impl Within for Vec<BigRational> {
    /// Euclidean distance, compared through squares.
    fn within(&self, target: &Self, eps: &BigRational) -> bool {
        if self.len() != target.len() {
            return false;
        }
        let sq =
            self.iter().zip(target).fold(BigRational::from_integer(0.into()), |acc, (x, y)| acc + (x - y) * (x - y));
        sq <= eps * eps
    }
}

/// Horizon estimate of `limsup_k x_k`: per atom, the maximum over the
/// indices in `[horizon − window, horizon)`.
///
/// Every term before the horizon must lie within `[−bound, bound]`.
pub fn limsup(
    seq: &CondSequence<BigRational>,
    horizon: u64,
    window: u64,
    bound: &CondReal,
) -> Result<CondReal, AnalysisError> {
    if bound.atom_count() != seq.atom_count() {
        return Err(AnalysisError::SpaceMismatch { left: seq.atom_count(), right: bound.atom_count() });
    }
    let window = window.clamp(1, horizon.max(1));
    let start = horizon.saturating_sub(window);
    let values = (0..seq.atom_count())
        .map(|a| {
            let r = bound.at(a);
            let mut best: Option<BigRational> = None;
            for k in 0..horizon.max(1) {
                let x = seq.term(a, k);
                if &x.abs() > r {
                    return Err(AnalysisError::UnboundedOnHorizon(a));
                }
                if k >= start && best.as_ref().is_none_or(|b| &x > b) {
                    best = Some(x);
                }
            }
            Ok(best.expect("window is nonempty"))
        })
        .collect::<Result<_, _>>()?;
    Ok(CondReal::from_values(values))
}

/// Minimal strictly increasing indices `n_1 < n_2 < …` with
/// `|x_{n_j} − target| ≤ ε_j` at every atom, searching below `horizon`.
///
/// Steps in [`AnalysisError::NoAdmissibleIndex`] count from 1.
pub fn bw_subsequence<T: Within>(
    seq: &CondSequence<T>,
    target: &[T],
    eps: &[BigRational],
    horizon: u64,
) -> Result<Vec<CondNat>, AnalysisError> {
    if target.len() != seq.atom_count() {
        return Err(AnalysisError::SpaceMismatch { left: seq.atom_count(), right: target.len() });
    }
    if eps.iter().any(|e| !e.is_positive()) {
        return Err(AnalysisError::NonpositiveTolerance);
    }
    let mut per_atom: Vec<Vec<u64>> = Vec::with_capacity(seq.atom_count());
    for (a, t) in target.iter().enumerate() {
        let mut next = 0u64;
        let mut picks = Vec::with_capacity(eps.len());
        for (j, e) in eps.iter().enumerate() {
            let k = (next..horizon)
                .find(|&k| seq.term(a, k).within(t, e))
                .ok_or(AnalysisError::NoAdmissibleIndex { atom: a, step: j + 1 })?;
            picks.push(k);
            next = k + 1;
        }
        per_atom.push(picks);
    }
    Ok((0..eps.len()).map(|j| CondNat::from_values(per_atom.iter().map(|p| BigUint::from(p[j])).collect())).collect())
}
