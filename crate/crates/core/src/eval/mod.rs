//! The conditional model: evaluation of terms and formulas to events.
//!
//! Quantifiers are relativized to bounded domains (see [`Bounds`]). A
//! formula's truth at an atom depends only on the assignment's values at that
//! atom, so evaluation runs atom by atom and quantifies over scalar values
//! there; the resulting event equals the join over all glued conditional
//! witnesses.

mod assignment;
pub mod axioms;
mod comprehension;
pub mod report;
pub mod sequent;
mod witness;

pub use assignment::{Assignment, AssignmentFile};
pub use comprehension::comprehend;
pub use witness::{witness_exists, Witness};

use crate::formula::{Core, Formula, Term};
use crate::measure::Event;
use crate::sets::Fiber;
use crate::values::CondNat;
use num_bigint::BigUint;
use num_traits::{One, ToPrimitive, Zero};
use serde::Serialize;
use std::collections::BTreeSet;
use thiserror::Error;

/// Largest supported set bound; set quantifiers enumerate `2^B_set` fibers.
pub const MAX_SET_BOUND: u32 = 24;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum EvalError {
    #[error("unbound variable `{0}`")]
    UnboundVariable(String),
    #[error("invalid bounds: {0}")]
    InvalidBounds(String),
    #[error("formula is not an existential: {0}")]
    NotExistential(String),
    #[error("comprehension needs an arithmetical formula: {0}")]
    NotArithmetical(String),
    #[error("set variable `{0}` occurs free in the comprehension formula")]
    FreeSetVariableClash(String),
    #[error("`{0}` is a set variable, expected a number variable")]
    NotANumberVariable(String),
    #[error("assignment value for `{name}` has {found} atoms, space has {expected}")]
    SpaceMismatch { name: String, expected: usize, found: usize },
    #[error("comprehension postcondition failed for {formula}: biconditional holds only on {event}")]
    ComprehensionFailed { formula: String, event: Event },
    #[error("bad assignment: {0}")]
    Assignment(String),
}

/// Quantifier domains: numbers range over `0..num` and sets over subsets of
/// `{0..set-1}` at every atom. The empty subset stands for "atom outside the
/// carrier".
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct Bounds {
    num: u64,
    set: u32,
}

impl Bounds {
    pub fn new(num: u64, set: u32) -> Result<Self, EvalError> {
        if num == 0 {
            return Err(EvalError::InvalidBounds("number bound must be at least 1".into()));
        }
        if u64::from(set) < num {
            return Err(EvalError::InvalidBounds(format!("set bound {set} is below the number bound {num}")));
        }
        if set > MAX_SET_BOUND {
            return Err(EvalError::InvalidBounds(format!("set bound {set} exceeds {MAX_SET_BOUND}")));
        }
        Ok(Self { num, set })
    }

    pub fn num(&self) -> u64 {
        self.num
    }

    pub fn set(&self) -> u32 {
        self.set
    }

    /// Number of fibers in the set-quantifier domain.
    pub fn set_domain_size(&self) -> u64 {
        1u64 << self.set
    }
}

/// A membership test `t ∈ X` against a quantified set variable with `[t] ≥ B_set`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize)]
pub struct BoundWarning {
    pub set_var: String,
    pub atom: usize,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Evaluation {
    pub event: Event,
    pub warnings: Vec<BoundWarning>,
}

/// `[t]^β`.
pub fn eval_term(t: &Term, beta: &Assignment) -> Result<CondNat, EvalError> {
    let mut names = BTreeSet::new();
    t.vars(&mut names);
    if let Some(missing) = names.iter().find(|v| beta.num(v).is_none()) {
        return Err(EvalError::UnboundVariable(missing.clone()));
    }
    let k = beta.atom_count();
    let frame = Frame::default();
    Ok(CondNat::from_values((0..k).map(|a| term_at(t, a, beta, &frame)).collect()))
}

/// `[φ]^β` under bounded quantifiers.
pub fn eval_formula(f: &Formula, beta: &Assignment, bounds: Bounds) -> Result<Event, EvalError> {
    Ok(evaluate(f, beta, bounds)?.event)
}

/// Like [`eval_formula`] but also reports bound warnings.
pub fn evaluate(f: &Formula, beta: &Assignment, bounds: Bounds) -> Result<Evaluation, EvalError> {
    check_bound(f, beta)?;
    let core = f.desugar();
    let mut warnings = BTreeSet::new();
    let event = AtomEval::new(beta, bounds).event(&core, &mut warnings);
    Ok(Evaluation { event, warnings: warnings.into_iter().collect() })
}

pub(crate) fn check_bound(f: &Formula, beta: &Assignment) -> Result<(), EvalError> {
    let free = f.free_vars();
    if let Some(v) = free.num.iter().find(|v| beta.num(v).is_none()) {
        return Err(EvalError::UnboundVariable(v.clone()));
    }
    if let Some(v) = free.set.iter().find(|v| beta.set(v).is_none()) {
        return Err(EvalError::UnboundVariable(v.clone()));
    }
    Ok(())
}

/// Values of quantified variables at one atom, innermost last.
#[derive(Default)]
pub(crate) struct Frame<'f> {
    nums: Vec<(&'f str, BigUint)>,
    sets: Vec<(&'f str, u64)>,
}

enum LocalSet<'a> {
    Assigned(Option<&'a Fiber>),
    Quantified(u64),
}

fn term_at(t: &Term, atom: usize, beta: &Assignment, frame: &Frame<'_>) -> BigUint {
    match t {
        Term::Zero => BigUint::zero(),
        Term::One => BigUint::one(),
        Term::Var(v) => match frame.nums.iter().rev().find(|(n, _)| n == v) {
            Some((_, value)) => value.clone(),
            None => beta.num(v).expect("free variables checked").at(atom).clone(),
        },
        Term::Plus(x, y) => term_at(x, atom, beta, frame) + term_at(y, atom, beta, frame),
        Term::Times(x, y) => term_at(x, atom, beta, frame) * term_at(y, atom, beta, frame),
    }
}

pub(crate) struct AtomEval<'a> {
    beta: &'a Assignment,
    bounds: Bounds,
}

impl<'a> AtomEval<'a> {
    pub(crate) fn new(beta: &'a Assignment, bounds: Bounds) -> Self {
        Self { beta, bounds }
    }

    pub(crate) fn event(&self, f: &Core, warnings: &mut BTreeSet<BoundWarning>) -> Event {
        let k = self.beta.atom_count();
        Event::from_fn(k, |a| self.holds(f, a, &mut Frame::default(), warnings))
    }

    fn set_at<'f>(&self, name: &str, atom: usize, frame: &Frame<'f>) -> LocalSet<'a> {
        match frame.sets.iter().rev().find(|(n, _)| *n == name) {
            Some(&(_, mask)) => LocalSet::Quantified(mask),
            None => LocalSet::Assigned(self.beta.set(name).expect("free variables checked").fiber(atom)),
        }
    }

    pub(crate) fn holds<'f>(
        &self,
        f: &'f Core,
        atom: usize,
        frame: &mut Frame<'f>,
        warnings: &mut BTreeSet<BoundWarning>,
    ) -> bool {
        match f {
            Core::Eq(x, y) => term_at(x, atom, self.beta, frame) == term_at(y, atom, self.beta, frame),
            Core::Lt(x, y) => term_at(x, atom, self.beta, frame) < term_at(y, atom, self.beta, frame),
            Core::In(t, s) => {
                let value = term_at(t, atom, self.beta, frame);
                match self.set_at(s, atom, frame) {
                    LocalSet::Assigned(fiber) => fiber.is_some_and(|fib| fib.contains_big(&value)),
                    LocalSet::Quantified(mask) => match value.to_u32() {
                        Some(v) if v < self.bounds.set => mask >> v & 1 == 1,
                        _ => {
                            warnings.insert(BoundWarning { set_var: s.clone(), atom });
                            false
                        }
                    },
                }
            }
            Core::Not(g) => !self.holds(g, atom, frame, warnings),
            Core::And(g, h) => self.holds(g, atom, frame, warnings) && self.holds(h, atom, frame, warnings),
            Core::ExistsNum(x, g) => self.first_num(x, g, atom, frame, warnings).is_some(),
            Core::ExistsSet(x, g) => self.first_set(x, g, atom, frame, warnings).is_some(),
        }
    }

    /// Smallest `v < B` with `g` true at `atom` under `x := v`.
    pub(crate) fn first_num<'f>(
        &self,
        x: &'f str,
        g: &'f Core,
        atom: usize,
        frame: &mut Frame<'f>,
        warnings: &mut BTreeSet<BoundWarning>,
    ) -> Option<u64> {
        let mut found = None;
        for v in 0..self.bounds.num {
            frame.nums.push((x, BigUint::from(v)));
            let ok = self.holds(g, atom, frame, warnings);
            frame.nums.pop();
            if ok {
                found = Some(v);
                break;
            }
        }
        found
    }

    /// Smallest fiber mask with `g` true at `atom` under `X := mask`.
    pub(crate) fn first_set<'f>(
        &self,
        x: &'f str,
        g: &'f Core,
        atom: usize,
        frame: &mut Frame<'f>,
        warnings: &mut BTreeSet<BoundWarning>,
    ) -> Option<u64> {
        let mut found = None;
        for mask in 0..self.bounds.set_domain_size() {
            frame.sets.push((x, mask));
            let ok = self.holds(g, atom, frame, warnings);
            frame.sets.pop();
            if ok {
                found = Some(mask);
                break;
            }
        }
        found
    }
}

/// Conditional validity `(∪_{ψ∈Γ} [¬ψ]) ∪ (∪_{ψ∈Δ} [ψ])` of a sequent `Γ → Δ`.
pub fn sequent_validity(
    antecedent: &[Formula],
    succedent: &[Formula],
    beta: &Assignment,
    bounds: Bounds,
) -> Result<Event, EvalError> {
    let mut event = Event::empty(beta.atom_count());
    for psi in antecedent {
        event = event | !eval_formula(psi, beta, bounds)?;
    }
    for psi in succedent {
        event = event | eval_formula(psi, beta, bounds)?;
    }
    Ok(event)
}

#[cfg(test)]
mod tests;
