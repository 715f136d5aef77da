use super::{check_bound, Assignment, AtomEval, Bounds, EvalError, Frame};
use crate::formula::Formula;
use crate::measure::Event;
use crate::sets::{CondSet, Fiber};
use crate::values::CondNat;
use serde::Serialize;
use std::collections::BTreeSet;

/// A glued witness for an existential quantifier.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub enum Witness {
    #[serde(rename = "num")]
    Num(CondNat),
    #[serde(rename = "set")]
    Set(CondSet),
}

/// The maximum principle: a single witness `w` with `[φ(w)]^β = [∃x φ(x)]^β`.
///
/// Per atom the smallest admissible value (or fiber, ordered by bit pattern)
/// is chosen, and the choices are glued. Atoms where the existential fails
/// get `0`, or are left out of the witness set's carrier.
pub fn witness_exists(f: &Formula, beta: &Assignment, bounds: Bounds) -> Result<(Witness, Event), EvalError> {
    check_bound(f, beta)?;
    let k = beta.atom_count();
    let eval = AtomEval::new(beta, bounds);
    let mut warnings = BTreeSet::new();
    match f {
        Formula::ExistsNum(x, body) => {
            let core = body.desugar();
            let picks: Vec<Option<u64>> =
                (0..k).map(|a| eval.first_num(x, &core, a, &mut Frame::default(), &mut warnings)).collect();
            let event = Event::from_fn(k, |a| picks[a].is_some());
            let values: Vec<u64> = picks.iter().map(|p| p.unwrap_or(0)).collect();
            Ok((Witness::Num(CondNat::from_u64s(&values)), event))
        }
        Formula::ExistsSet(x, body) => {
            let core = body.desugar();
            let picks: Vec<Option<u64>> =
                (0..k).map(|a| eval.first_set(x, &core, a, &mut Frame::default(), &mut warnings)).collect();
            let event = Event::from_fn(k, |a| picks[a].is_some());
            let fibers = picks.iter().map(|p| Fiber::from_mask(p.unwrap_or(0))).collect();
            Ok((Witness::Set(CondSet::from_fibers(fibers)), event))
        }
        other => Err(EvalError::NotExistential(other.to_string())),
    }
}
