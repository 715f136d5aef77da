use super::{check_bound, eval_formula, Assignment, AtomEval, Bounds, EvalError, Frame};
use crate::formula::{is_set_name, Formula, Term};
use crate::sets::{CondSet, Fiber};
use std::collections::BTreeSet;

/// Arithmetical comprehension: the set `N_φ|A_φ` with
/// `[∀x (x ∈ X ↔ φ(x))]^{β[N_φ|A_φ / X]} = Ω`.
///
/// At each atom the fiber is `{v < B : φ(v)}`; atoms where no `v` satisfies
/// `φ` fall outside the carrier `A_φ`. The postcondition is re-evaluated
/// before returning.
pub fn comprehend(
    phi: &Formula,
    x: &str,
    set_var: &str,
    beta: &Assignment,
    bounds: Bounds,
) -> Result<CondSet, EvalError> {
    if is_set_name(x) {
        return Err(EvalError::NotANumberVariable(x.to_string()));
    }
    if !phi.is_arithmetical() {
        return Err(EvalError::NotArithmetical(phi.to_string()));
    }
    if phi.free_vars().set.contains(set_var) {
        return Err(EvalError::FreeSetVariableClash(set_var.to_string()));
    }
    // x is bound by the comprehension itself
    let closed = Formula::exists(x, phi.clone());
    check_bound(&closed, beta)?;

    let core = phi.desugar();
    let eval = AtomEval::new(beta, bounds);
    let mut warnings = BTreeSet::new();
    let fibers = (0..beta.atom_count())
        .map(|a| {
            let members = (0..bounds.num()).filter(|&v| {
                let mut frame = Frame::default();
                frame.nums.push((x, v.into()));
                eval.holds(&core, a, &mut frame, &mut warnings)
            });
            Fiber::finite(members)
        })
        .collect();
    let set = CondSet::from_fibers(fibers);

    let biconditional = Formula::forall(x, Formula::iff(Formula::In(Term::var(x), set_var.to_string()), phi.clone()));
    let extended = beta.with_set(set_var, set.clone())?;
    let event = eval_formula(&biconditional, &extended, bounds)?;
    if !event.is_full() {
        return Err(EvalError::ComprehensionFailed { formula: phi.to_string(), event });
    }
    Ok(set)
}
