//! The axioms of second-order arithmetic with arithmetical comprehension,
//! checked against sampled assignments.

use super::{comprehend, eval_formula, AssignmentFile, Bounds, EvalError};
use crate::formula::{parse, Formula};
use crate::measure::{Event, MeasureSpace};
use crate::sample::{AssignmentShape, Sampler};
use serde::Serialize;

pub const BASIC_AXIOMS: [(&str, &str); 8] = [
    ("successor-nonzero", "!(x + 1 = 0)"),
    ("successor-injective", "x + 1 = y + 1 -> x = y"),
    ("plus-zero", "x + 0 = x"),
    ("plus-successor", "x + (y + 1) = (x + y) + 1"),
    ("times-zero", "x * 0 = 0"),
    ("times-successor", "x * (y + 1) = (x * y) + x"),
    ("nothing-below-zero", "!(x < 0)"),
    ("below-successor", "x < y + 1 <-> (x < y | x = y)"),
];

pub const INDUCTION: &str = "forall X. ((0 in X & forall x. (x in X -> x + 1 in X)) -> forall x. x in X)";

/// The induction axiom with its set variable free, for sampled `X`.
pub const INDUCTION_OPEN: &str = "(0 in X & forall x. (x in X -> x + 1 in X)) -> forall x. x in X";

/// Arithmetical formulas in `x` with parameters `y` and `Y`.
pub const COMPREHENSION_CORPUS: [&str; 10] = [
    "x < y",
    "x = x + 1",
    "exists z. z + z = x",
    "x in Y",
    "!(x in Y) | x = y",
    "exists z. x = y + z",
    "forall z. (z < x -> z in Y)",
    "x * x < y + 2",
    "x + 1 in Y <-> x in Y",
    "exists z. (z in Y & x < z)",
];

/// Closed consequences of the axioms whose quantifier instances stay inside
/// any bounded domain.
pub const SOUNDNESS_CORPUS: [&str; 14] = [
    "forall x. x = x",
    "forall x. forall y. x + y = y + x",
    "forall x. forall y. (x < y | x = y | y < x)",
    "forall x. !(x < x)",
    "forall x. (0 = x | 0 < x)",
    "forall x. exists y. y = x",
    "exists x. forall y. !(y < x)",
    "forall x. forall y. x * (y + 1) = x * y + x",
    "forall x. forall y. (x < y -> !(y < x))",
    "forall X. (0 in X | !(0 in X))",
    "exists X. forall x. (x in X <-> x < 2)",
    "forall X. exists Y. forall x. (x in Y <-> !(x in X))",
    "forall X. forall Y. exists Z. forall x. (x in Z <-> (x in X & x in Y))",
    INDUCTION,
];

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct AxiomFailure {
    pub axiom: String,
    pub assignment: AssignmentFile,
    pub event: Event,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct AxiomCheck {
    pub axiom: String,
    pub evaluations: usize,
    pub failures: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct AxiomReport {
    pub atoms: usize,
    pub trials: usize,
    pub checks: Vec<AxiomCheck>,
    pub failures: Vec<AxiomFailure>,
}

impl AxiomReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

fn parsed(text: &str) -> Formula {
    parse(text).unwrap_or_else(|e| panic!("built-in formula `{text}`: {e}"))
}

/// Shape used for sampled assignments: number values run past the bound,
/// set fibers cover the set domain and are sometimes cofinite.
pub fn suite_shape(bounds: Bounds) -> AssignmentShape {
    AssignmentShape { num_below: 2 * bounds.num() + 2, set_universe: bounds.set(), cofinite: 0.25 }
}

/// Evaluates the basic axioms, induction and the comprehension corpus on
/// `trials` sampled assignments.
pub fn axiom_suite(
    space: &MeasureSpace,
    bounds: Bounds,
    sampler: &mut Sampler,
    trials: usize,
) -> Result<AxiomReport, EvalError> {
    let k = space.atom_count();
    let shape = suite_shape(bounds);
    let mut checks: Vec<(String, Formula)> =
        BASIC_AXIOMS.iter().map(|(name, text)| (name.to_string(), parsed(text))).collect();
    checks.push(("induction".into(), parsed(INDUCTION)));
    checks.push(("induction-open".into(), parsed(INDUCTION_OPEN)));
    let corpus: Vec<Formula> = COMPREHENSION_CORPUS.iter().map(|t| parsed(t)).collect();

    let mut counts: Vec<AxiomCheck> = checks
        .iter()
        .map(|(name, _)| name.clone())
        .chain(COMPREHENSION_CORPUS.iter().map(|t| format!("comprehension: {t}")))
        .map(|axiom| AxiomCheck { axiom, evaluations: 0, failures: 0 })
        .collect();
    let mut failures = Vec::new();
    let vars = {
        let mut v = crate::formula::FreeVars::default();
        v.num.extend(["x".to_string(), "y".to_string()]);
        v.set.extend(["X".to_string(), "Y".to_string()]);
        v
    };

    for _ in 0..trials {
        let beta = sampler.assignment(k, &vars, &shape);
        for (i, (name, f)) in checks.iter().enumerate() {
            let event = eval_formula(f, &beta, bounds)?;
            counts[i].evaluations += 1;
            if !event.is_full() {
                counts[i].failures += 1;
                failures.push(AxiomFailure { axiom: name.clone(), assignment: beta.to_file(), event });
            }
        }
        for (j, phi) in corpus.iter().enumerate() {
            let slot = &mut counts[checks.len() + j];
            slot.evaluations += 1;
            match comprehend(phi, "x", "X", &beta, bounds) {
                Ok(_) => {}
                Err(EvalError::ComprehensionFailed { event, .. }) => {
                    slot.failures += 1;
                    failures.push(AxiomFailure { axiom: slot.axiom.clone(), assignment: beta.to_file(), event });
                }
                Err(e) => return Err(e),
            }
        }
    }
    Ok(AxiomReport { atoms: k, trials, checks: counts, failures })
}
