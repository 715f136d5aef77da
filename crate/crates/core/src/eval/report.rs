//! JSON truth reports.

use super::{evaluate, witness_exists, Assignment, BoundWarning, Bounds, EvalError, Witness};
use crate::formula::Formula;
use crate::measure::{Event, MeasureSpace};
use crate::numio::format_rational;
use serde::Serialize;

pub const SCHEMA: &str = "condmodel/1";

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct WitnessStep {
    pub quantifier: String,
    pub witness: Witness,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TruthReport {
    pub formula: String,
    pub event: Event,
    pub measure: String,
    pub witnesses: Vec<WitnessStep>,
    pub warnings: Vec<BoundWarning>,
}

impl TruthReport {
    /// Evaluates `f` and traces witnesses through its leading existential
    /// quantifiers, each one chosen under the witnesses before it.
    pub fn build(f: &Formula, space: &MeasureSpace, beta: &Assignment, bounds: Bounds) -> Result<Self, EvalError> {
        let evaluation = evaluate(f, beta, bounds)?;
        let mut witnesses = Vec::new();
        let mut current = f;
        let mut beta = beta.clone();
        while let Formula::ExistsNum(x, body) | Formula::ExistsSet(x, body) = current {
            let (witness, _) = witness_exists(current, &beta, bounds)?;
            beta = match &witness {
                Witness::Num(n) => beta.with_num(x, n.clone())?,
                Witness::Set(s) => beta.with_set(x, s.clone())?,
            };
            witnesses.push(WitnessStep { quantifier: x.clone(), witness });
            current = body;
        }
        let measure = space.measure(&evaluation.event).map_err(|e| EvalError::Assignment(e.to_string()))?;
        Ok(Self {
            formula: f.to_string(),
            event: evaluation.event,
            measure: format_rational(&measure),
            witnesses,
            warnings: evaluation.warnings,
        })
    }
}
