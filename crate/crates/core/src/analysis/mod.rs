//! Conditional analysis on a finite measure algebra: ragged vectors of
//! measurable dimension, sequences indexed by conditional naturals, and
//! per-atom compacta with grid-exact minimization.

mod expr;
mod field;
mod scenario;
mod sequence;
mod vector;

pub use expr::{Expr, ExprError, MAX_EXPONENT};
pub use field::{
    argmin, finite_subcover, heine_borel, selections_contain, CompactField, GridBox, Integrand, OpenBall, Selection,
    Slice,
};
pub use scenario::{Scenario, ScenarioRow};
pub use sequence::{bw_subsequence, limsup, CondSequence, Within};
pub use vector::{euclid_norm, sqrt_enclosure, NormEnclosure, RaggedVec};

use thiserror::Error;

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum AnalysisError {
    #[error("sequence exceeds its bound at atom {0} within the horizon")]
    UnboundedOnHorizon(usize),
    #[error("no admissible index at atom {atom} for step {step}")]
    NoAdmissibleIndex { atom: usize, step: usize },
    #[error("integrand undefined at atom {atom}, point ({})", point.join(", "))]
    EvaluationError { atom: usize, point: Vec<String> },
    #[error("malformed scenario at row {row}: {reason}")]
    MalformedScenario { row: usize, reason: String },
    #[error("atom counts differ: {left} vs {right}")]
    SpaceMismatch { left: usize, right: usize },
    #[error("dimension mismatch at atom {atom}: expected {expected}, found {found}")]
    DimensionMismatch { atom: usize, expected: usize, found: usize },
    #[error("tolerances must be positive")]
    NonpositiveTolerance,
}
