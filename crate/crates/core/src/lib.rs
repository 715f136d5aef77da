//! A Boolean-valued model of second-order arithmetic over finite measure
//! algebras, with a conditional-analysis toolkit on top.

pub mod analysis;
pub mod eval;
pub mod formula;
pub mod laws;
pub mod measure;
pub mod numio;
pub mod sample;
pub mod sets;
pub mod values;

pub use eval::{eval_formula, eval_term, Assignment, Bounds, EvalError};
pub use formula::{parse, Formula, ParseError, Term};
pub use measure::{Event, MeasureError, MeasureSpace, Partition};
pub use sample::Sampler;
pub use sets::{CondSet, Fiber, SetError};
pub use values::{ArithOp, CondNat, CondReal, ValueError};
