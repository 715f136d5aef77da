use condmodel::analysis::AnalysisError;
use condmodel::{EvalError, ParseError};
use std::fmt::Display;
use std::path::Path;

pub const FAILURE: u8 = 1;
pub const SYNTAX: u8 = 2;
pub const CONFIG: u8 = 3;
pub const SCENARIO: u8 = 4;

#[derive(Debug)]
pub struct CliError {
    pub code: u8,
    pub message: String,
}

impl CliError {
    pub fn config(message: impl Display) -> Self {
        Self { code: CONFIG, message: message.to_string() }
    }

    pub fn failure(message: impl Display) -> Self {
        Self { code: FAILURE, message: message.to_string() }
    }

    pub fn scenario(message: impl Display) -> Self {
        Self { code: SCENARIO, message: message.to_string() }
    }

    pub fn syntax(path: &Path, e: &ParseError) -> Self {
        Self { code: SYNTAX, message: format!("{}: {e}", path.display()) }
    }

    pub fn eval(e: EvalError) -> Self {
        match e {
            EvalError::InvalidBounds(_) | EvalError::Assignment(_) | EvalError::SpaceMismatch { .. } => Self::config(e),
            _ => Self::failure(e),
        }
    }

    pub fn analysis(e: AnalysisError) -> Self {
        match e {
            AnalysisError::MalformedScenario { .. }
            | AnalysisError::EvaluationError { .. }
            | AnalysisError::DimensionMismatch { .. }
            | AnalysisError::NonpositiveTolerance => Self::scenario(e),
            AnalysisError::SpaceMismatch { .. } => Self::config(e),
            AnalysisError::UnboundedOnHorizon(_) | AnalysisError::NoAdmissibleIndex { .. } => Self::failure(e),
        }
    }
}
