//! The language `L₂` of second-order arithmetic: syntax trees, parser and
//! canonical printer.

mod ast;
mod parser;
mod printer;

pub use ast::{is_set_name, Capture, Core, Formula, FreeVars, Term};
pub use parser::{parse, parse_file, Numbered, ParseError, ParseErrorKind, MAX_NUMERAL};

/// Canonical text of a formula.
pub fn format(f: &Formula) -> String {
    f.to_string()
}
