//! Canonical printing; `parse(&f.to_string()) == f` for every AST.

use super::ast::{Formula, Term};
use std::fmt::{self, Write};

fn term_prec(t: &Term) -> u8 {
    match t {
        Term::Plus(..) => 1,
        Term::Times(..) => 2,
        _ => 3,
    }
}

fn write_term(out: &mut dyn Write, t: &Term, min: u8) -> fmt::Result {
    if term_prec(t) < min {
        out.write_char('(')?;
        write_term(out, t, 0)?;
        return out.write_char(')');
    }
    match t {
        Term::Zero => out.write_char('0'),
        Term::One => out.write_char('1'),
        Term::Var(v) => out.write_str(v),
        Term::Plus(a, b) => {
            write_term(out, a, 1)?;
            out.write_str(" + ")?;
            write_term(out, b, 2)
        }
        Term::Times(a, b) => {
            write_term(out, a, 2)?;
            out.write_str(" * ")?;
            write_term(out, b, 3)
        }
    }
}

// iff 1, implies 2, or 3, and 4, not 5, atoms 6; quantifiers 0
fn prec(f: &Formula) -> u8 {
    match f {
        Formula::Iff(..) => 1,
        Formula::Implies(..) => 2,
        Formula::Or(..) => 3,
        Formula::And(..) => 4,
        Formula::Not(..) => 5,
        Formula::Eq(..) | Formula::Lt(..) | Formula::In(..) => 6,
        _ => 0,
    }
}

/// `rightmost`: nothing follows this subformula in its enclosing group, so a
/// quantifier body may extend to the end without parentheses.
fn write_formula(out: &mut dyn Write, f: &Formula, min: u8, rightmost: bool) -> fmt::Result {
    let quantifier = prec(f) == 0;
    let needs_parens = if quantifier { !rightmost && min > 0 } else { prec(f) < min };
    if needs_parens {
        out.write_char('(')?;
        write_formula(out, f, 0, true)?;
        return out.write_char(')');
    }
    let binary = |out: &mut dyn Write, a: &Formula, op: &str, b: &Formula, lmin: u8, rmin: u8| -> fmt::Result {
        write_formula(out, a, lmin, false)?;
        write!(out, " {op} ")?;
        write_formula(out, b, rmin, rightmost)
    };
    match f {
        Formula::Eq(a, b) => {
            write_term(out, a, 0)?;
            out.write_str(" = ")?;
            write_term(out, b, 0)
        }
        Formula::Lt(a, b) => {
            write_term(out, a, 0)?;
            out.write_str(" < ")?;
            write_term(out, b, 0)
        }
        Formula::In(t, s) => {
            write_term(out, t, 0)?;
            write!(out, " in {s}")
        }
        Formula::Not(g) => {
            out.write_char('!')?;
            write_formula(out, g, 5, rightmost)
        }
        Formula::And(a, b) => binary(out, a, "&", b, 4, 5),
        Formula::Or(a, b) => binary(out, a, "|", b, 3, 4),
        Formula::Implies(a, b) => binary(out, a, "->", b, 3, 2),
        Formula::Iff(a, b) => binary(out, a, "<->", b, 1, 2),
        Formula::ExistsNum(v, g) | Formula::ExistsSet(v, g) => {
            write!(out, "exists {v}. ")?;
            write_formula(out, g, 0, true)
        }
        Formula::ForallNum(v, g) | Formula::ForallSet(v, g) => {
            write!(out, "forall {v}. ")?;
            write_formula(out, g, 0, true)
        }
    }
}

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_term(f, self, 0)
    }
}

impl fmt::Display for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_formula(f, self, 0, true)
    }
}
