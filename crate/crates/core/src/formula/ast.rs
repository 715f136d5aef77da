use std::collections::BTreeSet;

/// A first-order term over `0, 1, +, ·`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Term {
    Zero,
    One,
    Var(String),
    Plus(Box<Term>, Box<Term>),
    Times(Box<Term>, Box<Term>),
}

impl Term {
    pub fn var(name: &str) -> Self {
        Term::Var(name.to_string())
    }

    pub fn plus(a: Term, b: Term) -> Self {
        Term::Plus(Box::new(a), Box::new(b))
    }

    pub fn times(a: Term, b: Term) -> Self {
        Term::Times(Box::new(a), Box::new(b))
    }

    /// `1 + 1 + … + 1`, or the constants for `n < 2`.
    pub fn numeral(n: u64) -> Self {
        match n {
            0 => Term::Zero,
            _ => (1..n).fold(Term::One, |t, _| Term::plus(t, Term::One)),
        }
    }

    pub fn vars(&self, out: &mut BTreeSet<String>) {
        match self {
            Term::Zero | Term::One => {}
            Term::Var(v) => {
                out.insert(v.clone());
            }
            Term::Plus(a, b) | Term::Times(a, b) => {
                a.vars(out);
                b.vars(out);
            }
        }
    }

    pub fn mentions(&self, name: &str) -> bool {
        match self {
            Term::Zero | Term::One => false,
            Term::Var(v) => v == name,
            Term::Plus(a, b) | Term::Times(a, b) => a.mentions(name) || b.mentions(name),
        }
    }

    pub fn substitute(&self, name: &str, by: &Term) -> Term {
        match self {
            Term::Var(v) if v == name => by.clone(),
            Term::Zero | Term::One | Term::Var(_) => self.clone(),
            Term::Plus(a, b) => Term::plus(a.substitute(name, by), b.substitute(name, by)),
            Term::Times(a, b) => Term::times(a.substitute(name, by), b.substitute(name, by)),
        }
    }

    pub fn depth(&self) -> usize {
        match self {
            Term::Zero | Term::One | Term::Var(_) => 1,
            Term::Plus(a, b) | Term::Times(a, b) => 1 + a.depth().max(b.depth()),
        }
    }
}

/// A formula of the language of second-order arithmetic.
///
/// `Or`, `Implies`, `Iff` and the universal quantifiers are sugar; see
/// [`Formula::desugar`].
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Formula {
    Eq(Term, Term),
    Lt(Term, Term),
    In(Term, String),
    Not(Box<Formula>),
    And(Box<Formula>, Box<Formula>),
    Or(Box<Formula>, Box<Formula>),
    Implies(Box<Formula>, Box<Formula>),
    Iff(Box<Formula>, Box<Formula>),
    ExistsNum(String, Box<Formula>),
    ForallNum(String, Box<Formula>),
    ExistsSet(String, Box<Formula>),
    ForallSet(String, Box<Formula>),
}

/// The kernel the evaluator interprets: atoms, `∧`, `¬`, `∃x`, `∃X`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Core {
    Eq(Term, Term),
    Lt(Term, Term),
    In(Term, String),
    Not(Box<Core>),
    And(Box<Core>, Box<Core>),
    ExistsNum(String, Box<Core>),
    ExistsSet(String, Box<Core>),
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct FreeVars {
    pub num: BTreeSet<String>,
    pub set: BTreeSet<String>,
}

/// Substitution would bind a variable of the substituted term.
#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
#[error("substitution captures `{0}`")]
pub struct Capture(pub String);

impl Formula {
    #[allow(clippy::should_implement_trait)]
    pub fn not(f: Formula) -> Self {
        Formula::Not(Box::new(f))
    }

    pub fn and(a: Formula, b: Formula) -> Self {
        Formula::And(Box::new(a), Box::new(b))
    }

    pub fn or(a: Formula, b: Formula) -> Self {
        Formula::Or(Box::new(a), Box::new(b))
    }

    pub fn implies(a: Formula, b: Formula) -> Self {
        Formula::Implies(Box::new(a), Box::new(b))
    }

    pub fn iff(a: Formula, b: Formula) -> Self {
        Formula::Iff(Box::new(a), Box::new(b))
    }

    pub fn exists(var: &str, body: Formula) -> Self {
        if is_set_name(var) {
            Formula::ExistsSet(var.to_string(), Box::new(body))
        } else {
            Formula::ExistsNum(var.to_string(), Box::new(body))
        }
    }

    pub fn forall(var: &str, body: Formula) -> Self {
        if is_set_name(var) {
            Formula::ForallSet(var.to_string(), Box::new(body))
        } else {
            Formula::ForallNum(var.to_string(), Box::new(body))
        }
    }

    pub fn free_vars(&self) -> FreeVars {
        let mut out = FreeVars::default();
        self.collect_free(&mut Vec::new(), &mut out);
        out
    }

    fn collect_free<'a>(&'a self, bound: &mut Vec<&'a str>, out: &mut FreeVars) {
        let term_free = |t: &Term, bound: &Vec<&str>, out: &mut FreeVars| {
            let mut vs = BTreeSet::new();
            t.vars(&mut vs);
            out.num.extend(vs.into_iter().filter(|v| !bound.contains(&v.as_str())));
        };
        match self {
            Formula::Eq(a, b) | Formula::Lt(a, b) => {
                term_free(a, bound, out);
                term_free(b, bound, out);
            }
            Formula::In(t, s) => {
                term_free(t, bound, out);
                if !bound.contains(&s.as_str()) {
                    out.set.insert(s.clone());
                }
            }
            Formula::Not(f) => f.collect_free(bound, out),
            Formula::And(a, b) | Formula::Or(a, b) | Formula::Implies(a, b) | Formula::Iff(a, b) => {
                a.collect_free(bound, out);
                b.collect_free(bound, out);
            }
            Formula::ExistsNum(v, f)
            | Formula::ForallNum(v, f)
            | Formula::ExistsSet(v, f)
            | Formula::ForallSet(v, f) => {
                bound.push(v);
                f.collect_free(bound, out);
                bound.pop();
            }
        }
    }

    /// True iff the formula has no set quantifiers.
    pub fn is_arithmetical(&self) -> bool {
        match self {
            Formula::Eq(..) | Formula::Lt(..) | Formula::In(..) => true,
            Formula::Not(f) | Formula::ExistsNum(_, f) | Formula::ForallNum(_, f) => f.is_arithmetical(),
            Formula::And(a, b) | Formula::Or(a, b) | Formula::Implies(a, b) | Formula::Iff(a, b) => {
                a.is_arithmetical() && b.is_arithmetical()
            }
            Formula::ExistsSet(..) | Formula::ForallSet(..) => false,
        }
    }

    /// Number of nested quantifiers along the deepest path.
    pub fn quantifier_depth(&self) -> usize {
        match self {
            Formula::Eq(..) | Formula::Lt(..) | Formula::In(..) => 0,
            Formula::Not(f) => f.quantifier_depth(),
            Formula::And(a, b) | Formula::Or(a, b) | Formula::Implies(a, b) | Formula::Iff(a, b) => {
                a.quantifier_depth().max(b.quantifier_depth())
            }
            Formula::ExistsNum(_, f)
            | Formula::ForallNum(_, f)
            | Formula::ExistsSet(_, f)
            | Formula::ForallSet(_, f) => 1 + f.quantifier_depth(),
        }
    }

    /// Replaces free occurrences of the number variable `var` by `by`.
    pub fn substitute(&self, var: &str, by: &Term) -> Result<Formula, Capture> {
        let mut names = BTreeSet::new();
        by.vars(&mut names);
        self.subst_with(&|t: &Term| t.substitute(var, by), var, &names, None)
    }

    /// Renames free occurrences of the set variable `var` to `by`.
    pub fn substitute_set(&self, var: &str, by: &str) -> Result<Formula, Capture> {
        let names = BTreeSet::from([by.to_string()]);
        self.subst_with(&|t: &Term| t.clone(), var, &names, Some(by))
    }

    fn subst_with(
        &self,
        on_term: &dyn Fn(&Term) -> Term,
        var: &str,
        incoming: &BTreeSet<String>,
        set_target: Option<&str>,
    ) -> Result<Formula, Capture> {
        let rec = |f: &Formula| f.subst_with(on_term, var, incoming, set_target);
        Ok(match self {
            Formula::Eq(a, b) => Formula::Eq(on_term(a), on_term(b)),
            Formula::Lt(a, b) => Formula::Lt(on_term(a), on_term(b)),
            Formula::In(t, s) => {
                let s = match set_target {
                    Some(target) if s == var => target.to_string(),
                    _ => s.clone(),
                };
                Formula::In(on_term(t), s)
            }
            Formula::Not(f) => Formula::not(rec(f)?),
            Formula::And(a, b) => Formula::and(rec(a)?, rec(b)?),
            Formula::Or(a, b) => Formula::or(rec(a)?, rec(b)?),
            Formula::Implies(a, b) => Formula::implies(rec(a)?, rec(b)?),
            Formula::Iff(a, b) => Formula::iff(rec(a)?, rec(b)?),
            Formula::ExistsNum(v, f)
            | Formula::ForallNum(v, f)
            | Formula::ExistsSet(v, f)
            | Formula::ForallSet(v, f) => {
                let body = if v == var {
                    (**f).clone()
                } else {
                    let occurs = match set_target {
                        None => f.free_vars().num.contains(var),
                        Some(_) => f.free_vars().set.contains(var),
                    };
                    if occurs && incoming.contains(v) {
                        return Err(Capture(v.clone()));
                    }
                    rec(f)?
                };
                self.with_body(body)
            }
        })
    }

    fn with_body(&self, body: Formula) -> Formula {
        let b = Box::new(body);
        match self {
            Formula::ExistsNum(v, _) => Formula::ExistsNum(v.clone(), b),
            Formula::ForallNum(v, _) => Formula::ForallNum(v.clone(), b),
            Formula::ExistsSet(v, _) => Formula::ExistsSet(v.clone(), b),
            Formula::ForallSet(v, _) => Formula::ForallSet(v.clone(), b),
            _ => unreachable!("with_body on a non-quantifier"),
        }
    }

    /// Rewrites sugar into the `∧, ¬, ∃` kernel.
    pub fn desugar(&self) -> Core {
        let not = |c: Core| Core::Not(Box::new(c));
        let and = |a: Core, b: Core| Core::And(Box::new(a), Box::new(b));
        match self {
            Formula::Eq(a, b) => Core::Eq(a.clone(), b.clone()),
            Formula::Lt(a, b) => Core::Lt(a.clone(), b.clone()),
            Formula::In(t, s) => Core::In(t.clone(), s.clone()),
            Formula::Not(f) => not(f.desugar()),
            Formula::And(a, b) => and(a.desugar(), b.desugar()),
            Formula::Or(a, b) => not(and(not(a.desugar()), not(b.desugar()))),
            Formula::Implies(a, b) => not(and(a.desugar(), not(b.desugar()))),
            Formula::Iff(a, b) => {
                let (a, b) = (a.desugar(), b.desugar());
                and(not(and(a.clone(), not(b.clone()))), not(and(b, not(a))))
            }
            Formula::ExistsNum(v, f) => Core::ExistsNum(v.clone(), Box::new(f.desugar())),
            Formula::ExistsSet(v, f) => Core::ExistsSet(v.clone(), Box::new(f.desugar())),
            Formula::ForallNum(v, f) => not(Core::ExistsNum(v.clone(), Box::new(not(f.desugar())))),
            Formula::ForallSet(v, f) => not(Core::ExistsSet(v.clone(), Box::new(not(f.desugar())))),
        }
    }
}

/// Set variables start with an uppercase letter.
pub fn is_set_name(name: &str) -> bool {
    name.chars().next().is_some_and(|c| c.is_ascii_uppercase())
}
