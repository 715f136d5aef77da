//! Sequents and randomized correctness checks for sequent-calculus rules.
//!
//! A rule is correct when correct premises force a correct conclusion. For a
//! rule with an eigenvariable `y`, a premise counts as correct at `β` only if
//! it is valid at every `y`-variant of `β`; the variants range over every
//! glued value of the bounded domain.

use super::{eval_term, sequent_validity, Assignment, Bounds, EvalError};
use crate::formula::{is_set_name, Capture, Formula, FreeVars, Term};
use crate::measure::Event;
use crate::sample::{AssignmentShape, FormulaShape, Sampler};
use crate::sets::{CondSet, Fiber};
use crate::values::CondNat;
use num_traits::ToPrimitive;
use serde::Serialize;
use std::fmt;
use thiserror::Error;

/// Largest number of eigenvariable variants enumerated per trial.
pub const MAX_VARIANTS: u64 = 1 << 16;

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Sequent {
    pub antecedent: Vec<Formula>,
    pub succedent: Vec<Formula>,
}

impl Sequent {
    pub fn new(antecedent: Vec<Formula>, succedent: Vec<Formula>) -> Self {
        Self { antecedent, succedent }
    }

    pub fn validity(&self, beta: &Assignment, bounds: Bounds) -> Result<Event, EvalError> {
        sequent_validity(&self.antecedent, &self.succedent, beta, bounds)
    }

    pub fn free_vars(&self) -> FreeVars {
        let mut out = FreeVars::default();
        for f in self.antecedent.iter().chain(&self.succedent) {
            let fv = f.free_vars();
            out.num.extend(fv.num);
            out.set.extend(fv.set);
        }
        out
    }

    fn with_left(&self, f: Formula) -> Self {
        let mut s = self.clone();
        s.antecedent.insert(0, f);
        s
    }

    fn with_right(&self, f: Formula) -> Self {
        let mut s = self.clone();
        s.succedent.push(f);
        s
    }
}

impl fmt::Display for Sequent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let join = |fs: &[Formula]| fs.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(", ");
        write!(f, "{} => {}", join(&self.antecedent), join(&self.succedent))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Rule {
    WeakeningLeft,
    WeakeningRight,
    Cut,
    AndLeft,
    AndRight,
    NotLeft,
    NotRight,
    ForallNumLeft,
    ForallNumRight,
    ExistsNumLeft,
    ExistsNumRight,
    ForallSetLeft,
    ForallSetRight,
    ExistsSetLeft,
    ExistsSetRight,
}

#[derive(Clone, Debug, PartialEq, Eq, Error)]
#[error("unknown rule `{0}`")]
pub struct UnknownRule(pub String);

impl Rule {
    pub const ALL: [Rule; 15] = [
        Rule::WeakeningLeft,
        Rule::WeakeningRight,
        Rule::Cut,
        Rule::AndLeft,
        Rule::AndRight,
        Rule::NotLeft,
        Rule::NotRight,
        Rule::ForallNumLeft,
        Rule::ForallNumRight,
        Rule::ExistsNumLeft,
        Rule::ExistsNumRight,
        Rule::ForallSetLeft,
        Rule::ForallSetRight,
        Rule::ExistsSetLeft,
        Rule::ExistsSetRight,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Rule::WeakeningLeft => "weakening-left",
            Rule::WeakeningRight => "weakening-right",
            Rule::Cut => "cut",
            Rule::AndLeft => "and-left",
            Rule::AndRight => "and-right",
            Rule::NotLeft => "not-left",
            Rule::NotRight => "not-right",
            Rule::ForallNumLeft => "forall-num-left",
            Rule::ForallNumRight => "forall-num-right",
            Rule::ExistsNumLeft => "exists-num-left",
            Rule::ExistsNumRight => "exists-num-right",
            Rule::ForallSetLeft => "forall-set-left",
            Rule::ForallSetRight => "forall-set-right",
            Rule::ExistsSetLeft => "exists-set-left",
            Rule::ExistsSetRight => "exists-set-right",
        }
    }

    pub fn from_name(name: &str) -> Result<Rule, UnknownRule> {
        Rule::ALL.into_iter().find(|r| r.name() == name).ok_or_else(|| UnknownRule(name.to_string()))
    }

    fn is_quantifier(self) -> bool {
        matches!(
            self,
            Rule::ForallNumLeft
                | Rule::ForallNumRight
                | Rule::ExistsNumLeft
                | Rule::ExistsNumRight
                | Rule::ForallSetLeft
                | Rule::ForallSetRight
                | Rule::ExistsSetLeft
                | Rule::ExistsSetRight
        )
    }
}

impl fmt::Display for Rule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// What a quantifier rule substitutes for the bound variable.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Instantiation {
    /// A term `t` (∀-left, ∃-right); its value must lie in the bounded domain.
    Term(Term),
    /// A set variable (second-order ∀-left, ∃-right).
    SetVar(String),
    /// An eigenvariable (∀-right, ∃-left).
    Eigen(String),
}

#[derive(Clone, Debug, PartialEq, Eq, Error, Serialize)]
pub enum SideCondition {
    #[error("eigenvariable `{0}` occurs free in the conclusion")]
    EigenvariableViolation(String),
    #[error("`{0}` has the wrong sort for this rule")]
    SortMismatch(String),
    #[error("substitution captures `{0}`")]
    Capture(String),
}

impl From<Capture> for SideCondition {
    fn from(c: Capture) -> Self {
        SideCondition::Capture(c.0)
    }
}

/// A concrete rule application: premises and conclusion.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RuleInstance {
    pub rule: Rule,
    pub premises: Vec<Sequent>,
    pub conclusion: Sequent,
    pub instantiation: Option<Instantiation>,
}

impl RuleInstance {
    fn plain(rule: Rule, premises: Vec<Sequent>, conclusion: Sequent) -> Self {
        Self { rule, premises, conclusion, instantiation: None }
    }

    /// `Γ → Δ  /  φ, Γ → Δ`
    pub fn weakening_left(context: Sequent, phi: Formula) -> Self {
        let conclusion = context.with_left(phi);
        Self::plain(Rule::WeakeningLeft, vec![context], conclusion)
    }

    /// `Γ → Δ  /  Γ → Δ, φ`
    pub fn weakening_right(context: Sequent, phi: Formula) -> Self {
        let conclusion = context.with_right(phi);
        Self::plain(Rule::WeakeningRight, vec![context], conclusion)
    }

    /// `Γ → Δ, φ   φ, Γ → Δ  /  Γ → Δ`
    pub fn cut(context: Sequent, phi: Formula) -> Self {
        let premises = vec![context.with_right(phi.clone()), context.with_left(phi)];
        Self::plain(Rule::Cut, premises, context)
    }

    /// `φ, Γ → Δ  /  φ ∧ ψ, Γ → Δ`
    pub fn and_left(context: Sequent, phi: Formula, psi: Formula) -> Self {
        let premise = context.with_left(phi.clone());
        let conclusion = context.with_left(Formula::and(phi, psi));
        Self::plain(Rule::AndLeft, vec![premise], conclusion)
    }

    /// `Γ → Δ, φ   Γ → Δ, ψ  /  Γ → Δ, φ ∧ ψ`
    pub fn and_right(context: Sequent, phi: Formula, psi: Formula) -> Self {
        let premises = vec![context.with_right(phi.clone()), context.with_right(psi.clone())];
        let conclusion = context.with_right(Formula::and(phi, psi));
        Self::plain(Rule::AndRight, premises, conclusion)
    }

    /// `Γ → Δ, φ  /  ¬φ, Γ → Δ`
    pub fn not_left(context: Sequent, phi: Formula) -> Self {
        let premise = context.with_right(phi.clone());
        let conclusion = context.with_left(Formula::not(phi));
        Self::plain(Rule::NotLeft, vec![premise], conclusion)
    }

    /// `φ, Γ → Δ  /  Γ → Δ, ¬φ`
    pub fn not_right(context: Sequent, phi: Formula) -> Self {
        let premise = context.with_left(phi.clone());
        let conclusion = context.with_right(Formula::not(phi));
        Self::plain(Rule::NotRight, vec![premise], conclusion)
    }

    /// `φ(t), Γ → Δ  /  ∀x φ(x), Γ → Δ`; second-order when `var` is uppercase.
    pub fn forall_left(context: Sequent, var: &str, phi: Formula, by: Instantiation) -> Result<Self, SideCondition> {
        let rule = if is_set_name(var) { Rule::ForallSetLeft } else { Rule::ForallNumLeft };
        let premise = context.with_left(instantiate(&phi, var, &by)?);
        let conclusion = context.with_left(Formula::forall(var, phi));
        Ok(Self { rule, premises: vec![premise], conclusion, instantiation: Some(by) })
    }

    /// `Γ → Δ, φ(y)  /  Γ → Δ, ∀x φ(x)` with `y` not free in the conclusion.
    pub fn forall_right(context: Sequent, var: &str, phi: Formula, eigen: &str) -> Result<Self, SideCondition> {
        let rule = if is_set_name(var) { Rule::ForallSetRight } else { Rule::ForallNumRight };
        let by = Instantiation::Eigen(eigen.to_string());
        let premise = context.with_right(instantiate(&phi, var, &by)?);
        let conclusion = context.with_right(Formula::forall(var, phi));
        Ok(Self { rule, premises: vec![premise], conclusion, instantiation: Some(by) })
    }

    /// `φ(y), Γ → Δ  /  ∃x φ(x), Γ → Δ` with `y` not free in the conclusion.
    pub fn exists_left(context: Sequent, var: &str, phi: Formula, eigen: &str) -> Result<Self, SideCondition> {
        let rule = if is_set_name(var) { Rule::ExistsSetLeft } else { Rule::ExistsNumLeft };
        let by = Instantiation::Eigen(eigen.to_string());
        let premise = context.with_left(instantiate(&phi, var, &by)?);
        let conclusion = context.with_left(Formula::exists(var, phi));
        Ok(Self { rule, premises: vec![premise], conclusion, instantiation: Some(by) })
    }

    /// `Γ → Δ, φ(t)  /  Γ → Δ, ∃x φ(x)`
    pub fn exists_right(context: Sequent, var: &str, phi: Formula, by: Instantiation) -> Result<Self, SideCondition> {
        let rule = if is_set_name(var) { Rule::ExistsSetRight } else { Rule::ExistsNumRight };
        let premise = context.with_right(instantiate(&phi, var, &by)?);
        let conclusion = context.with_right(Formula::exists(var, phi));
        Ok(Self { rule, premises: vec![premise], conclusion, instantiation: Some(by) })
    }

    pub fn side_conditions(&self) -> Result<(), SideCondition> {
        if let Some(Instantiation::Eigen(y)) = &self.instantiation {
            let fv = self.conclusion.free_vars();
            let free = if is_set_name(y) { fv.set.contains(y) } else { fv.num.contains(y) };
            if free {
                return Err(SideCondition::EigenvariableViolation(y.clone()));
            }
        }
        Ok(())
    }

    pub fn free_vars(&self) -> FreeVars {
        let mut out = self.conclusion.free_vars();
        for p in &self.premises {
            let fv = p.free_vars();
            out.num.extend(fv.num);
            out.set.extend(fv.set);
        }
        // the instantiating term is evaluated even when φ does not mention x
        match &self.instantiation {
            Some(Instantiation::Term(t)) => t.vars(&mut out.num),
            Some(Instantiation::SetVar(s)) => {
                out.set.insert(s.clone());
            }
            _ => {}
        }
        out
    }

    /// A random instance of `rule` over the free variables of `shape`.
    ///
    /// Quantifier rules bind `x` / `X`; eigenvariables are `w` / `W`, which
    /// `shape` must not use.
    pub fn random(rule: Rule, sampler: &mut Sampler, shape: &FormulaShape) -> Self {
        loop {
            if let Ok(inst) = Self::try_random(rule, sampler, shape) {
                return inst;
            }
        }
    }

    fn try_random(rule: Rule, sampler: &mut Sampler, shape: &FormulaShape) -> Result<Self, SideCondition> {
        let context = {
            let n = sampler.below(3);
            let antecedent = (0..n).map(|_| sampler.formula(shape)).collect();
            let n = sampler.below(3);
            let succedent = (0..n).map(|_| sampler.formula(shape)).collect();
            Sequent::new(antecedent, succedent)
        };
        let phi = sampler.formula(shape);
        if !rule.is_quantifier() {
            let psi = sampler.formula(shape);
            return Ok(match rule {
                Rule::WeakeningLeft => Self::weakening_left(context, phi),
                Rule::WeakeningRight => Self::weakening_right(context, phi),
                Rule::Cut => Self::cut(context, phi),
                Rule::AndLeft => Self::and_left(context, phi, psi),
                Rule::AndRight => Self::and_right(context, phi, psi),
                Rule::NotLeft => Self::not_left(context, phi),
                Rule::NotRight => Self::not_right(context, phi),
                _ => unreachable!("quantifier rules handled below"),
            });
        }
        let set_rule =
            matches!(rule, Rule::ForallSetLeft | Rule::ForallSetRight | Rule::ExistsSetLeft | Rule::ExistsSetRight);
        let var = if set_rule { "X" } else { "x" };
        let body = {
            let mut inner = shape.clone();
            if set_rule {
                inner.set_vars.push(var.into());
            } else {
                inner.num_vars.push(var.into());
            }
            sampler.formula(&inner)
        };
        let instantiation = || -> Instantiation {
            if set_rule {
                Instantiation::SetVar(shape.set_vars.first().cloned().unwrap_or_else(|| "Y".into()))
            } else {
                Instantiation::Term(Term::var(&shape.num_vars[0]))
            }
        };
        let eigen = if set_rule { "W" } else { "w" };
        match rule {
            Rule::ForallNumLeft | Rule::ForallSetLeft => {
                let by = if set_rule { instantiation() } else { Instantiation::Term(sampler.term(&shape.num_vars, 2)) };
                Self::forall_left(context, var, body, by)
            }
            Rule::ExistsNumRight | Rule::ExistsSetRight => {
                let by = if set_rule { instantiation() } else { Instantiation::Term(sampler.term(&shape.num_vars, 2)) };
                Self::exists_right(context, var, body, by)
            }
            Rule::ForallNumRight | Rule::ForallSetRight => Self::forall_right(context, var, body, eigen),
            Rule::ExistsNumLeft | Rule::ExistsSetLeft => Self::exists_left(context, var, body, eigen),
            _ => unreachable!("non-quantifier rules handled above"),
        }
    }
}

fn instantiate(phi: &Formula, var: &str, by: &Instantiation) -> Result<Formula, SideCondition> {
    let sort_ok = match by {
        Instantiation::Term(_) => !is_set_name(var),
        Instantiation::SetVar(s) | Instantiation::Eigen(s) => is_set_name(var) == is_set_name(s),
    };
    if !sort_ok {
        return Err(SideCondition::SortMismatch(var.to_string()));
    }
    Ok(match by {
        Instantiation::Term(t) => phi.substitute(var, t)?,
        Instantiation::SetVar(s) | Instantiation::Eigen(s) if is_set_name(s) => phi.substitute_set(var, s)?,
        Instantiation::SetVar(s) | Instantiation::Eigen(s) => phi.substitute(var, &Term::var(s))?,
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Counterexample {
    pub conclusion: String,
    pub assignment: super::AssignmentFile,
    pub validity: Event,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RuleReport {
    pub rule: Rule,
    pub trials: usize,
    /// Trials whose premises were all correct, so the conclusion was asserted.
    pub premises_correct: usize,
    /// Trials skipped because an instantiating term left the bounded domain.
    pub out_of_domain: usize,
    pub counterexamples: Vec<Counterexample>,
    /// Set when a side condition fails; no trial is run.
    pub gated: Option<SideCondition>,
}

impl RuleReport {
    pub fn passed(&self) -> bool {
        self.counterexamples.is_empty()
    }
}

/// Runs `trials` sampled assignments against one rule instance.
pub fn check_rule(
    instance: &RuleInstance,
    sampler: &mut Sampler,
    shape: &AssignmentShape,
    atom_count: usize,
    trials: usize,
    bounds: Bounds,
) -> Result<RuleReport, EvalError> {
    let mut report = RuleReport {
        rule: instance.rule,
        trials: 0,
        premises_correct: 0,
        out_of_domain: 0,
        counterexamples: Vec::new(),
        gated: None,
    };
    if let Err(violation) = instance.side_conditions() {
        report.gated = Some(violation);
        return Ok(report);
    }
    let vars = instance.free_vars();
    for _ in 0..trials {
        report.trials += 1;
        let beta = sampler.assignment(atom_count, &vars, shape);
        if !instantiation_in_domain(instance, &beta, bounds)? {
            report.out_of_domain += 1;
            continue;
        }
        if !premises_correct(instance, &beta, bounds)? {
            continue;
        }
        report.premises_correct += 1;
        let validity = instance.conclusion.validity(&beta, bounds)?;
        if !validity.is_full() {
            report.counterexamples.push(Counterexample {
                conclusion: instance.conclusion.to_string(),
                assignment: beta.to_file(),
                validity,
            });
        }
    }
    Ok(report)
}

fn instantiation_in_domain(instance: &RuleInstance, beta: &Assignment, bounds: Bounds) -> Result<bool, EvalError> {
    Ok(match &instance.instantiation {
        Some(Instantiation::Term(t)) => {
            eval_term(t, beta)?.values().iter().all(|v| v.to_u64().is_some_and(|v| v < bounds.num()))
        }
        Some(Instantiation::SetVar(s)) => {
            let set = beta.set(s).ok_or_else(|| EvalError::UnboundVariable(s.clone()))?;
            set.fibers()
                .iter()
                .flatten()
                .all(|f| f.finite_elems().is_some_and(|e| e.iter().all(|&v| v < u64::from(bounds.set()))))
        }
        _ => true,
    })
}

fn premises_correct(instance: &RuleInstance, beta: &Assignment, bounds: Bounds) -> Result<bool, EvalError> {
    let variants = match &instance.instantiation {
        Some(Instantiation::Eigen(y)) => eigen_variants(beta, y, bounds)?,
        _ => vec![beta.clone()],
    };
    for variant in &variants {
        for premise in &instance.premises {
            if !premise.validity(variant, bounds)?.is_full() {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// Every `y`-variant of `β` whose value lies in the bounded domain.
pub fn eigen_variants(beta: &Assignment, y: &str, bounds: Bounds) -> Result<Vec<Assignment>, EvalError> {
    let k = beta.atom_count() as u32;
    let per_atom = if is_set_name(y) { bounds.set_domain_size() } else { bounds.num() };
    let total = per_atom
        .checked_pow(k)
        .filter(|&t| t <= MAX_VARIANTS)
        .ok_or_else(|| EvalError::InvalidBounds(format!("{per_atom}^{k} eigenvariable variants")))?;
    (0..total)
        .map(|mut code| {
            let digits: Vec<u64> = (0..k)
                .map(|_| {
                    let d = code % per_atom;
                    code /= per_atom;
                    d
                })
                .collect();
            if is_set_name(y) {
                let set = CondSet::from_fibers(digits.iter().map(|&m| Fiber::from_mask(m)).collect());
                beta.with_set(y, set)
            } else {
                beta.with_num(y, CondNat::from_u64s(&digits))
            }
        })
        .collect()
}
