use super::sequent::{check_rule, Rule, RuleInstance, Sequent, SideCondition};
use super::*;
use crate::formula::parse;
use crate::measure::MeasureSpace;
use crate::sample::{AssignmentShape, Sampler};
use crate::sets::CondSet;

fn s2() -> MeasureSpace {
    MeasureSpace::uniform(2).unwrap()
}

fn f(text: &str) -> Formula {
    parse(text).unwrap()
}

fn beta(nums: &[(&str, &[u64])]) -> Assignment {
    let mut b = Assignment::new(&s2());
    for (name, values) in nums {
        b = b.with_num(name, CondNat::from_u64s(values)).unwrap();
    }
    b
}

fn bounds(num: u64, set: u32) -> Bounds {
    Bounds::new(num, set).unwrap()
}

fn ev(atoms: &[usize]) -> Event {
    s2().event(atoms).unwrap()
}

#[test]
fn term_examples() {
    let b = beta(&[("y", &[2, 3])]);
    let t = |s: &str| match f(&format!("{s} = 0")) {
        Formula::Eq(t, _) => t,
        _ => unreachable!(),
    };
    assert_eq!(eval_term(&t("y + 1"), &b).unwrap(), CondNat::from_u64s(&[3, 4]));
    assert_eq!(eval_term(&t("0"), &b).unwrap(), CondNat::from_u64s(&[0, 0]));
    assert_eq!(eval_term(&t("y * y"), &b).unwrap(), CondNat::from_u64s(&[4, 9]));
    assert_eq!(eval_term(&t("z"), &b), Err(EvalError::UnboundVariable("z".into())));
}

#[test]
fn formula_examples() {
    let b = beta(&[("y", &[2, 3])]);
    let bd = bounds(4, 4);
    assert_eq!(eval_formula(&f("exists x. x + x = y"), &b, bd).unwrap(), ev(&[0]));
    assert_eq!(eval_formula(&f("y < y + 1"), &b, bd).unwrap(), ev(&[0, 1]));
    assert_eq!(eval_formula(&f("y = z"), &b, bd), Err(EvalError::UnboundVariable("z".into())));
}

#[test]
fn separating_set_example() {
    let b = beta(&[("y", &[1, 1]), ("z", &[1, 2])]);
    let phi = f("exists X. y in X & !(z in X)");
    let bd = bounds(3, 3);
    // brute force: join over every glued pair of fibers ⊆ {0,1,2}
    let mut join = Event::empty(2);
    for m0 in 0..8u64 {
        for m1 in 0..8u64 {
            let x = CondSet::from_fibers(vec![Fiber::from_mask(m0), Fiber::from_mask(m1)]);
            let body = f("y in X & !(z in X)");
            join = join | eval_formula(&body, &b.with_set("X", x).unwrap(), bd).unwrap();
        }
    }
    assert_eq!(join, ev(&[1]));
    assert_eq!(eval_formula(&phi, &b, bd).unwrap(), ev(&[1]));
}

#[test]
fn bound_warning_reported() {
    let b = beta(&[("y", &[1, 7])]);
    let out = evaluate(&f("exists X. y in X"), &b, bounds(3, 3)).unwrap();
    assert_eq!(out.event, ev(&[0]));
    assert_eq!(out.warnings, vec![BoundWarning { set_var: "X".into(), atom: 1 }]);
    let assigned = b.with_set("Y", CondSet::naturals(&s2())).unwrap();
    assert!(evaluate(&f("y in Y"), &assigned, bounds(3, 3)).unwrap().warnings.is_empty());
}

#[test]
fn bounds_validation() {
    assert!(Bounds::new(0, 3).is_err());
    assert!(Bounds::new(4, 3).is_err());
    assert!(Bounds::new(4, MAX_SET_BOUND + 1).is_err());
    assert!(Bounds::new(4, 4).is_ok());
}

#[test]
fn witness_examples() {
    let bd = bounds(4, 5);
    let b = beta(&[("y", &[2, 3])]);
    let (w, e) = witness_exists(&f("exists x. x + x = y"), &b, bd).unwrap();
    assert_eq!(w, Witness::Num(CondNat::from_u64s(&[1, 0])));
    assert_eq!(e, ev(&[0]));

    let b = beta(&[("y", &[5, 6])]);
    let (w, e) = witness_exists(&f("exists x. x = y"), &b, bounds(7, 7)).unwrap();
    assert_eq!(w, Witness::Num(CondNat::from_u64s(&[5, 6])));
    assert!(e.is_full());

    let (w, e) = witness_exists(&f("exists x. x < 0"), &b, bd).unwrap();
    assert_eq!(w, Witness::Num(CondNat::from_u64s(&[0, 0])));
    assert!(e.is_empty());

    assert!(matches!(witness_exists(&f("forall x. x = x"), &b, bd), Err(EvalError::NotExistential(_))));
}

#[test]
fn set_witness_is_minimal_and_attains() {
    let b = beta(&[("y", &[1, 1]), ("z", &[1, 2])]);
    let phi = f("exists X. y in X & !(z in X)");
    let (w, e) = witness_exists(&phi, &b, bounds(3, 3)).unwrap();
    let Witness::Set(x) = w else { panic!("set witness expected") };
    assert_eq!(x.carrier(), ev(&[1]));
    assert_eq!(x.fiber(1), Some(&Fiber::finite([1])));
    let body = f("y in X & !(z in X)");
    assert_eq!(eval_formula(&body, &b.with_set("X", x).unwrap(), bounds(3, 3)).unwrap(), e);
}

#[test]
fn comprehension_examples() {
    let bd = bounds(4, 4);
    let b = beta(&[("y", &[1, 3])]);
    let n = comprehend(&f("x < y"), "x", "X", &b, bd).unwrap();
    assert!(n.carrier().is_full());
    assert_eq!(n.fiber(0), Some(&Fiber::finite([0])));
    assert_eq!(n.fiber(1), Some(&Fiber::finite([0, 1, 2])));

    let n = comprehend(&f("x = x + 1"), "x", "X", &b, bd).unwrap();
    assert!(n.is_bottom());

    let n = comprehend(&f("exists z. z + z = x"), "x", "X", &b, bd).unwrap();
    assert!(n.carrier().is_full());
    assert_eq!(n.fiber(0), Some(&Fiber::finite([0, 2])));
    assert_eq!(n.fiber(1), Some(&Fiber::finite([0, 2])));
}

#[test]
fn comprehension_errors() {
    let bd = bounds(4, 4);
    let b = beta(&[("y", &[1, 3])]).with_set("X", CondSet::bottom(2)).unwrap();
    assert!(matches!(comprehend(&f("exists Z. x in Z"), "x", "X", &b, bd), Err(EvalError::NotArithmetical(_))));
    assert_eq!(comprehend(&f("x in X"), "x", "X", &b, bd), Err(EvalError::FreeSetVariableClash("X".into())));
}

#[test]
fn sequent_examples() {
    let bd = bounds(4, 4);
    let b = beta(&[("y", &[0, 2])]);
    assert!(sequent_validity(&[], &[f("y = y")], &b, bd).unwrap().is_full());
    assert!(sequent_validity(&[f("y < 0")], &[], &b, bd).unwrap().is_full());
    assert!(sequent_validity(&[f("0 < y")], &[f("0 < y + 1")], &b, bd).unwrap().is_full());
    assert_eq!(sequent_validity(&[], &[f("0 < y")], &b, bd).unwrap(), ev(&[1]));
}

fn shape() -> AssignmentShape {
    AssignmentShape { num_below: 6, set_universe: 4, cofinite: 0.2 }
}

#[test]
fn weakening_example_passes() {
    let inst = RuleInstance::weakening_left(Sequent::new(vec![], vec![f("y = y")]), f("0 < y"));
    let mut s = Sampler::new(11);
    let report = check_rule(&inst, &mut s, &shape(), 2, 1000, bounds(4, 4)).unwrap();
    assert!(report.passed());
    assert_eq!(report.premises_correct, 1000);
}

#[test]
fn eigenvariable_violation_gates_rule() {
    let context = Sequent::new(vec![], vec![f("y = y")]);
    let inst = RuleInstance::forall_right(context, "x", f("x = y"), "y").unwrap();
    let mut s = Sampler::new(1);
    let report = check_rule(&inst, &mut s, &shape(), 2, 100, bounds(3, 3)).unwrap();
    assert_eq!(report.gated, Some(SideCondition::EigenvariableViolation("y".into())));
    assert_eq!(report.trials, 0);
}

#[test]
fn cut_on_derivable_pair() {
    let context = Sequent::new(vec![f("y < z")], vec![f("y + 1 < z + 1")]);
    let inst = RuleInstance::cut(context, f("y < z + 1"));
    let mut s = Sampler::new(5);
    let report = check_rule(&inst, &mut s, &shape(), 3, 1000, bounds(4, 4)).unwrap();
    assert!(report.passed());
    assert!(report.premises_correct > 0);
}

#[test]
fn unsound_conclusion_is_caught() {
    // not a rule of the calculus: drops a premise formula illegally
    let inst = RuleInstance {
        rule: Rule::WeakeningLeft,
        premises: vec![Sequent::new(vec![f("y = 0")], vec![f("y = 0")])],
        conclusion: Sequent::new(vec![], vec![f("y = 0")]),
        instantiation: None,
    };
    let mut s = Sampler::new(2);
    let report = check_rule(&inst, &mut s, &shape(), 2, 50, bounds(3, 3)).unwrap();
    assert!(!report.passed());
}

#[test]
fn rule_names_round_trip() {
    for rule in Rule::ALL {
        assert_eq!(Rule::from_name(rule.name()), Ok(rule));
    }
    assert!(Rule::from_name("modus-tollens").is_err());
}

#[test]
fn axiom_suite_on_s2() {
    let mut s = Sampler::new(7);
    let report = axioms::axiom_suite(&s2(), bounds(4, 5), &mut s, 200).unwrap();
    assert!(report.passed(), "{:?}", report.failures.first());
    assert_eq!(report.checks.len(), 8 + 2 + 10);
}

#[test]
fn soundness_corpus_is_valid() {
    for text in axioms::SOUNDNESS_CORPUS {
        let phi = f(text);
        for (b, bs) in [(1, 1), (3, 3), (4, 5)] {
            let e = eval_formula(&phi, &Assignment::new(&s2()), bounds(b, bs)).unwrap();
            assert!(e.is_full(), "{text} at {b},{bs}");
        }
    }
}

#[test]
fn truth_report_json() {
    let b = beta(&[("y", &[2, 3])]);
    let r = report::TruthReport::build(&f("exists x. x + x = y"), &s2(), &b, bounds(4, 4)).unwrap();
    let json = serde_json::to_string(&r).unwrap();
    assert_eq!(
        json,
        r#"{"formula":"exists x. x + x = y","event":[0],"measure":"1/2","witnesses":[{"quantifier":"x","witness":{"num":["1","0"]}}],"warnings":[]}"#
    );
}
