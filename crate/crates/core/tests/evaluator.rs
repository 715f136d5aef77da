mod common;

use condmodel::eval::{witness_exists, Witness};
use condmodel::formula::FreeVars;
use condmodel::sample::{AssignmentShape, FormulaShape};
use condmodel::{
    eval_formula, parse, Assignment, Bounds, CondNat, CondSet, Event, Fiber, Formula, MeasureSpace, Partition, Sampler,
};
use proptest::prelude::*;

fn bounds(b: u64, bs: u32) -> Bounds {
    Bounds::new(b, bs).unwrap()
}

fn shape(b: u64, bs: u32) -> AssignmentShape {
    AssignmentShape { num_below: b + 2, set_universe: bs, cofinite: 0.2 }
}

fn generated(seed: u64, k: usize, b: u64, bs: u32) -> (Formula, Assignment, Sampler) {
    let mut s = Sampler::new(seed);
    let phi = s.formula(&FormulaShape::new(&["y", "z"], &["Y"]));
    let beta = s.assignment(k, &phi.free_vars(), &shape(b, bs));
    (phi, beta, s)
}

fn glue(betas: &[Assignment], vars: &FreeVars, p: &Partition) -> Assignment {
    let mut out = Assignment::with_atoms(p.atom_count());
    for v in &vars.num {
        let xs: Vec<CondNat> = betas.iter().map(|b| b.num(v).unwrap().clone()).collect();
        out = out.with_num(v, CondNat::concat(&xs, p).unwrap()).unwrap();
    }
    for v in &vars.set {
        let xs: Vec<CondSet> = betas.iter().map(|b| b.set(v).unwrap().clone()).collect();
        out = out.with_set(v, CondSet::concat(&xs, p).unwrap()).unwrap();
    }
    out
}

/// Splits `0..k` into pieces by the labels in `code`.
fn partition(k: usize, code: u64, pieces: usize) -> Partition {
    let space = MeasureSpace::uniform(k).unwrap();
    let mut labels = Vec::with_capacity(k);
    let mut c = code;
    for _ in 0..k {
        labels.push((c % pieces as u64) as usize);
        c /= pieces as u64;
    }
    let events = (0..pieces).map(|i| Event::from_fn(k, |a| labels[a] == i)).collect();
    space.validate_partition(events).unwrap()
}

#[test]
fn oracle_reproduces_separating_example() {
    let beta = Assignment::with_atoms(2)
        .with_num("y", CondNat::from_u64s(&[1, 1]))
        .unwrap()
        .with_num("z", CondNat::from_u64s(&[1, 2]))
        .unwrap();
    let phi = parse("exists X. y in X & !(z in X)").unwrap();
    assert_eq!(common::brute(&phi, &beta, 3, 3), Event::from_bits(2, 0b10));
    assert_eq!(eval_formula(&phi, &beta, bounds(3, 3)).unwrap(), Event::from_bits(2, 0b10));
}

#[test]
fn glued_domains_have_expected_sizes() {
    assert_eq!(common::glued_nats(3, 2).len(), 8);
    assert_eq!(common::glued_sets(2, 3).len(), 64);
    let s = &common::glued_sets(2, 1)[2];
    assert_eq!(s.carrier(), Event::from_bits(2, 0b10));
    assert_eq!(s.fiber(1), Some(&Fiber::finite([0])));
}

#[test]
fn excluded_middle_under_set_quantifier() {
    let phi = parse("forall X. forall u. (u in X | !(u in X))").unwrap();
    let beta = Assignment::with_atoms(3);
    assert!(common::brute(&phi, &beta, 2, 2).is_full());
    assert!(eval_formula(&phi, &beta, bounds(2, 2)).unwrap().is_full());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn factorized_matches_glued_join(seed in any::<u64>(), k in 1usize..=3, b in 1u64..=2, extra in 0u32..=1) {
        let bs = b as u32 + extra;
        let (phi, beta, _) = generated(seed, k, b, bs);
        prop_assert_eq!(eval_formula(&phi, &beta, bounds(b, bs)).unwrap(), common::brute(&phi, &beta, b, bs));
    }

    #[test]
    fn stable_under_concatenation(seed in any::<u64>(), k in 1usize..=4, code in any::<u64>()) {
        let (b, bs) = (3, 3);
        let (phi, first, mut s) = generated(seed, k, b, bs);
        let vars = phi.free_vars();
        let second = s.assignment(k, &vars, &shape(b, bs));
        let p = partition(k, code, 2);
        let glued = glue(&[first.clone(), second.clone()], &vars, &p);
        let e0 = eval_formula(&phi, &first, bounds(b, bs)).unwrap();
        let e1 = eval_formula(&phi, &second, bounds(b, bs)).unwrap();
        let expected = (e0 & p.pieces()[0]) | (e1 & p.pieces()[1]);
        prop_assert_eq!(eval_formula(&phi, &glued, bounds(b, bs)).unwrap(), expected);
    }

    #[test]
    fn atom_local(seed in any::<u64>(), k in 2usize..=4, atom in 0usize..4) {
        let atom = atom % k;
        let (phi, beta, mut s) = generated(seed, k, 3, 3);
        let vars = phi.free_vars();
        let other = s.assignment(k, &vars, &shape(3, 3));
        let p = partition(k, 1 << atom, 2);
        // only `atom` takes values from `other`
        let changed = glue(&[beta.clone(), other], &vars, &p);
        let before = eval_formula(&phi, &beta, bounds(3, 3)).unwrap();
        let after = eval_formula(&phi, &changed, bounds(3, 3)).unwrap();
        let rest = p.pieces()[0];
        prop_assert_eq!(before & rest, after & rest);
    }

    #[test]
    fn maximum_principle(seed in any::<u64>(), k in 1usize..=4, set in any::<bool>()) {
        let mut s = Sampler::new(seed);
        let var = if set { "X" } else { "x" };
        let mut fs = FormulaShape::new(&["y"], &["Y"]);
        if set { fs.set_vars.push(var.into()) } else { fs.num_vars.push(var.into()) }
        let phi = Formula::exists(var, s.formula(&fs));
        let beta = s.assignment(k, &phi.free_vars(), &shape(3, 4));
        let bd = bounds(3, 4);
        let (w, event) = witness_exists(&phi, &beta, bd).unwrap();
        let body = match &phi { Formula::ExistsNum(_, g) | Formula::ExistsSet(_, g) => g, _ => unreachable!() };
        let beta = match w { Witness::Num(n) => beta.with_num(var, n), Witness::Set(x) => beta.with_set(var, x) }.unwrap();
        prop_assert_eq!(eval_formula(body, &beta, bd).unwrap(), event);
        prop_assert_eq!(eval_formula(&phi, &beta, bd).unwrap(), event);
    }

    #[test]
    fn negation_is_complement(seed in any::<u64>(), k in 1usize..=5) {
        let (phi, beta, _) = generated(seed, k, 3, 4);
        let e = eval_formula(&phi, &beta, bounds(3, 4)).unwrap();
        prop_assert_eq!(eval_formula(&Formula::not(phi), &beta, bounds(3, 4)).unwrap(), !e);
    }

    #[test]
    fn existentials_grow_with_the_bound(seed in any::<u64>(), k in 1usize..=3) {
        let mut s = Sampler::new(seed);
        let mut fs = FormulaShape::new(&["y", "x"], &["Y"]);
        fs.max_quantifiers = 0;
        let phi = Formula::exists("x", s.formula(&fs));
        let beta = s.assignment(k, &phi.free_vars(), &shape(4, 4));
        let mut last = Event::empty(k);
        for b in 1..=5 {
            let e = eval_formula(&phi, &beta, bounds(b, 5)).unwrap();
            prop_assert!(last.is_subset(&e));
            last = e;
        }
    }
}
