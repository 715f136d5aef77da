//! Reference implementations used as oracles by the integration tests.
#![allow(dead_code)]

use condmodel::{Assignment, CondNat, CondSet, Event, Fiber, Formula, Term};

/// Term value computed with the pointwise arithmetic of `CondNat`.
pub fn term(t: &Term, beta: &Assignment) -> CondNat {
    let k = beta.atom_count();
    match t {
        Term::Zero => CondNat::from_u64s(&vec![0; k]),
        Term::One => CondNat::from_u64s(&vec![1; k]),
        Term::Var(v) => beta.num(v).unwrap_or_else(|| panic!("unbound {v}")).clone(),
        Term::Plus(a, b) => term(a, beta).add(&term(b, beta)).unwrap(),
        Term::Times(a, b) => term(a, beta).mul(&term(b, beta)).unwrap(),
    }
}

/// Every glued conditional natural with values in `0..bound`.
pub fn glued_nats(k: usize, bound: u64) -> Vec<CondNat> {
    let total = bound.pow(k as u32);
    (0..total)
        .map(|mut code| {
            let vals: Vec<u64> = (0..k)
                .map(|_| {
                    let v = code % bound;
                    code /= bound;
                    v
                })
                .collect();
            CondNat::from_u64s(&vals)
        })
        .collect()
}

/// Every glued conditional set with fibers inside `{0..set_bound-1}`;
/// an empty fiber leaves the atom out of the carrier.
pub fn glued_sets(k: usize, set_bound: u32) -> Vec<CondSet> {
    let per = 1u64 << set_bound;
    let total = per.pow(k as u32);
    (0..total)
        .map(|mut code| {
            let fibers = (0..k)
                .map(|_| {
                    let m = code % per;
                    code /= per;
                    Fiber::from_mask(m)
                })
                .collect();
            CondSet::from_fibers(fibers)
        })
        .collect()
}

/// The global Boolean-valued semantics: quantifiers as joins and meets over
/// all glued objects of the bounded domain.
pub fn brute(f: &Formula, beta: &Assignment, bound: u64, set_bound: u32) -> Event {
    let k = beta.atom_count();
    let rec = |g: &Formula, b: &Assignment| brute(g, b, bound, set_bound);
    match f {
        Formula::Eq(a, b) => term(a, beta).eq_event(&term(b, beta)).unwrap(),
        Formula::Lt(a, b) => term(a, beta).lt_event(&term(b, beta)).unwrap(),
        Formula::In(t, s) => beta.set(s).unwrap_or_else(|| panic!("unbound {s}")).member(&term(t, beta)).unwrap(),
        Formula::Not(g) => !rec(g, beta),
        Formula::And(g, h) => rec(g, beta) & rec(h, beta),
        Formula::Or(g, h) => rec(g, beta) | rec(h, beta),
        Formula::Implies(g, h) => !rec(g, beta) | rec(h, beta),
        Formula::Iff(g, h) => {
            let (x, y) = (rec(g, beta), rec(h, beta));
            (x & y) | (!x & !y)
        }
        Formula::ExistsNum(x, g) => {
            glued_nats(k, bound).into_iter().fold(Event::empty(k), |acc, n| acc | rec(g, &beta.with_num(x, n).unwrap()))
        }
        Formula::ForallNum(x, g) => {
            glued_nats(k, bound).into_iter().fold(Event::full(k), |acc, n| acc & rec(g, &beta.with_num(x, n).unwrap()))
        }
        Formula::ExistsSet(x, g) => glued_sets(k, set_bound)
            .into_iter()
            .fold(Event::empty(k), |acc, s| acc | rec(g, &beta.with_set(x, s).unwrap())),
        Formula::ForallSet(x, g) => glued_sets(k, set_bound)
            .into_iter()
            .fold(Event::full(k), |acc, s| acc & rec(g, &beta.with_set(x, s).unwrap())),
    }
}
