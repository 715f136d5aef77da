//! Seeded random generation of spaces, assignments, terms and formulas.

use crate::eval::Assignment;
use crate::formula::{Formula, FreeVars, Term};
use crate::measure::MeasureSpace;
use crate::sets::{CondSet, Fiber};
use crate::values::CondNat;
use num_rational::BigRational;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// All randomness in the crate flows through one of these.
pub struct Sampler {
    rng: ChaCha8Rng,
}

/// Value ranges for sampled assignments.
#[derive(Clone, Copy, Debug)]
pub struct AssignmentShape {
    /// Number values are drawn from `0..num_below`.
    pub num_below: u64,
    /// Finite fibers are drawn from subsets of `{0..set_universe-1}`.
    pub set_universe: u32,
    /// Probability that a carrier atom receives a cofinite fiber.
    pub cofinite: f64,
}

/// Vocabulary and size limits for generated formulas.
#[derive(Clone, Debug)]
pub struct FormulaShape {
    pub num_vars: Vec<String>,
    pub set_vars: Vec<String>,
    pub bound_num: Vec<String>,
    pub bound_set: Vec<String>,
    pub max_depth: usize,
    pub max_quantifiers: usize,
    pub term_depth: usize,
    pub set_quantifiers: bool,
}

impl FormulaShape {
    pub fn new(num_vars: &[&str], set_vars: &[&str]) -> Self {
        Self {
            num_vars: num_vars.iter().map(|s| s.to_string()).collect(),
            set_vars: set_vars.iter().map(|s| s.to_string()).collect(),
            bound_num: vec!["u".into(), "v".into()],
            bound_set: vec!["U".into(), "V".into()],
            max_depth: 3,
            max_quantifiers: 2,
            term_depth: 2,
            set_quantifiers: true,
        }
    }
}

impl Sampler {
    pub fn new(seed: u64) -> Self {
        Self { rng: ChaCha8Rng::seed_from_u64(seed) }
    }

    pub fn rng(&mut self) -> &mut ChaCha8Rng {
        &mut self.rng
    }

    /// A space with `1..=max_atoms` atoms and weights `p/q`, `p, q ∈ 1..=9`.
    pub fn space(&mut self, max_atoms: usize) -> MeasureSpace {
        let k = self.rng.gen_range(1..=max_atoms.max(1));
        let weights = (0..k)
            .map(|_| {
                let p: i64 = self.rng.gen_range(1..=9);
                let q: i64 = self.rng.gen_range(1..=9);
                BigRational::new(p.into(), q.into())
            })
            .collect();
        MeasureSpace::new(weights).expect("positive weights")
    }

    pub fn cond_nat(&mut self, atom_count: usize, below: u64) -> CondNat {
        let values: Vec<u64> = (0..atom_count).map(|_| self.rng.gen_range(0..below.max(1))).collect();
        CondNat::from_u64s(&values)
    }

    /// Empty draws put the atom outside the carrier.
    pub fn cond_set(&mut self, atom_count: usize, shape: &AssignmentShape) -> CondSet {
        let fibers = (0..atom_count)
            .map(|_| {
                let mask = self.rng.gen_range(0..1u64 << shape.set_universe);
                if mask != 0 && self.rng.gen_bool(shape.cofinite) {
                    Fiber::from_mask(mask).complement()
                } else {
                    Fiber::from_mask(mask)
                }
            })
            .collect();
        CondSet::from_fibers(fibers)
    }

    /// Assigns every variable in `vars`.
    pub fn assignment(&mut self, atom_count: usize, vars: &FreeVars, shape: &AssignmentShape) -> Assignment {
        let mut beta = Assignment::with_atoms(atom_count);
        for v in &vars.num {
            let value = self.cond_nat(atom_count, shape.num_below);
            beta = beta.with_num(v, value).expect("matching atom count");
        }
        for v in &vars.set {
            let value = self.cond_set(atom_count, shape);
            beta = beta.with_set(v, value).expect("matching atom count");
        }
        beta
    }

    pub fn term(&mut self, vars: &[String], depth: usize) -> Term {
        if depth <= 1 || self.rng.gen_bool(0.45) {
            return match self.rng.gen_range(0..4) {
                0 => Term::Zero,
                1 => Term::One,
                _ => match vars.choose(&mut self.rng) {
                    Some(v) => Term::Var(v.clone()),
                    None => Term::One,
                },
            };
        }
        let a = self.term(vars, depth - 1);
        let b = self.term(vars, depth - 1);
        if self.rng.gen_bool(0.7) {
            Term::plus(a, b)
        } else {
            Term::times(a, b)
        }
    }

    pub fn formula(&mut self, shape: &FormulaShape) -> Formula {
        let mut nums = shape.num_vars.clone();
        let mut sets = shape.set_vars.clone();
        self.formula_in(shape, &mut nums, &mut sets, shape.max_depth, shape.max_quantifiers)
    }

    /// An atomic formula over the given variables.
    pub fn atom(&mut self, nums: &[String], sets: &[String], term_depth: usize) -> Formula {
        let roll = self.rng.gen_range(0..10);
        if roll < 3 && !sets.is_empty() {
            let s = sets.choose(&mut self.rng).expect("nonempty").clone();
            return Formula::In(self.term(nums, term_depth), s);
        }
        let a = self.term(nums, term_depth);
        let b = self.term(nums, term_depth);
        if roll < 7 {
            Formula::Eq(a, b)
        } else {
            Formula::Lt(a, b)
        }
    }

    fn formula_in(
        &mut self,
        shape: &FormulaShape,
        nums: &mut Vec<String>,
        sets: &mut Vec<String>,
        depth: usize,
        quantifiers: usize,
    ) -> Formula {
        if depth == 0 || self.rng.gen_bool(0.3) {
            return self.atom(nums, sets, shape.term_depth);
        }
        match self.rng.gen_range(0..9) {
            0 | 1 => Formula::not(self.formula_in(shape, nums, sets, depth - 1, quantifiers)),
            2 | 3 => {
                let a = self.formula_in(shape, nums, sets, depth - 1, quantifiers);
                let b = self.formula_in(shape, nums, sets, depth - 1, quantifiers);
                Formula::and(a, b)
            }
            4 => {
                let a = self.formula_in(shape, nums, sets, depth - 1, quantifiers);
                let b = self.formula_in(shape, nums, sets, depth - 1, quantifiers);
                match self.rng.gen_range(0..3) {
                    0 => Formula::or(a, b),
                    1 => Formula::implies(a, b),
                    _ => Formula::iff(a, b),
                }
            }
            _ if quantifiers > 0 => {
                let set_q = shape.set_quantifiers && !shape.bound_set.is_empty() && self.rng.gen_bool(0.35);
                let pool = if set_q { &shape.bound_set } else { &shape.bound_num };
                let Some(var) = pool.choose(&mut self.rng).cloned() else {
                    return self.atom(nums, sets, shape.term_depth);
                };
                let scope = if set_q { &mut *sets } else { &mut *nums };
                scope.push(var.clone());
                let body = self.formula_in(shape, nums, sets, depth - 1, quantifiers - 1);
                if set_q {
                    sets.pop()
                } else {
                    nums.pop()
                };
                if self.rng.gen_bool(0.5) {
                    Formula::exists(&var, body)
                } else {
                    Formula::forall(&var, body)
                }
            }
            _ => self.atom(nums, sets, shape.term_depth),
        }
    }

    pub fn coin(&mut self, p: f64) -> bool {
        self.rng.gen_bool(p)
    }

    pub fn below(&mut self, n: usize) -> usize {
        self.rng.gen_range(0..n.max(1))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn seeded_generation_is_reproducible() {
        let shape = FormulaShape::new(&["y", "z"], &["Y"]);
        let a: Vec<_> = {
            let mut s = Sampler::new(7);
            (0..20).map(|_| s.formula(&shape)).collect()
        };
        let b: Vec<_> = {
            let mut s = Sampler::new(7);
            (0..20).map(|_| s.formula(&shape)).collect()
        };
        assert_eq!(a, b);
    }

    #[test]
    fn generated_formulas_respect_limits() {
        let shape = FormulaShape::new(&["y"], &["Y"]);
        let mut s = Sampler::new(1);
        for _ in 0..200 {
            let f = s.formula(&shape);
            assert!(f.quantifier_depth() <= shape.max_quantifiers);
            let free = f.free_vars();
            assert!(free.num.iter().all(|v| v == "y"));
            assert!(free.set.iter().all(|v| v == "Y"));
        }
    }

    #[test]
    fn spaces_have_positive_weights() {
        let mut s = Sampler::new(3);
        for _ in 0..50 {
            let space = s.space(5);
            assert!((1..=5).contains(&space.atom_count()));
        }
    }
}
