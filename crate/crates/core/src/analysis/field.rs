use super::{AnalysisError, Expr, RaggedVec};
use crate::measure::Event;
use crate::numio::format_rational;
use crate::values::CondReal;
use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive, Zero};
use serde::Serialize;

/// Largest grid enumerated for a single atom.
pub const MAX_GRID_POINTS: usize = 1 << 20;

/// A closed box `[lo₁, hi₁] × … × [loₙ, hiₙ]` with rational corners.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GridBox {
    pub lo: Vec<BigRational>,
    pub hi: Vec<BigRational>,
}

impl GridBox {
    pub fn new(lo: Vec<BigRational>, hi: Vec<BigRational>) -> Option<Self> {
        (lo.len() == hi.len() && lo.iter().zip(&hi).all(|(l, h)| l <= h)).then_some(Self { lo, hi })
    }

    pub fn dim(&self) -> usize {
        self.lo.len()
    }

    pub fn contains(&self, p: &[BigRational]) -> bool {
        p.len() == self.dim() && p.iter().zip(&self.lo).zip(&self.hi).all(|((x, l), h)| l <= x && x <= h)
    }

    /// Points `lo + t·δ` that stay inside the box.
    fn axis(&self, i: usize, delta: &BigRational) -> Vec<BigRational> {
        let steps = ((&self.hi[i] - &self.lo[i]) / delta).floor().to_integer();
        let steps = steps.to_usize().unwrap_or(usize::MAX);
        let mut out = Vec::with_capacity(steps.min(MAX_GRID_POINTS) + 1);
        let mut x = self.lo[i].clone();
        for _ in 0..=steps.min(MAX_GRID_POINTS) {
            out.push(x.clone());
            x += delta;
        }
        out
    }
}

/// The compact set at one atom: a union of boxes with grid step `δ`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Slice {
    pub boxes: Vec<GridBox>,
    pub delta: BigRational,
}

impl Slice {
    pub fn new(boxes: Vec<GridBox>, delta: BigRational) -> Option<Self> {
        let dim = boxes.first()?.dim();
        (delta.is_positive() && boxes.iter().all(|b| b.dim() == dim)).then_some(Self { boxes, delta })
    }

    pub fn dim(&self) -> usize {
        self.boxes[0].dim()
    }

    pub fn contains(&self, p: &[BigRational]) -> bool {
        self.boxes.iter().any(|b| b.contains(p))
    }

    pub fn grid_size(&self) -> usize {
        self.boxes
            .iter()
            .map(|b| {
                (0..b.dim())
                    .map(|i| {
                        let steps = ((&b.hi[i] - &b.lo[i]) / &self.delta).floor().to_integer();
                        steps.to_usize().map_or(usize::MAX, |s| s.saturating_add(1))
                    })
                    .fold(1usize, usize::saturating_mul)
            })
            .fold(0usize, usize::saturating_add)
    }

    /// The grid points of every box, sorted lexicographically, without repeats.
    pub fn grid(&self) -> Vec<Vec<BigRational>> {
        let mut points = Vec::new();
        for b in &self.boxes {
            let axes: Vec<_> = (0..b.dim()).map(|i| b.axis(i, &self.delta)).collect();
            let mut cur: Vec<Vec<BigRational>> = vec![Vec::new()];
            for axis in &axes {
                cur = cur
                    .into_iter()
                    .flat_map(|p| {
                        axis.iter().map(move |x| {
                            let mut q = p.clone();
                            q.push(x.clone());
                            q
                        })
                    })
                    .collect();
            }
            points.extend(cur);
        }
        points.sort();
        points.dedup();
        points
    }
}

/// A compact-valued map, one [`Slice`] per atom.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CompactField {
    atoms: Vec<Slice>,
}

impl CompactField {
    pub fn new(atoms: Vec<Slice>) -> Self {
        Self { atoms }
    }

    pub fn atom_count(&self) -> usize {
        self.atoms.len()
    }

    pub fn slice(&self, atom: usize) -> &Slice {
        &self.atoms[atom]
    }

    pub fn slices(&self) -> &[Slice] {
        &self.atoms
    }
}

/// A cost function per atom.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Integrand {
    atoms: Vec<Expr>,
}

impl Integrand {
    pub fn new(atoms: Vec<Expr>) -> Self {
        Self { atoms }
    }

    pub fn atom_count(&self) -> usize {
        self.atoms.len()
    }

    pub fn at(&self, atom: usize) -> &Expr {
        &self.atoms[atom]
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Selection {
    pub point: RaggedVec,
    pub value: CondReal,
}

fn point_strings(p: &[BigRational]) -> Vec<String> {
    p.iter().map(format_rational).collect()
}

/// A grid minimizer of `f` over `W` at every atom, lexicographically
/// smallest among ties.
pub fn argmin(w: &CompactField, f: &Integrand) -> Result<Selection, AnalysisError> {
    if w.atom_count() != f.atom_count() {
        return Err(AnalysisError::SpaceMismatch { left: w.atom_count(), right: f.atom_count() });
    }
    let mut points = Vec::with_capacity(w.atom_count());
    let mut values = Vec::with_capacity(w.atom_count());
    for (a, slice) in w.atoms.iter().enumerate() {
        let expr = f.at(a);
        if expr.arity() > slice.dim() {
            return Err(AnalysisError::DimensionMismatch { atom: a, expected: slice.dim(), found: expr.arity() });
        }
        let mut best: Option<(Vec<BigRational>, BigRational)> = None;
        for p in slice.grid() {
            let v = expr.eval(&p).map_err(|_| AnalysisError::EvaluationError { atom: a, point: point_strings(&p) })?;
            if best.as_ref().is_none_or(|(_, b)| &v < b) {
                best = Some((p, v));
            }
        }
        let (p, v) = best.expect("slices are nonempty");
        points.push(p);
        values.push(v);
    }
    Ok(Selection { point: RaggedVec::new(points), value: CondReal::from_values(values) })
}

/// `{a : x_a ∈ W_a}`.
pub fn selections_contain(w: &CompactField, x: &RaggedVec) -> Result<Event, AnalysisError> {
    if w.atom_count() != x.atom_count() {
        return Err(AnalysisError::SpaceMismatch { left: w.atom_count(), right: x.atom_count() });
    }
    Ok(Event::from_fn(w.atom_count(), |a| w.atoms[a].contains(x.at(a))))
}

/// `{y : ‖y − center‖ < radius}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OpenBall {
    pub center: Vec<BigRational>,
    pub radius: BigRational,
}

impl OpenBall {
    pub fn contains(&self, p: &[BigRational]) -> bool {
        if p.len() != self.center.len() || !self.radius.is_positive() {
            return false;
        }
        let sq = p.iter().zip(&self.center).fold(BigRational::zero(), |acc, (x, c)| acc + (x - c) * (x - c));
        sq < &self.radius * &self.radius
    }
}

/// Greedy subcover: repeatedly takes the ball covering the most uncovered
/// points (lowest index on ties). `None` if `balls` do not cover `points`.
pub fn finite_subcover(points: &[Vec<BigRational>], balls: &[OpenBall]) -> Option<Vec<usize>> {
    let hits: Vec<Vec<bool>> = balls.iter().map(|b| points.iter().map(|p| b.contains(p)).collect()).collect();
    let mut covered = vec![false; points.len()];
    let mut chosen = Vec::new();
    while covered.iter().any(|c| !c) {
        let gain = |i: usize| hits[i].iter().zip(&covered).filter(|(h, c)| **h && !**c).count();
        let best = (0..balls.len()).max_by_key(|&i| (gain(i), std::cmp::Reverse(i)))?;
        if gain(best) == 0 {
            return None;
        }
        for (c, h) in covered.iter_mut().zip(&hits[best]) {
            *c |= *h;
        }
        chosen.push(best);
    }
    chosen.sort_unstable();
    Some(chosen)
}

/// A finite subcover of each atom's grid from that atom's balls.
pub fn heine_borel(w: &CompactField, covers: &[Vec<OpenBall>]) -> Result<Vec<Option<Vec<usize>>>, AnalysisError> {
    if w.atom_count() != covers.len() {
        return Err(AnalysisError::SpaceMismatch { left: w.atom_count(), right: covers.len() });
    }
    Ok(w.atoms.iter().zip(covers).map(|(s, balls)| finite_subcover(&s.grid(), balls)).collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    fn interval(lo: BigRational, hi: BigRational, delta: BigRational) -> Slice {
        Slice::new(vec![GridBox::new(vec![lo], vec![hi]).unwrap()], delta).unwrap()
    }

    fn unit_field(k: usize, delta: BigRational) -> CompactField {
        CompactField::new((0..k).map(|_| interval(q(-1, 1), q(1, 1), delta.clone())).collect())
    }

    fn integrand(exprs: &[&str]) -> Integrand {
        Integrand::new(exprs.iter().map(|e| Expr::parse(e).unwrap()).collect())
    }

    #[test]
    fn argmin_examples() {
        let w = unit_field(2, q(1, 1));
        assert_eq!(w.slice(0).grid(), vec![vec![q(-1, 1)], vec![q(0, 1)], vec![q(1, 1)]]);

        let s = argmin(&w, &integrand(&["x^2", "(x - 1)^2"])).unwrap();
        assert_eq!(s.point, RaggedVec::from_ints(&[&[0], &[1]]));
        assert_eq!(s.value, CondReal::from_ratios(&[(0, 1), (0, 1)]));

        let s = argmin(&w, &integrand(&["x", "x"])).unwrap();
        assert_eq!(s.point, RaggedVec::from_ints(&[&[-1], &[-1]]));
        assert_eq!(s.value, CondReal::from_ratios(&[(-1, 1), (-1, 1)]));

        let w = CompactField::new(vec![interval(q(-1, 1), q(1, 1), q(1, 3)), interval(q(-1, 1), q(1, 1), q(1, 1))]);
        let s = argmin(&w, &integrand(&["abs(x - 1/3)", "x^2"])).unwrap();
        assert_eq!(s.point.at(0), &[q(1, 3)]);
        assert_eq!(s.value.at(0), &q(0, 1));
        let brute = w.slice(0).grid().iter().map(|p| (q(1, 3) - &p[0]).abs()).min().unwrap();
        assert_eq!(&brute, s.value.at(0));
    }

    #[test]
    fn ties_break_lexicographically() {
        let w = unit_field(1, q(1, 2));
        let s = argmin(&w, &integrand(&["x^2 * (x^2 - 1)^2 + 1"])).unwrap();
        assert_eq!(s.point.at(0), &[q(-1, 1)]);

        let square = GridBox::new(vec![q(-1, 1), q(-1, 1)], vec![q(1, 1), q(1, 1)]).unwrap();
        let w = CompactField::new(vec![Slice::new(vec![square], q(1, 1)).unwrap()]);
        let s = argmin(&w, &integrand(&["-(x1^2 + x2^2)"])).unwrap();
        assert_eq!(s.point.at(0), &[q(-1, 1), q(-1, 1)]);
    }

    #[test]
    fn division_by_zero_names_the_point() {
        let w = unit_field(2, q(1, 1));
        let err = argmin(&w, &integrand(&["x", "1 / x"])).unwrap_err();
        assert_eq!(err, AnalysisError::EvaluationError { atom: 1, point: vec!["0".into()] });
    }

    #[test]
    fn selections() {
        let w = CompactField::new(vec![interval(q(0, 1), q(1, 1), q(1, 2)), interval(q(2, 1), q(3, 1), q(1, 2))]);
        let x = RaggedVec::new(vec![vec![q(1, 2)], vec![q(5, 2)]]);
        assert!(selections_contain(&w, &x).unwrap().is_full());
        let x = RaggedVec::new(vec![vec![q(2, 1)], vec![q(5, 2)]]);
        assert_eq!(selections_contain(&w, &x).unwrap(), Event::from_atoms(2, [1]).unwrap());
    }

    #[test]
    fn union_of_boxes_grid() {
        let b1 = GridBox::new(vec![q(0, 1)], vec![q(1, 1)]).unwrap();
        let b2 = GridBox::new(vec![q(1, 1)], vec![q(5, 2)]).unwrap();
        let s = Slice::new(vec![b1, b2], q(1, 1)).unwrap();
        assert_eq!(s.grid(), vec![vec![q(0, 1)], vec![q(1, 1)], vec![q(2, 1)]]);
        assert_eq!(s.grid_size(), 4);
    }

    #[test]
    fn greedy_subcover() {
        let w = unit_field(2, q(1, 2));
        let ball = |c: i64, r: i64| OpenBall { center: vec![q(c, 2)], radius: q(r, 4) };
        let covers = vec![vec![ball(-2, 3), ball(0, 3), ball(2, 3), ball(0, 10)], vec![ball(-2, 1), ball(2, 1)]];
        let sub = heine_borel(&w, &covers).unwrap();
        assert_eq!(sub[0], Some(vec![3]));
        assert_eq!(sub[1], None);
        let grid = w.slice(0).grid();
        let chosen = sub[0].as_ref().unwrap();
        assert!(grid.iter().all(|p| chosen.iter().any(|&i| covers[0][i].contains(p))));
    }
}
