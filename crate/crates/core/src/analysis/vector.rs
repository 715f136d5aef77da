use super::AnalysisError;
use crate::measure::Partition;
use crate::numio::rational_strings;
use crate::values::{CondNat, CondReal};
use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(transparent)]
struct Coords(#[serde(with = "rational_strings")] Vec<BigRational>);

/// An element of `L⁰(ℝ)ⁿ` with a conditional dimension `n`: atom `a` holds
/// `n_a` coordinates.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(from = "Vec<Coords>", into = "Vec<Coords>")]
pub struct RaggedVec {
    coords: Vec<Vec<BigRational>>,
}

impl From<Vec<Coords>> for RaggedVec {
    fn from(c: Vec<Coords>) -> Self {
        Self { coords: c.into_iter().map(|c| c.0).collect() }
    }
}

impl From<RaggedVec> for Vec<Coords> {
    fn from(v: RaggedVec) -> Self {
        v.coords.into_iter().map(Coords).collect()
    }
}

impl RaggedVec {
    pub fn new(coords: Vec<Vec<BigRational>>) -> Self {
        Self { coords }
    }

    pub fn from_ints(coords: &[&[i64]]) -> Self {
        Self::new(coords.iter().map(|c| c.iter().map(|&v| BigRational::from_integer(v.into())).collect()).collect())
    }

    pub fn atom_count(&self) -> usize {
        self.coords.len()
    }

    pub fn dim(&self) -> CondNat {
        CondNat::from_values(self.coords.iter().map(|c| BigUint::from(c.len())).collect())
    }

    pub fn at(&self, atom: usize) -> &[BigRational] {
        &self.coords[atom]
    }

    pub fn coords(&self) -> &[Vec<BigRational>] {
        &self.coords
    }

    /// `Σ_k x_k|A_k`.
    pub fn concat(xs: &[RaggedVec], partition: &Partition) -> Result<Self, AnalysisError> {
        let k = partition.atom_count();
        if xs.len() != partition.len() {
            return Err(AnalysisError::DimensionMismatch { atom: 0, expected: partition.len(), found: xs.len() });
        }
        if let Some(x) = xs.iter().find(|x| x.atom_count() != k) {
            return Err(AnalysisError::SpaceMismatch { left: x.atom_count(), right: k });
        }
        let coords =
            (0..k).map(|a| xs[partition.piece_of(a).expect("partition covers every atom")].coords[a].clone()).collect();
        Ok(Self { coords })
    }
}

/// Rational bounds on the norm at every atom.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct NormEnclosure {
    pub lower: CondReal,
    pub upper: CondReal,
}

impl NormEnclosure {
    pub fn is_exact(&self) -> bool {
        self.lower == self.upper
    }
}

/// `‖x‖ = Σ_k √(x₁² + … + x_{n_k}²)|A_k`, enclosed to within `tol`.
pub fn euclid_norm(x: &RaggedVec, tol: &BigRational) -> Result<NormEnclosure, AnalysisError> {
    if !tol.is_positive() {
        return Err(AnalysisError::NonpositiveTolerance);
    }
    let (lower, upper) = x
        .coords
        .iter()
        .map(|c| {
            let sq = c.iter().fold(BigRational::zero(), |acc, v| acc + v * v);
            sqrt_enclosure(&sq, tol)
        })
        .unzip();
    Ok(NormEnclosure { lower: CondReal::from_values(lower), upper: CondReal::from_values(upper) })
}

/// `[l, u]` with `l ≤ √r ≤ u` and `u − l ≤ tol`; `l = u` when `r` is the
/// square of a rational.
pub fn sqrt_enclosure(r: &BigRational, tol: &BigRational) -> (BigRational, BigRational) {
    assert!(!r.is_negative(), "square root of a negative rational");
    let p = r.numer().magnitude();
    let q = r.denom().magnitude();
    let (sp, sq) = (p.sqrt(), q.sqrt());
    if &(&sp * &sp) == p && &(&sq * &sq) == q {
        let exact = BigRational::new(BigInt::from(sp), BigInt::from(sq));
        return (exact.clone(), exact);
    }
    // √(p/q) = √(p·q·s²) / (q·s); pick s = 2^e with 1/(q·s) ≤ tol
    let mut scale = BigUint::one();
    let tol_num = tol.numer().magnitude();
    let tol_den = tol.denom().magnitude();
    while &(q * &scale * tol_num) < tol_den {
        scale <<= 1u32;
    }
    let m = (p * q * &scale * &scale).sqrt();
    let den = BigInt::from(q * &scale);
    let lower = BigRational::new(BigInt::from(m.clone()), den.clone());
    let upper = BigRational::new(BigInt::from(m + 1u32), den);
    (lower, upper)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::measure::MeasureSpace;
    use proptest::prelude::*;

    fn q(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    /// Bisection on `[0, max(1, r)]` until the bracket is narrower than `tol`.
    fn bisect(r: &BigRational, tol: &BigRational) -> (BigRational, BigRational) {
        let mut lo = BigRational::zero();
        let mut hi = if r > &BigRational::one() { r.clone() } else { BigRational::one() };
        while &(&hi - &lo) > tol {
            let mid = (&lo + &hi) / BigRational::from_integer(2.into());
            if &(&mid * &mid) <= r {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        (lo, hi)
    }

    #[test]
    fn norm_examples() {
        let tol = q(1, 1_000_000);
        let n = euclid_norm(&RaggedVec::from_ints(&[&[3], &[3, 4]]), &tol).unwrap();
        assert!(n.is_exact());
        assert_eq!(n.lower, CondReal::from_ratios(&[(3, 1), (5, 1)]));

        let n = euclid_norm(&RaggedVec::from_ints(&[&[0], &[0, 0]]), &tol).unwrap();
        assert_eq!(n.upper, CondReal::from_ratios(&[(0, 1), (0, 1)]));

        let n = euclid_norm(&RaggedVec::from_ints(&[&[1], &[1, 1]]), &tol).unwrap();
        assert_eq!(n.lower.at(0), &q(1, 1));
        assert_eq!(n.upper.at(0), &q(1, 1));
        let (l, u) = (n.lower.at(1), n.upper.at(1));
        assert!(l <= &q(1_414_214, 1_000_000) && u >= &q(1_414_213, 1_000_000));
        assert!(u - l <= tol);
        let (bl, bu) = bisect(&q(2, 1), &tol);
        assert!(l <= &bu && &bl <= u);
    }

    #[test]
    fn rejects_nonpositive_tolerance() {
        let x = RaggedVec::from_ints(&[&[1]]);
        assert_eq!(euclid_norm(&x, &q(0, 1)), Err(AnalysisError::NonpositiveTolerance));
    }

    #[test]
    fn concat_matches_per_piece_norms() {
        let space = MeasureSpace::uniform(3).unwrap();
        let part = space.validate_partition(vec![space.event(&[0, 2]).unwrap(), space.event(&[1]).unwrap()]).unwrap();
        let x = RaggedVec::from_ints(&[&[3, 4], &[1], &[5, 12]]);
        let y = RaggedVec::from_ints(&[&[6], &[2, 2, 1], &[0]]);
        let glued = RaggedVec::concat(&[x.clone(), y.clone()], &part).unwrap();
        assert_eq!(glued.dim(), CondNat::from_u64s(&[2, 3, 2]));
        let tol = q(1, 1000);
        let parts = [euclid_norm(&x, &tol).unwrap().upper, euclid_norm(&y, &tol).unwrap().upper];
        assert_eq!(euclid_norm(&glued, &tol).unwrap().upper, CondReal::concat(&parts, &part).unwrap());
    }

    #[test]
    fn json_shape() {
        let x = RaggedVec::new(vec![vec![q(1, 2)], vec![q(-3, 1), q(0, 1)]]);
        let json = serde_json::to_string(&x).unwrap();
        assert_eq!(json, r#"[["1/2"],["-3","0"]]"#);
        assert_eq!(serde_json::from_str::<RaggedVec>(&json).unwrap(), x);
    }

    proptest! {
        #[test]
        fn enclosure_brackets_the_root(n in 0i64..5000, d in 1i64..500, t in 1i64..6) {
            let r = q(n, d);
            let tol = q(1, 10i64.pow(t as u32));
            let (l, u) = sqrt_enclosure(&r, &tol);
            prop_assert!(&l * &l <= r && r <= &u * &u);
            prop_assert!(&u - &l <= tol);
            let (bl, bu) = bisect(&r, &tol);
            prop_assert!(l <= bu && bl <= u);
        }

        #[test]
        fn squares_are_exact(n in 0i64..3000, d in 1i64..300) {
            let (l, u) = sqrt_enclosure(&(q(n, d) * q(n, d)), &q(1, 10));
            prop_assert_eq!(&l, &u);
            prop_assert_eq!(l, q(n, d));
        }
    }
}
