//! The pairing function `(i, j) ↦ (i + j)² + i` and its inverse.

use crate::values::CondNat;
use num_bigint::BigUint;
use num_traits::ToPrimitive;

pub fn encode(i: &BigUint, j: &BigUint) -> BigUint {
    let s = i + j;
    &s * &s + i
}

/// Inverse of [`encode`]; `None` if `code` is not in its image.
pub fn decode(code: &BigUint) -> Option<(BigUint, BigUint)> {
    let s = code.sqrt();
    let i = code - &s * &s;
    if i > s {
        return None;
    }
    let j = &s - &i;
    Some((i, j))
}

pub(crate) fn encode_u64(i: u64, j: u64) -> Option<u64> {
    encode(&i.into(), &j.into()).to_u64()
}

/// Pointwise pairing of two conditional naturals; commutes with concatenation.
pub fn encode_cond(x: &CondNat, y: &CondNat) -> Option<CondNat> {
    if x.atom_count() != y.atom_count() {
        return None;
    }
    Some(CondNat::from_values(x.values().iter().zip(y.values()).map(|(i, j)| encode(i, j)).collect()))
}
