//! String encodings for exact numbers: `"3"`, `"-2/7"`.

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, Zero};
use std::str::FromStr;

/// Parses `"p/q"`, `"p"` or a decimal like `"0.25"` into an exact rational.
pub fn parse_rational(text: &str) -> Option<BigRational> {
    let text = text.trim();
    if text.is_empty() {
        return None;
    }
    if let Some((num, den)) = text.split_once('/') {
        let num = BigInt::from_str(num.trim()).ok()?;
        let den = BigInt::from_str(den.trim()).ok()?;
        if den.is_zero() {
            return None;
        }
        return Some(BigRational::new(num, den));
    }
    if let Some((int, frac)) = text.split_once('.') {
        let negative = int.trim_start().starts_with('-');
        if frac.is_empty() || !frac.bytes().all(|b| b.is_ascii_digit()) {
            return None;
        }
        let int_part = if int == "-" || int.is_empty() { BigInt::zero() } else { BigInt::from_str(int).ok()? };
        let scale = num_traits::pow(BigInt::from(10u32), frac.len());
        let frac_part = BigInt::from_str(frac).ok()?;
        let magnitude = int_part.magnitude().clone();
        let whole = BigInt::from(magnitude) * &scale + frac_part;
        let signed = if negative { -whole } else { whole };
        return Some(BigRational::new(signed, scale));
    }
    BigInt::from_str(text).ok().map(BigRational::from_integer)
}

pub fn parse_natural(text: &str) -> Option<BigUint> {
    BigUint::from_str(text.trim()).ok()
}

/// Canonical text form: integers print without a denominator.
pub fn format_rational(value: &BigRational) -> String {
    if value.denom().is_one() {
        value.numer().to_string()
    } else {
        format!("{}/{}", value.numer(), value.denom())
    }
}

pub(crate) mod rational_strings {
    use super::*;
    use serde::de::Error as _;
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(values: &[BigRational], s: S) -> Result<S::Ok, S::Error> {
        s.collect_seq(values.iter().map(format_rational))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<BigRational>, D::Error> {
        let raw = Vec::<String>::deserialize(d)?;
        raw.iter().map(|t| parse_rational(t).ok_or_else(|| D::Error::custom(format!("bad rational `{t}`")))).collect()
    }
}

pub(crate) mod natural_strings {
    use super::*;
    use serde::de::Error as _;
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(values: &[BigUint], s: S) -> Result<S::Ok, S::Error> {
        s.collect_seq(values.iter().map(|v| v.to_string()))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<BigUint>, D::Error> {
        let raw = Vec::<String>::deserialize(d)?;
        raw.iter().map(|t| parse_natural(t).ok_or_else(|| D::Error::custom(format!("bad natural `{t}`")))).collect()
    }
}
