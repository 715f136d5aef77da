//! Conditional numbers: elements of `L⁰(ℕ)` and `L⁰(ℚ)` stored as one exact
//! value per atom.

use crate::measure::{Event, MeasureSpace, Partition};
use crate::numio;
use num_bigint::BigUint;
use num_rational::BigRational;
use num_traits::Zero;
use serde::{Deserialize, Serialize};
use std::cmp::Ordering;
use std::fmt;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ValueError {
    #[error("values live on different spaces ({left} vs {right} atoms)")]
    SpaceMismatch { left: usize, right: usize },
    #[error("{values} values glued along a partition of {pieces} pieces")]
    LengthMismatch { values: usize, pieces: usize },
    #[error("division by zero at atoms {0}")]
    DivisionByZeroAtAtom(Event),
    #[error("operation {0:?} is not defined on L⁰(ℕ)")]
    UnsupportedOp(ArithOp),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ArithOp {
    Add,
    Mul,
    Sub,
    Div,
}

/// The three order events of a comparison; they always partition `Ω`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Comparison {
    pub lt: Event,
    pub eq: Event,
    pub gt: Event,
}

impl Comparison {
    pub fn into_partition(self, space: &MeasureSpace) -> Partition {
        space.validate_partition(vec![self.lt, self.eq, self.gt]).expect("order events partition Ω")
    }
}

macro_rules! conditional_value {
    ($name:ident, $scalar:ty) => {
        impl $name {
            pub fn from_values(values: Vec<$scalar>) -> Self {
                Self { values }
            }

            pub fn constant(space: &MeasureSpace, value: impl Into<$scalar>) -> Self {
                Self { values: vec![value.into(); space.atom_count()] }
            }

            pub fn atom_count(&self) -> usize {
                self.values.len()
            }

            pub fn values(&self) -> &[$scalar] {
                &self.values
            }

            pub fn at(&self, atom: usize) -> &$scalar {
                &self.values[atom]
            }

            fn same_space(&self, other: &Self) -> Result<(), ValueError> {
                if self.values.len() != other.values.len() {
                    return Err(ValueError::SpaceMismatch { left: self.values.len(), right: other.values.len() });
                }
                Ok(())
            }

            /// `Σ_k xs[k] | A_k`: copies each value on its partition piece.
            pub fn concat(xs: &[Self], partition: &Partition) -> Result<Self, ValueError> {
                if xs.len() != partition.len() {
                    return Err(ValueError::LengthMismatch { values: xs.len(), pieces: partition.len() });
                }
                let k = partition.atom_count();
                if let Some(bad) = xs.iter().find(|x| x.atom_count() != k) {
                    return Err(ValueError::SpaceMismatch { left: k, right: bad.atom_count() });
                }
                let values = (0..k)
                    .map(|a| {
                        let piece = partition.piece_of(a).expect("partition covers Ω");
                        xs[piece].values[a].clone()
                    })
                    .collect();
                Ok(Self { values })
            }

            /// The value agreeing with `self` on `event` and with `other` elsewhere.
            pub fn glue(&self, event: &Event, other: &Self) -> Result<Self, ValueError> {
                self.same_space(other)?;
                let values = (0..self.atom_count())
                    .map(|a| if event.contains(a) { &self.values[a] } else { &other.values[a] }.clone())
                    .collect();
                Ok(Self { values })
            }

            pub fn compare(&self, other: &Self) -> Result<Comparison, ValueError> {
                self.same_space(other)?;
                let k = self.atom_count();
                let ord = |a: usize| self.values[a].cmp(&other.values[a]);
                Ok(Comparison {
                    lt: Event::from_fn(k, |a| ord(a) == Ordering::Less),
                    eq: Event::from_fn(k, |a| ord(a) == Ordering::Equal),
                    gt: Event::from_fn(k, |a| ord(a) == Ordering::Greater),
                })
            }

            /// The agreement event `{x = y}`.
            pub fn eq_event(&self, other: &Self) -> Result<Event, ValueError> {
                Ok(self.compare(other)?.eq)
            }

            /// The event `{x < y}`.
            pub fn lt_event(&self, other: &Self) -> Result<Event, ValueError> {
                Ok(self.compare(other)?.lt)
            }

            fn zip_with(&self, other: &Self, f: impl Fn(&$scalar, &$scalar) -> $scalar) -> Result<Self, ValueError> {
                self.same_space(other)?;
                Ok(Self { values: self.values.iter().zip(&other.values).map(|(x, y)| f(x, y)).collect() })
            }

            pub fn add(&self, other: &Self) -> Result<Self, ValueError> {
                self.zip_with(other, |x, y| x + y)
            }

            pub fn mul(&self, other: &Self) -> Result<Self, ValueError> {
                self.zip_with(other, |x, y| x * y)
            }
        }

        impl fmt::Display for $name {
            fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                write!(f, "(")?;
                for (i, v) in self.values.iter().enumerate() {
                    if i > 0 {
                        write!(f, ",")?;
                    }
                    write!(f, "{v}")?;
                }
                write!(f, ")")
            }
        }
    };
}

/// An element of `L⁰(ℕ)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct CondNat {
    #[serde(with = "numio::natural_strings")]
    values: Vec<BigUint>,
}

conditional_value!(CondNat, BigUint);

impl CondNat {
    pub fn from_u64s(values: &[u64]) -> Self {
        Self { values: values.iter().map(|&v| BigUint::from(v)).collect() }
    }

    pub fn zero(space: &MeasureSpace) -> Self {
        Self::constant(space, 0u32)
    }

    pub fn one(space: &MeasureSpace) -> Self {
        Self::constant(space, 1u32)
    }

    pub fn arith(op: ArithOp, x: &Self, y: &Self) -> Result<Self, ValueError> {
        match op {
            ArithOp::Add => x.add(y),
            ArithOp::Mul => x.mul(y),
            ArithOp::Sub | ArithOp::Div => Err(ValueError::UnsupportedOp(op)),
        }
    }

    pub fn to_real(&self) -> CondReal {
        CondReal { values: self.values.iter().map(|v| BigRational::from_integer(v.clone().into())).collect() }
    }
}

/// An element of `L⁰(ℚ)`, standing in for `L⁰(ℝ)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct CondReal {
    #[serde(with = "numio::rational_strings")]
    values: Vec<BigRational>,
}

conditional_value!(CondReal, BigRational);

impl CondReal {
    pub fn from_ratios(values: &[(i64, i64)]) -> Self {
        Self { values: values.iter().map(|&(n, d)| BigRational::new(n.into(), d.into())).collect() }
    }

    pub fn sub(&self, other: &Self) -> Result<Self, ValueError> {
        self.zip_with(other, |x, y| x - y)
    }

    pub fn div(&self, other: &Self) -> Result<Self, ValueError> {
        self.same_space(other)?;
        let zeros = Event::from_fn(self.atom_count(), |a| other.values[a].is_zero());
        if !zeros.is_empty() {
            return Err(ValueError::DivisionByZeroAtAtom(zeros));
        }
        self.zip_with(other, |x, y| x / y)
    }

    pub fn abs(&self) -> Self {
        use num_traits::Signed;
        Self { values: self.values.iter().map(|v| v.abs()).collect() }
    }

    pub fn arith(op: ArithOp, x: &Self, y: &Self) -> Result<Self, ValueError> {
        match op {
            ArithOp::Add => x.add(y),
            ArithOp::Mul => x.mul(y),
            ArithOp::Sub => x.sub(y),
            ArithOp::Div => x.div(y),
        }
    }

    /// True iff every value is an integer (membership in `L⁰(ℤ)`).
    pub fn is_integral(&self) -> bool {
        self.values.iter().all(|v| v.is_integer())
    }

    /// Formats each value as `"p/q"`.
    pub fn to_strings(&self) -> Vec<String> {
        self.values.iter().map(numio::format_rational).collect()
    }
}
