//! Scalar abstraction shared by the statistical code, plus exact count/total
//! fractions used wherever a value is "n of m messages".

use std::fmt::{Debug, Display};

use num_integer::Integer;
use num_traits::{Float, FromPrimitive, NumCast};
use serde::de::DeserializeOwned;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

/// Floating point scalar used for means, dispersions and durations: `f32` or `f64`.
pub trait Scalar:
    Float + FromPrimitive + NumCast + Debug + Display + Default + Send + Sync + Serialize + DeserializeOwned + 'static
{
    fn of_u64(v: u64) -> Self {
        <Self as NumCast>::from(v).expect("u64 is representable in every float type")
    }

    fn of_u128(v: u128) -> Self {
        <Self as NumCast>::from(v).expect("u128 is representable in every float type")
    }

    fn to_f64_lossy(self) -> f64 {
        self.to_f64().unwrap_or(f64::NAN)
    }
}

impl Scalar for f32 {}
impl Scalar for f64 {}

/// Arithmetic mean; `None` for an empty slice.
pub fn mean<F: Scalar>(values: &[F]) -> Option<F> {
    if values.is_empty() {
        return None;
    }
    let sum = values.iter().fold(F::zero(), |acc, &v| acc + v);
    Some(sum / F::of_u64(values.len() as u64))
}

/// Population standard deviation (divides by `n`); `None` for an empty slice.
pub fn population_stddev<F: Scalar>(values: &[F]) -> Option<F> {
    let m = mean(values)?;
    let sq = values.iter().fold(F::zero(), |acc, &v| acc + (v - m) * (v - m));
    Some((sq / F::of_u64(values.len() as u64)).sqrt())
}

/// A count over a total, kept unreduced so both numbers survive into reports.
///
/// A zero denominator marks the value as undefined (e.g. a percentage over an
/// empty corpus); it renders as "—" and serializes with a `null` value.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub struct Fraction {
    numer: u64,
    denom: u64,
}

impl Fraction {
    pub const fn new(numer: u64, denom: u64) -> Self {
        Fraction { numer, denom }
    }

    pub const fn numer(&self) -> u64 {
        self.numer
    }

    pub const fn denom(&self) -> u64 {
        self.denom
    }

    pub const fn is_defined(&self) -> bool {
        self.denom != 0
    }

    pub fn value<F: Scalar>(&self) -> Option<F> {
        if !self.is_defined() {
            return None;
        }
        Some(F::of_u64(self.numer) / F::of_u64(self.denom))
    }

    /// `100 * numer / denom` rounded to the nearest integer, halves rounding up.
    /// Computed in integers so no float error can move a value across a .5 boundary.
    pub fn percent_rounded(&self) -> Option<u64> {
        if !self.is_defined() {
            return None;
        }
        let n = self.numer as u128;
        let d = self.denom as u128;
        Some(((200 * n + d) / (2 * d)) as u64)
    }

    /// True when `0 < numer/denom < 1/100`.
    pub fn is_below_one_percent(&self) -> bool {
        self.is_defined() && self.numer > 0 && (self.numer as u128) * 100 < self.denom as u128
    }
}

#[derive(Serialize, Deserialize)]
struct FractionRepr {
    numer: u64,
    denom: u64,
    #[serde(default)]
    value: Option<f64>,
}

impl Serialize for Fraction {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        FractionRepr { numer: self.numer, denom: self.denom, value: self.value::<f64>() }.serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for Fraction {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let repr = FractionRepr::deserialize(deserializer)?;
        Ok(Fraction::new(repr.numer, repr.denom))
    }
}

/// Exact non-negative rational in lowest terms.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct ExactRatio {
    numer: u128,
    denom: u128,
}

impl ExactRatio {
    /// Panics if `denom` is zero.
    pub fn new(numer: u128, denom: u128) -> Self {
        assert!(denom != 0, "ExactRatio with zero denominator");
        let g = numer.gcd(&denom);
        ExactRatio { numer: numer / g, denom: denom / g }
    }

    pub fn zero() -> Self {
        ExactRatio { numer: 0, denom: 1 }
    }

    pub fn numer(&self) -> u128 {
        self.numer
    }

    pub fn denom(&self) -> u128 {
        self.denom
    }

    pub fn to_scalar<F: Scalar>(&self) -> F {
        F::of_u128(self.numer) / F::of_u128(self.denom)
    }
}
