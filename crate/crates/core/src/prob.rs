//! Exact probabilities. Every threshold test is an integer
//! cross-multiplication; no floating point reaches a decision.

use std::cmp::Ordering;
use std::fmt;

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

/// A reduced fraction in `[0, 1]`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct PairProbability(BigRational);

impl PairProbability {
    /// `favourable / total`, reduced. `total` must be positive and at
    /// least `favourable`.
    pub fn from_counts(favourable: &BigUint, total: &BigUint) -> Self {
        assert!(!total.is_zero(), "probability with zero denominator");
        assert!(favourable <= total, "probability above one");
        PairProbability(BigRational::new(
            BigInt::from(favourable.clone()),
            BigInt::from(total.clone()),
        ))
    }

    pub fn from_ratio(r: BigRational) -> Self {
        assert!(!r.is_negative() && r <= BigRational::one(), "probability outside [0, 1]");
        PairProbability(r)
    }

    pub fn new(num: u64, den: u64) -> Self {
        Self::from_ratio(BigRational::new(num.into(), den.into()))
    }

    pub fn zero() -> Self {
        PairProbability(BigRational::zero())
    }

    pub fn one() -> Self {
        PairProbability(BigRational::one())
    }

    pub fn half() -> Self {
        Self::new(1, 2)
    }

    pub fn numer(&self) -> &BigInt {
        self.0.numer()
    }

    pub fn denom(&self) -> &BigInt {
        self.0.denom()
    }

    pub fn as_ratio(&self) -> &BigRational {
        &self.0
    }

    /// `1 - self`.
    pub fn complement(&self) -> Self {
        PairProbability(BigRational::one() - &self.0)
    }

    /// `1/3 <= self <= 2/3`.
    pub fn is_balanced(&self) -> bool {
        ratio_is_balanced(&self.0)
    }

    /// `self < 1/3`.
    pub fn below_third(&self) -> bool {
        ratio_below_third(&self.0)
    }

    /// `self > 2/3`.
    pub fn above_two_thirds(&self) -> bool {
        let three_num: BigInt = self.numer() * 3u32;
        let two_den: BigInt = self.denom() * 2u32;
        three_num > two_den
    }

    /// `self >= 1/2`.
    pub fn at_least_half(&self) -> bool {
        let two_num: BigInt = self.numer() * 2u32;
        &two_num >= self.denom()
    }

    /// Orders by `|self - 1/2|`, comparing `|2p - q| / q` across fractions
    /// by cross-multiplication.
    pub fn cmp_distance_to_half(&self, other: &Self) -> Ordering {
        let gap = |p: &Self| -> BigInt { (p.numer() * 2u32 - p.denom()).abs() };
        (gap(self) * other.denom()).cmp(&(gap(other) * self.denom()))
    }
}

pub(crate) fn ratio_is_balanced(r: &BigRational) -> bool {
    let three_num: BigInt = r.numer() * 3u32;
    &three_num >= r.denom() && three_num <= r.denom() * 2u32
}

pub(crate) fn ratio_below_third(r: &BigRational) -> bool {
    let three_num: BigInt = r.numer() * 3u32;
    &three_num < r.denom()
}

/// Always `num/den`, including `0/1` and `1/1`.
impl fmt::Display for PairProbability {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.numer(), self.denom())
    }
}

impl fmt::Debug for PairProbability {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// Formats any rational as `num/den`.
pub fn fraction_string(r: &BigRational) -> String {
    format!("{}/{}", r.numer(), r.denom())
}
