use std::fmt::{Debug, Display};
use std::iter::Sum;

use num_traits::{Float, FloatConst, FromPrimitive, ToPrimitive};

/// Real scalar the analysis is generic over.
///
/// Every tolerance used for ordering and equality decisions hangs off this
/// trait so that reduced-precision builds do not inherit `f64` thresholds.
pub trait Scalar:
    Float
    + FloatConst
    + FromPrimitive
    + ToPrimitive
    + Sum
    + Default
    + Debug
    + Display
    + Send
    + Sync
    + 'static
{
    /// Tolerance for equality and ordering decisions.
    const TOL: Self;
    /// Window inside which constructors silently renormalize.
    const NORM_TOL: Self;

    /// Converts an `f64` literal.
    fn lit(x: f64) -> Self {
        Self::from_f64(x).expect("f64 literal representable in scalar type")
    }

    fn from_count(n: usize) -> Self {
        Self::from_usize(n).expect("count representable in scalar type")
    }

    fn two() -> Self {
        Self::one() + Self::one()
    }
}

impl Scalar for f64 {
    const TOL: Self = 1e-12;
    const NORM_TOL: Self = 1e-9;
}

impl Scalar for f32 {
    const TOL: Self = 1e-6;
    const NORM_TOL: Self = 1e-4;
}

/// Binomial coefficient by the multiplicative recurrence.
pub(crate) fn binomial<T: Scalar>(k: usize, n: usize) -> T {
    if n > k {
        return T::zero();
    }
    let n = n.min(k - n);
    let mut acc = T::one();
    for i in 0..n {
        acc = acc * T::from_count(k - i) / T::from_count(i + 1);
    }
    acc
}

/// Natural log of the binomial coefficient, for ranges where the product
/// would overflow.
pub(crate) fn ln_binomial<T: Scalar>(k: usize, n: usize) -> T {
    if n > k {
        return T::neg_infinity();
    }
    let n = n.min(k - n);
    (0..n)
        .map(|i| (T::from_count(k - i) / T::from_count(i + 1)).ln())
        .sum()
}
