//! Scalar abstraction shared by every numeric routine in the crate.

use std::fmt::{Debug, Display};
use std::iter::Sum;
use std::ops::{AddAssign, DivAssign, MulAssign, SubAssign};

use num_traits::{Float, FromPrimitive, ToPrimitive};

/// Floating point scalar: `f32` or `f64`.
pub trait Scalar:
    Float
    + FromPrimitive
    + ToPrimitive
    + AddAssign
    + SubAssign
    + MulAssign
    + DivAssign
    + Sum
    + Default
    + Debug
    + Display
    + Send
    + Sync
    + 'static
{
    /// Lossy conversion from an `f64` literal.
    fn lit(v: f64) -> Self {
        Self::from_f64(v).expect("f64 literal representable")
    }

    fn from_usize_lossy(n: usize) -> Self {
        Self::from_usize(n).expect("usize representable")
    }

    fn to_f64_lossy(self) -> f64 {
        self.to_f64().unwrap_or(f64::NAN)
    }
}

impl Scalar for f32 {}
impl Scalar for f64 {}

/// Neumaier-compensated running sum. Keeps sums of large, mutually cancelling
/// terms (GPR coefficients are large when delta is small) accurate to a few
/// ulps of the result, independent of summation order.
#[derive(Clone, Copy, Debug, Default)]
pub(crate) struct CompensatedSum<T> {
    sum: T,
    carry: T,
}

impl<T: Scalar> CompensatedSum<T> {
    pub(crate) fn new(start: T) -> Self {
        Self { sum: start, carry: T::zero() }
    }

    #[inline]
    pub(crate) fn add(&mut self, v: T) {
        let t = self.sum + v;
        if self.sum.abs() >= v.abs() {
            self.carry += (self.sum - t) + v;
        } else {
            self.carry += (v - t) + self.sum;
        }
        self.sum = t;
    }

    pub(crate) fn value(self) -> T {
        self.sum + self.carry
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn compensated_sum_recovers_cancelled_terms() {
        let terms = [1e16, 1.0, -1e16, 1.0];
        let naive: f64 = terms.iter().sum();
        let mut acc = CompensatedSum::new(0.0);
        for t in terms {
            acc.add(t);
        }
        assert_eq!(naive, 1.0);
        assert_eq!(acc.value(), 2.0);
    }
}
