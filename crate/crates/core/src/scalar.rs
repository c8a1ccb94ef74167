//! Scalar abstraction shared by every numerical routine in the crate.

use std::fmt::{Debug, Display};
use std::iter::Sum;

use num_traits::{Float, FloatConst, FromPrimitive, NumAssign, ToPrimitive};

/// Floating point scalar the solvers are generic over: `f32` or `f64`.
pub trait Real:
    Float + FloatConst + FromPrimitive + ToPrimitive + NumAssign + Sum + Debug + Display + Default + Send + Sync + 'static
{
    /// Converts an `f64` literal. Every finite literal is representable
    /// (possibly rounded) in both `f32` and `f64`.
    #[inline]
    fn lit(x: f64) -> Self {
        Self::from_f64(x).expect("f64 literal representable")
    }

    #[inline]
    fn of_usize(n: usize) -> Self {
        Self::from_usize(n).expect("usize representable")
    }

    #[inline]
    fn two() -> Self {
        Self::one() + Self::one()
    }

    #[inline]
    fn half() -> Self {
        Self::lit(0.5)
    }

    /// Lossy conversion for reporting.
    #[inline]
    fn as_f64(self) -> f64 {
        self.to_f64().unwrap_or(f64::NAN)
    }
}

impl Real for f32 {}
impl Real for f64 {}

/// `max |a - b| / max |b|`, the relative error measure used to compare two
/// sampled solutions of the same quantity. Returns the absolute error when
/// the reference is identically zero.
pub fn max_relative_error<T: Real>(a: &[T], reference: &[T]) -> T {
    debug_assert_eq!(a.len(), reference.len());
    let mut num = T::zero();
    let mut den = T::zero();
    for (&x, &r) in a.iter().zip(reference) {
        num = num.max((x - r).abs());
        den = den.max(r.abs());
    }
    if den > T::zero() {
        num / den
    } else {
        num
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn literals_round_trip() {
        assert_eq!(f64::lit(0.25), 0.25);
        assert_eq!(f32::lit(0.25), 0.25f32);
        assert_eq!(f64::of_usize(7), 7.0);
        assert_eq!(f32::two(), 2.0);
    }

    #[test]
    fn relative_error_normalizes_by_reference_peak() {
        let e = max_relative_error(&[1.0, 2.1], &[1.0, 2.0]);
        assert!((e - 0.05).abs() < 1e-15);
        assert_eq!(max_relative_error(&[0.5], &[0.0]), 0.5);
    }
}
