//! Floating-point abstraction shared by every numeric routine in the crate.

use std::fmt::{Debug, Display};
use std::iter::Sum;

use num_traits::{Float, FromPrimitive, ToPrimitive};
use rand::distributions::uniform::SampleUniform;

/// Real scalar used for edge weights, betweenness and objective values.
///
/// Implemented for `f32` and `f64`. The tie tolerance is the relative
/// threshold under which two path weights are treated as equal.
pub trait Scalar:
    Float
    + FromPrimitive
    + ToPrimitive
    + SampleUniform
    + Sum
    + Default
    + Debug
    + Display
    + Send
    + Sync
    + 'static
{
    /// Relative tolerance for equal-weight path detection.
    const TIE_TOLERANCE: f64;

    /// Lossy conversion from `f64`; panics only on values the type cannot hold at all (never for finite inputs).
    #[inline]
    fn of(x: f64) -> Self {
        Self::from_f64(x).expect("f64 is representable in every Scalar")
    }

    #[inline]
    fn as_f64(self) -> f64 {
        self.to_f64().expect("Scalar converts to f64")
    }

    /// `a` and `b` are equal within `TIE_TOLERANCE * max(1, a)`.
    #[inline]
    fn tie_eq(a: Self, b: Self) -> bool {
        (a - b).abs() <= Self::of(Self::TIE_TOLERANCE) * a.abs().max(Self::one())
    }
}

impl Scalar for f64 {
    const TIE_TOLERANCE: f64 = 1e-12;
}

impl Scalar for f32 {
    const TIE_TOLERANCE: f64 = 1e-5;
}
