//! Scalar abstraction shared by every numerical routine in the crate.

use std::fmt::{Debug, Display, LowerExp};
use std::iter::Sum;

use num_traits::{Float, FloatConst, FromPrimitive, ToPrimitive};
use serde::de::DeserializeOwned;
use serde::Serialize;

/// Floating-point type the library is generic over.
///
/// Implemented for `f32` and `f64`. Tolerances inside the library are
/// expressed relative to [`Real::epsilon`] where they would otherwise be
/// meaningless at single precision.
pub trait Real:
    Float
    + FloatConst
    + FromPrimitive
    + ToPrimitive
    + Debug
    + Display
    + LowerExp
    + Default
    + Sum
    + Send
    + Sync
    + Serialize
    + DeserializeOwned
    + 'static
{
    /// Converts an `f64` literal into this scalar.
    #[inline]
    fn lit(x: f64) -> Self {
        Self::from_f64(x).expect("f64 literal representable")
    }

    #[inline]
    fn from_usize_lossy(n: usize) -> Self {
        Self::from_usize(n).expect("usize representable")
    }

    #[inline]
    fn from_u64_lossy(n: u64) -> Self {
        Self::from_u64(n).expect("u64 representable")
    }

    #[inline]
    fn to_f64_lossy(self) -> f64 {
        self.to_f64().unwrap_or(f64::NAN)
    }

    /// Relative tolerance used to stop series and certify truncations.
    #[inline]
    fn series_tol() -> Self {
        Self::epsilon() * Self::lit(0.0625)
    }
}

impl Real for f32 {}
impl Real for f64 {}
