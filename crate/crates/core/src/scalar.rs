//! Floating-point scalar abstraction.
//!
//! All numerical code in this crate is generic over [`Scalar`], which is
//! implemented for `f32` and `f64`. Concrete aliases for the common types
//! live at the crate root.

use std::fmt::{Debug, Display};
use std::iter::Sum;

use num_traits::{Float, FromPrimitive, ToPrimitive};

/// IEEE floating-point scalar usable throughout the library.
pub trait Scalar:
    Float + FromPrimitive + ToPrimitive + Sum + Debug + Display + Send + Sync + 'static
{
    /// Shorthand conversion from an `f64` constant.
    ///
    /// Panics if the value is not representable, which cannot happen for the
    /// finite tolerances and small integers this crate feeds it.
    #[inline]
    fn of(value: f64) -> Self {
        Self::from_f64(value).expect("constant not representable in scalar type")
    }

    /// Unit in the last place of `self`: the spacing between `|self|` and the
    /// next larger magnitude of the same type (`eps(x)` in MATLAB terms).
    ///
    /// Returns zero for a zero input; callers use this only to derive pivot
    /// tolerances, where a zero norm means a zero matrix and any tolerance
    /// behaves the same.
    fn ulp(self) -> Self {
        if self.is_zero() {
            return Self::zero();
        }
        // x = mantissa * 2^exp with the mantissa carrying the full precision,
        // so the spacing at x is exactly 2^exp.
        let (_, exp, _) = self.integer_decode();
        Self::of(2.0).powi(i32::from(exp))
    }
}

impl Scalar for f32 {}
impl Scalar for f64 {}
