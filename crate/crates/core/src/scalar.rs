use std::fmt::{Debug, Display};
use std::iter::Sum;

use num_traits::{Float, FromPrimitive, NumAssign, ToPrimitive};
use serde::de::DeserializeOwned;
use serde::Serialize;

/// Real number type used by the evaluation model and the metrics: `f32` or `f64`.
///
/// Everything that touches meters, seconds or kilojoules is generic over this
/// trait. Solutions themselves are integer-valued and carry no scalar.
pub trait Scalar:
    Float
    + FromPrimitive
    + ToPrimitive
    + NumAssign
    + Sum
    + Default
    + Debug
    + Display
    + Send
    + Sync
    + Serialize
    + DeserializeOwned
    + 'static
{
    /// Absolute slack used by feasibility comparisons (kJ, s, fruits).
    fn feasibility_tol() -> Self;

    /// Lossy conversion from an `f64` literal.
    #[inline]
    fn of(v: f64) -> Self {
        Self::from_f64(v).expect("f64 literal representable")
    }

    #[inline]
    fn of_u32(v: u32) -> Self {
        Self::from_u32(v).expect("u32 representable")
    }

    #[inline]
    fn as_f64(self) -> f64 {
        self.to_f64().expect("scalar converts to f64")
    }
}

impl Scalar for f64 {
    #[inline]
    fn feasibility_tol() -> Self {
        1e-9
    }
}

impl Scalar for f32 {
    // binary32 cannot resolve 1e-9 on a 432 kJ battery.
    #[inline]
    fn feasibility_tol() -> Self {
        1e-3
    }
}

/// Total order on scalars for sorting; NaN sorts last.
#[inline]
pub fn total_cmp<S: Scalar>(a: &S, b: &S) -> std::cmp::Ordering {
    a.partial_cmp(b).unwrap_or_else(|| a.is_nan().cmp(&b.is_nan()))
}
