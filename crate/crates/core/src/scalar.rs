use std::fmt::{Debug, Display};
use std::iter::Sum;
use std::ops::Neg;

use num_traits::{Float, FloatConst, FromPrimitive, Num, ToPrimitive};

/// Floating-point scalar used by every numerical routine.
pub trait Real:
    Float + FloatConst + FromPrimitive + Sum + Debug + Display + Default + Send + Sync + 'static
{
    fn lit(x: f64) -> Self {
        Self::from_f64(x).expect("literal representable")
    }

    /// Smallest tolerance the type can meaningfully honour.
    fn tol_floor() -> Self {
        Self::epsilon() * Self::lit(16.0)
    }
}

impl Real for f32 {}
impl Real for f64 {}

/// Exact-or-floating field, enough for the Picard-Fuchs recursion.
/// Implemented for `f32`, `f64` and rational types.
pub trait Field: Clone + PartialEq + Num + Neg<Output = Self> + Debug {
    fn int(n: i64) -> Self;

    fn ratio(n: i64, d: i64) -> Self {
        Self::int(n) / Self::int(d)
    }
}

impl<T> Field for T
where
    T: Clone + PartialEq + Num + Neg<Output = T> + Debug + FromPrimitive,
{
    fn int(n: i64) -> Self {
        T::from_i64(n).expect("integer representable")
    }
}

pub(crate) fn to_f64<T: ToPrimitive>(x: T) -> f64 {
    x.to_f64().unwrap_or(f64::NAN)
}
