//! Floating-point scalar abstraction for the analytic engines.

use std::fmt::{Debug, Display};

/// Scalar type the engines are generic over: f32 or f64.
pub trait Real:
    num_traits::Float
    + num_traits::FloatConst
    + num_traits::FromPrimitive
    + num_traits::NumAssign
    + Debug
    + Display
    + Send
    + Sync
    + 'static
{
}

impl<T> Real for T where
    T: num_traits::Float
        + num_traits::FloatConst
        + num_traits::FromPrimitive
        + num_traits::NumAssign
        + Debug
        + Display
        + Send
        + Sync
        + 'static
{
}

/// Shorthand for a literal constant in the generic scalar type.
#[inline]
pub(crate) fn lit<T: Real>(x: f64) -> T {
    T::from_f64(x).expect("literal representable in scalar type")
}

/// The constant 2 in the generic scalar type.
#[inline]
pub(crate) fn two<T: Real>() -> T {
    T::one() + T::one()
}
