//! Scalar abstraction: everything numeric is written against [`Real`]
//! so the same code runs in `f32` or `f64`.

use std::fmt::{Debug, Display};

use num_traits::{Float, FromPrimitive, ToPrimitive};

/// Floating-point scalar the model is evaluated in.
///
/// Blanket-implemented for any `num_traits::Float` that can convert
/// to and from `f64`; in practice that means `f32` and `f64`.
pub trait Real:
    Float + FromPrimitive + ToPrimitive + Debug + Display + Send + Sync + 'static
{
    /// Lift an `f64` literal into `Self`. Panics only if the target
    /// type cannot represent any nearby value, which cannot happen
    /// for finite inputs on the provided impls.
    fn of(x: f64) -> Self {
        Self::from_f64(x).expect("finite f64 must be representable")
    }

    /// Lower to `f64` (exact for `f64`, widening for `f32`).
    fn as_f64(self) -> f64 {
        self.to_f64().expect("Real must convert to f64")
    }
}

impl<T> Real for T where
    T: Float + FromPrimitive + ToPrimitive + Debug + Display + Send + Sync + 'static
{
}
