use std::fmt::{Debug, Display};

use num_traits::{Float, FromPrimitive, ToPrimitive};

/// Floating point type used for log-domain potentials and probabilities.
///
/// Implemented for `f32` and `f64`. Zero potentials are carried as negative
/// infinity, so the type must have one.
pub trait Scalar: Float + FromPrimitive + ToPrimitive + Debug + Display + Default + Send + Sync + 'static {
    /// Converts a primitive constant; cannot fail for the supported types.
    fn of(x: f64) -> Self {
        Self::from_f64(x).expect("f64 constant representable in scalar type")
    }

    fn of_count(k: usize) -> Self {
        Self::from_usize(k).expect("count representable in scalar type")
    }
}

impl Scalar for f32 {}
impl Scalar for f64 {}
