//! Scalar abstraction shared by the generic numerical kernels.
//!
//! The root finders, the Sturm-sequence eigensolver and the half-line
//! dispersion relations only need ordinary floating-point arithmetic, so they
//! are written against [`Real`] and work for both `f32` and `f64`. Anything
//! that touches cylinder functions is `f64` only.

use std::fmt::{Debug, Display, LowerExp};

use num_traits::{Float, FloatConst, FromPrimitive};

/// Floating-point type usable by the generic kernels.
pub trait Real:
    Float + FloatConst + FromPrimitive + Debug + Display + LowerExp + Default + Send + Sync + 'static
{
    /// Converts an `f64` literal into `Self`, rounding if necessary.
    #[inline]
    fn lit(x: f64) -> Self {
        Self::from_f64(x).expect("finite literal")
    }

    /// Converts a count into `Self`.
    #[inline]
    fn of_usize(n: usize) -> Self {
        Self::from_usize(n).expect("representable count")
    }
}

impl Real for f32 {}
impl Real for f64 {}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn literals_round_to_target_precision() {
        assert_eq!(<f32 as Real>::lit(0.1), 0.1f32);
        assert_eq!(<f64 as Real>::lit(0.1), 0.1f64);
        assert_eq!(<f64 as Real>::of_usize(512), 512.0);
    }
}
