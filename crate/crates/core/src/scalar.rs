//! Scalar abstraction shared by every numeric routine in the crate.
//!
//! All analytic code is written against [`Real`] so the same channel model,
//! bounds and optimizers run in `f64` (the reference precision) or `f32`.

use std::fmt::{Debug, Display, LowerExp};
use std::iter::Sum;

use num_traits::{Float, FloatConst, FromPrimitive, ToPrimitive};

/// Floating point scalar usable by the channel model.
pub trait Real:
    Float + FloatConst + FromPrimitive + ToPrimitive + Debug + Display + LowerExp + Default + Sum + Send + Sync + 'static
{
    /// Converts an `f64` literal. Literals used in this crate are always
    /// representable (possibly rounded) in every implementor.
    #[inline]
    fn lit(x: f64) -> Self {
        Self::from_f64(x).expect("literal representable in scalar type")
    }

    /// Lossy view as `f64`, used for diagnostics and formatting.
    #[inline]
    fn as_f64(self) -> f64 {
        self.to_f64().unwrap_or(f64::NAN)
    }

    /// Truncates the mantissa so that `s * s` is exact.
    fn split_high(self) -> Self;
}

impl Real for f32 {
    #[inline]
    fn split_high(self) -> Self {
        f32::from_bits(self.to_bits() & 0xffff_f000)
    }
}

impl Real for f64 {
    #[inline]
    fn split_high(self) -> Self {
        f64::from_bits(self.to_bits() & 0xffff_ffff_0000_0000)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn split_high_square_is_exact() {
        let x = 4.123_456_789_012_345_f64;
        let s = x.split_high();
        assert!((x - s).abs() < 1e-5);
        // 21 significant bits squared fits in 53
        assert_eq!(s.mul_add(s, -(s * s)), 0.0);
        let y = 4.123_456_f32;
        assert!((y - y.split_high()).abs() < 1e-2);
    }
}
