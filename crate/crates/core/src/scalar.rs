//! Scalar abstraction shared by every numerical routine in the crate.
//!
//! All physics is written once over [`Real`]; `f64` is the production scalar
//! and `f32` is supported for low-precision sweeps.

use std::fmt::{Debug, Display, LowerExp};

use num_complex::Complex;
use num_traits::{Float, FloatConst, FromPrimitive, Signed};
use rustfft::FftNum;

/// Real floating-point scalar: `f32` or `f64`.
pub trait Real:
    Float + FloatConst + FromPrimitive + Signed + FftNum + Debug + Display + LowerExp + Default + Send + Sync + 'static
{
    /// Converts an `f64` literal into this scalar type.
    #[inline]
    fn lit(x: f64) -> Self {
        // Never fails for f32/f64: out-of-range values saturate to ±inf.
        Self::from_f64(x).unwrap_or_else(Self::nan)
    }

    /// Relative accuracy target for series and quadrature: 1e-12 in `f64`,
    /// a few ulps above machine epsilon otherwise.
    #[inline]
    fn target_tolerance() -> Self {
        Self::lit(1e-12).max(Self::epsilon() * Self::lit(64.0))
    }

    #[inline]
    fn as_f64(self) -> f64 {
        self.to_f64().unwrap_or(f64::NAN)
    }
}

impl Real for f32 {}
impl Real for f64 {}

/// Shorthand for a complex number over a [`Real`] scalar.
pub type Cx<T> = Complex<T>;

#[inline]
pub(crate) fn cx<T: Real>(re: T, im: T) -> Cx<T> {
    Complex::new(re, im)
}

#[inline]
pub(crate) fn re<T: Real>(x: T) -> Cx<T> {
    Complex::new(x, T::zero())
}

/// Principal square root with the forward-decaying convention: `Re ≥ 0`,
/// and `Im ≥ 0` when the real part vanishes.
pub fn sqrt_forward<T: Real>(z: Cx<T>) -> Cx<T> {
    let mut r = z.sqrt();
    if r.re < T::zero() || (r.re == T::zero() && r.im < T::zero()) {
        r = -r;
    }
    // Normalise signed zeros so that equal inputs give bit-identical outputs.
    if r.re == T::zero() {
        r.re = T::zero();
    }
    r
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sqrt_forward_branch() {
        let r = sqrt_forward(cx(-4.0_f64, -0.0));
        assert_eq!(r, cx(0.0, 2.0));
        let r = sqrt_forward(cx(-4.0_f64, 0.0));
        assert_eq!(r, cx(0.0, 2.0));
        let r = sqrt_forward(cx(3.0_f64, -4.0));
        assert!((r - cx(2.0, -1.0)).norm() < 1e-15);
    }

    #[test]
    fn tolerance_depends_on_precision() {
        assert_eq!(f64::target_tolerance(), 1e-12);
        assert!(f32::target_tolerance() > 1e-6);
    }
}
