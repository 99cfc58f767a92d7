//! Floating-point abstraction shared by the state-vector engine and gate algebra.

use std::fmt::{Debug, Display, LowerExp};

use num_complex::Complex;
use num_traits::{Float, FloatConst, FromPrimitive, NumAssign};

/// Real scalar type backing every amplitude and matrix entry.
///
/// Implemented for `f32` and `f64`. The numerical tolerances used for
/// unitarity and normalization checks are part of the trait so that single
/// precision does not trip double-precision thresholds.
pub trait Scalar:
    'static
    + Float
    + FloatConst
    + NumAssign
    + FromPrimitive
    + Default
    + Debug
    + Display
    + LowerExp
    + Send
    + Sync
{
    /// Tolerance for unitarity checks and norm preservation.
    fn unitary_tol() -> Self;

    /// Converts an `f64` literal, which always succeeds for the supported types.
    fn lit(value: f64) -> Self {
        Self::from_f64(value).expect("f64 literal representable")
    }
}

impl Scalar for f64 {
    fn unitary_tol() -> Self {
        1e-10
    }
}

impl Scalar for f32 {
    fn unitary_tol() -> Self {
        1e-4
    }
}

/// Complex amplitude over a [`Scalar`].
pub type Amp<T> = Complex<T>;

pub(crate) fn c<T: Scalar>(re: f64, im: f64) -> Amp<T> {
    Complex::new(T::lit(re), T::lit(im))
}

pub(crate) fn is_finite<T: Scalar>(z: Amp<T>) -> bool {
    z.re.is_finite() && z.im.is_finite()
}
