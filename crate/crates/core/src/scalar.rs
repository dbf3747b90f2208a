//! Scalar abstraction shared by every numerical routine in the crate.

use std::fmt::{Debug, Display};

use num_complex::Complex;
use num_traits::{Float, FloatConst, FromPrimitive, ToPrimitive};

/// Real floating point type the library can be instantiated with (`f32` or `f64`).
///
/// All tolerances in the crate are stated for `f64`; `f32` instantiations run the
/// same algorithms but only reach single precision.
pub trait Real:
    Float + FloatConst + FromPrimitive + ToPrimitive + Debug + Display + Send + Sync + 'static
{
}

impl<T> Real for T where
    T: Float + FloatConst + FromPrimitive + ToPrimitive + Debug + Display + Send + Sync + 'static
{
}

/// Converts an `f64` constant into `T`.
#[inline]
pub(crate) fn lit<T: Real>(v: f64) -> T {
    T::from_f64(v).expect("f64 constant representable in target type")
}

#[inline]
pub(crate) fn from_usize<T: Real>(v: usize) -> T {
    T::from_usize(v).expect("integer representable in target type")
}

#[inline]
pub(crate) fn real<T: Real>(re: T) -> Complex<T> {
    Complex::new(re, T::zero())
}

#[inline]
pub(crate) fn is_finite<T: Real>(z: Complex<T>) -> bool {
    z.re.is_finite() && z.im.is_finite()
}

/// Integer power by repeated squaring; `n = 0` gives exactly one.
pub(crate) fn powu<T: Real>(z: Complex<T>, mut n: u32) -> Complex<T> {
    let mut acc = real(T::one());
    let mut base = z;
    while n > 0 {
        if n & 1 == 1 {
            acc = acc * base;
        }
        n >>= 1;
        if n > 0 {
            base = base * base;
        }
    }
    acc
}
