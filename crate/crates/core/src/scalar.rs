//! Scalar abstraction shared by every numeric routine in the crate.

use std::fmt::{Debug, Display};
use std::iter::Sum;
use std::str::FromStr;

use num_traits::{Float, FloatConst, FromPrimitive, ToPrimitive};

/// Floating point type the models, solvers and selectors are generic over.
///
/// The two tolerances scale with the precision of the type: `model_tol` is
/// used when validating probability tables read from the outside world, and
/// `identity_tol` is the threshold below which an information quantity is
/// treated as exactly zero.
pub trait Real:
    Float + FloatConst + FromPrimitive + ToPrimitive + Sum + Debug + Display + FromStr + Send + Sync + 'static
{
    const MODEL_TOL: f64;
    const IDENTITY_TOL: f64;

    /// Converts an `f64` literal. Every finite `f64` is representable (with
    /// rounding) in the supported types.
    #[inline]
    fn lit(x: f64) -> Self {
        Self::from_f64(x).expect("finite literal")
    }

    #[inline]
    fn model_tol() -> Self {
        Self::lit(Self::MODEL_TOL)
    }

    #[inline]
    fn identity_tol() -> Self {
        Self::lit(Self::IDENTITY_TOL)
    }

    #[inline]
    fn as_f64(self) -> f64 {
        self.to_f64().unwrap_or(f64::NAN)
    }

    /// Bit-level key used for exact equality hashing.
    #[inline]
    fn bits_key(self) -> (u64, i16, i8) {
        self.integer_decode()
    }
}

impl Real for f64 {
    const MODEL_TOL: f64 = 1e-9;
    const IDENTITY_TOL: f64 = 1e-12;
}

impl Real for f32 {
    const MODEL_TOL: f64 = 1e-5;
    const IDENTITY_TOL: f64 = 1e-6;
}

/// `x * ln(x)` with the convention `0 ln 0 = 0`.
#[inline]
pub(crate) fn xlogx<T: Real>(x: T) -> T {
    if x > T::zero() {
        x * x.ln()
    } else {
        T::zero()
    }
}

/// Dot product summed in four interleaved partial sums, a fixed order
/// that pipelines well.
#[inline]
pub(crate) fn dot<T: Real>(a: &[T], b: &[T]) -> T {
    debug_assert_eq!(a.len(), b.len());
    let n = a.len().min(b.len());
    let (a, b) = (&a[..n], &b[..n]);
    let mut acc = [T::zero(); 4];
    for (x, y) in a.chunks_exact(4).zip(b.chunks_exact(4)) {
        for i in 0..4 {
            acc[i] = acc[i] + x[i] * y[i];
        }
    }
    let tail = n - n % 4;
    let mut sum = (acc[0] + acc[1]) + (acc[2] + acc[3]);
    for i in tail..n {
        sum = sum + a[i] * b[i];
    }
    sum
}
