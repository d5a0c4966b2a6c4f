//! Scalar abstraction: every routine in this crate is generic over the
//! underlying real type through [`Real`], with `f64` aliases exported at the
//! crate root.

use std::fmt::{Debug, Display};
use std::iter::Sum;

use num_complex::Complex;
use num_traits::{Float, FloatConst, FromPrimitive, NumAssign};

/// Floating-point scalar usable throughout the crate (`f32` or `f64`).
pub trait Real:
    Float + FloatConst + FromPrimitive + NumAssign + Sum + Debug + Display + Send + Sync + 'static
{
}

impl Real for f32 {}
impl Real for f64 {}

/// Complex number over a [`Real`] scalar.
pub type Cplx<T> = Complex<T>;

/// Converts an `f64` literal into the working scalar type.
#[inline]
pub(crate) fn lit<T: Real>(x: f64) -> T {
    T::from_f64(x).expect("f64 literal must be representable in the scalar type")
}

/// `e^{i phi}` as a unit-modulus complex number.
#[inline]
pub(crate) fn phase<T: Real>(phi: T) -> Cplx<T> {
    Cplx::from_polar(T::one(), phi)
}

/// Purely imaginary `i x`.
#[inline]
pub(crate) fn imag<T: Real>(x: T) -> Cplx<T> {
    Cplx::new(T::zero(), x)
}

/// Pairwise (cascade) summation over a slice, in a fixed order.
///
/// Used wherever a reproducible, well-conditioned reduction is needed
/// (quadrature node sums in particular).
pub(crate) fn pairwise_sum<T: Real>(terms: &[Cplx<T>]) -> Cplx<T> {
    match terms.len() {
        0 => Cplx::new(T::zero(), T::zero()),
        1 => terms[0],
        2 => terms[0] + terms[1],
        n => {
            let (lo, hi) = terms.split_at(n / 2);
            pairwise_sum(lo) + pairwise_sum(hi)
        }
    }
}
